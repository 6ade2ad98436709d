#pragma once

// Graphs of groups with finite edge groups: input parsing, validation, and the fundamental
// group's word problem through nested HNN/amalgam normal forms.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "baire/base_groups.hpp"
#include "baire/group.hpp"

namespace baire {

struct VertexSpec {
  VertexId id = 0;
  BaseGroup group{0, FiniteGroup{}};
  int line = 0;
};

struct EdgeSpec {
  EdgeId id = 0;
  VertexId source = 0;
  VertexId range = 0;
  FiniteGroup sigma;
  std::vector<BaseElement> s_images;
  std::vector<BaseElement> r_images;
  bool tree = false;
  int line = 0;

  bool is_loop() const { return source == range; }
};

class GraphOfGroups {
 public:
  const std::map<VertexId, VertexSpec>& vertices() const noexcept { return vertices_; }
  const std::map<EdgeId, EdgeSpec>& edges() const noexcept { return edges_; }
  const VertexSpec& vertex(VertexId v) const;
  const EdgeSpec& edge(EdgeId e) const;

  bool is_tree_edge(EdgeId e) const { return edge(e).tree; }

  // Header keys ("seed", "budget", ...) in input order of appearance.
  const std::map<std::string, std::string>& header() const noexcept { return header_; }
  std::uint64_t seed() const;

  friend GraphOfGroups parse_graph(std::string_view text);

 private:
  std::map<VertexId, VertexSpec> vertices_;
  std::map<EdgeId, EdgeSpec> edges_;
  std::map<std::string, std::string> header_;
};

// Throws ValidationError (with line number) on any malformed or invalid datum.
GraphOfGroups parse_graph(std::string_view text);

// Connected components of the subgraph on `vertices` using only `edges`.
std::vector<std::set<VertexId>> components(const GraphOfGroups& graph, const std::set<VertexId>& vertices,
                                           const std::set<EdgeId>& edges);

enum class StepKind : std::uint8_t { Hnn, Amalgam };

// One edge elimination. Children are either earlier steps or bare vertices.
struct PlanStep {
  struct Child {
    bool is_vertex = true;
    std::uint32_t id = 0;
  };

  std::uint32_t id = 0;
  EdgeId edge = 0;
  StepKind kind = StepKind::Hnn;
  std::set<VertexId> vertices;
  std::set<EdgeId> edges;
  std::vector<Child> children;  // HNN: {H}; amalgam: {G1 (source side), G2 (range side)}
};

struct CompositionPlan {
  std::vector<PlanStep> steps;  // innermost first; the last step covers the whole graph

  const PlanStep& root() const { return steps.back(); }
  std::string serialize() const;
};

// The fundamental group, realised as the nested groups of a composition plan.
class ComposedGroup {
 public:
  ComposedGroup(const GraphOfGroups& graph, const CompositionPlan& plan);

  const Group& group() const { return *root_; }
  std::shared_ptr<const Group> root_ptr() const { return root_; }
  std::shared_ptr<const Group> step_group(std::uint32_t step) const { return steps_.at(step); }
  std::shared_ptr<const Group> child_group(const PlanStep::Child& child) const;
  std::shared_ptr<const BaseGroupNode> vertex_group(VertexId v) const { return vertices_.at(v); }
  const CompositionPlan& plan() const noexcept { return plan_; }

  // Britton reduction of a word to its normal form.
  GroupElement britton_reduce(const Word& word) const { return root_->evaluate(word); }

  // Canonical representative of the right coset H g, where H is the distinguished subgroup
  // of `step` (the base of an HNN step, or factor `factor` of an amalgam step).
  GroupElement coset_rep(std::uint32_t step, const GroupElement& g, int factor = 1) const;

 private:
  CompositionPlan plan_;
  std::map<VertexId, std::shared_ptr<const BaseGroupNode>> vertices_;
  std::vector<std::shared_ptr<const Group>> steps_;
  std::shared_ptr<const Group> root_;
};

}  // namespace baire
