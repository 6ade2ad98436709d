#pragma once

// Assembles the action of the fundamental group: vertex actions upgraded to be almost free,
// then one engine per plan step, innermost first.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "baire/action.hpp"
#include "baire/engine.hpp"
#include "baire/graph_of_groups.hpp"
#include "baire/plan.hpp"
#include "baire/point.hpp"

namespace baire {

// Translation action of a vertex group, passed through the almost-free upgrade for `f`.
std::shared_ptr<Action> prepare_vertex_action(PointTable& table, std::shared_ptr<const BaseGroupNode> group,
                                              const std::vector<GroupElement>& f);

// Nontrivial images of incident edge groups at v, as elements of the vertex group.
std::vector<GroupElement> incident_images(const GraphOfGroups& graph, VertexId v);

struct LedgerEntry {
  VertexId vertex = 0;
  BaseElement h;
  GroupElement element;  // h in the fundamental group
  std::string chain;     // constructions that carried the empty fixed-point set up to the root
};

struct AuditResult {
  std::size_t sampled = 0;
  std::size_t checks = 0;
  std::size_t fixed = 0;
  std::string first_failure;
};

class Composition {
 public:
  explicit Composition(std::string_view input);
  explicit Composition(GraphOfGroups graph);
  Composition(const Composition&) = delete;
  Composition& operator=(const Composition&) = delete;

  const GraphOfGroups& graph() const noexcept { return graph_; }
  const CompositionPlan& plan() const noexcept { return plan_; }
  const ComposedGroup& group() const noexcept { return *group_; }
  PointTable& table() noexcept { return *table_; }

  std::shared_ptr<Action> vertex_action(VertexId v) const { return vertex_actions_.at(v); }
  Engine& engine(std::uint32_t step) const { return *engines_.at(step); }
  Engine& root() const { return *engines_.back(); }
  std::size_t engine_count() const noexcept { return engines_.size(); }

  // Runs `budget` requirements on every engine, innermost first.
  void run(std::size_t budget);
  void freeze(bool frozen);

  // One entry per vertex and nontrivial incident edge image. Throws InvariantError on a gap.
  std::vector<LedgerEntry> ledger() const;
  // Checks every ledger element against the first `samples` registry points of the root.
  AuditResult audit_ledger(std::size_t samples = 1000) const;

 private:
  void build();

  GraphOfGroups graph_;
  CompositionPlan plan_;
  std::unique_ptr<ComposedGroup> group_;
  std::unique_ptr<PointTable> table_;
  std::map<VertexId, std::shared_ptr<Action>> vertex_actions_;
  std::vector<std::shared_ptr<Engine>> engines_;
};

}  // namespace baire
