#include "baire/plan.hpp"

#include "baire/errors.hpp"

namespace baire {

namespace {

std::set<EdgeId> edges_within(const GraphOfGroups& graph, const std::set<VertexId>& vertices,
                              const std::set<EdgeId>& edges) {
  std::set<EdgeId> out;
  for (auto id : edges) {
    const auto& e = graph.edge(id);
    if (vertices.count(e.source) && vertices.count(e.range)) out.insert(id);
  }
  return out;
}

PlanStep::Child build(const GraphOfGroups& graph, const std::set<VertexId>& vertices, const std::set<EdgeId>& edges,
                      CompositionPlan& plan) {
  if (edges.empty()) {
    if (vertices.size() != 1) throw InvariantError("edgeless subgraph with several vertices");
    return {true, *vertices.begin()};
  }
  PlanStep step;
  step.vertices = vertices;
  step.edges = edges;
  std::optional<EdgeId> peeled;
  for (auto id : edges)
    if (!graph.is_tree_edge(id)) {
      peeled = id;
      break;
    }
  if (peeled) {
    step.edge = *peeled;
    step.kind = StepKind::Hnn;
    auto rest = edges;
    rest.erase(*peeled);
    step.children.push_back(build(graph, vertices, rest, plan));
  } else {
    step.edge = *edges.begin();
    step.kind = StepKind::Amalgam;
    auto rest = edges;
    rest.erase(step.edge);
    const auto comps = components(graph, vertices, rest);
    if (comps.size() != 2) throw InvariantError("removing a tree edge must split its subgraph in two");
    const auto& e = graph.edge(step.edge);
    const auto& first = comps[0].count(e.source) ? comps[0] : comps[1];
    const auto& second = comps[0].count(e.source) ? comps[1] : comps[0];
    step.children.push_back(build(graph, first, edges_within(graph, first, rest), plan));
    step.children.push_back(build(graph, second, edges_within(graph, second, rest), plan));
  }
  step.id = static_cast<std::uint32_t>(plan.steps.size());
  plan.steps.push_back(std::move(step));
  return {false, plan.steps.back().id};
}

}  // namespace

CompositionPlan make_plan(const GraphOfGroups& graph) {
  std::set<VertexId> vertices;
  for (const auto& [id, v] : graph.vertices()) vertices.insert(id);
  std::set<EdgeId> edges;
  for (const auto& [id, e] : graph.edges()) edges.insert(id);
  CompositionPlan plan;
  build(graph, vertices, edges, plan);
  return plan;
}

bool plan_is_consistent(const GraphOfGroups& graph, const CompositionPlan& plan) {
  std::set<EdgeId> covered;
  for (const auto& step : plan.steps) {
    auto rest = step.edges;
    rest.erase(step.edge);
    const auto count = components(graph, step.vertices, rest).size();
    if (step.kind == StepKind::Hnn && count != 1) return false;
    if (step.kind == StepKind::Amalgam && count != 2) return false;
    if (!covered.insert(step.edge).second) return false;
  }
  return covered.size() == graph.edges().size() && plan.root().edges.size() == graph.edges().size();
}

}  // namespace baire
