#include "baire/composer.hpp"

#include "baire/errors.hpp"

namespace baire {

std::shared_ptr<Action> prepare_vertex_action(PointTable& table, std::shared_ptr<const BaseGroupNode> group,
                                              const std::vector<GroupElement>& f) {
  auto translation = std::make_shared<TranslationAction>(table, std::move(group));
  return upgrade_almost_free(translation, f);
}

std::vector<GroupElement> incident_images(const GraphOfGroups& graph, VertexId v) {
  std::vector<GroupElement> out;
  auto add = [&](const BaseElement& x) {
    auto g = BaseGroupNode::wrap(x);
    if (x == graph.vertex(v).group.identity()) return;
    for (const auto& y : out)
      if (y == g) return;
    out.push_back(g);
  };
  for (const auto& [id, e] : graph.edges()) {
    if (e.source == v)
      for (const auto& x : e.s_images) add(x);
    if (e.range == v)
      for (const auto& x : e.r_images) add(x);
  }
  return out;
}

Composition::Composition(std::string_view input) : Composition(parse_graph(input)) {}

Composition::Composition(GraphOfGroups graph) : graph_(std::move(graph)) { build(); }

void Composition::build() {
  plan_ = make_plan(graph_);
  group_ = std::make_unique<ComposedGroup>(graph_, plan_);
  table_ = std::make_unique<PointTable>();
  for (const auto& [v, spec] : graph_.vertices())
    vertex_actions_[v] = prepare_vertex_action(*table_, group_->vertex_group(v), incident_images(graph_, v));
  for (const auto& step : plan_.steps) {
    std::vector<std::shared_ptr<Action>> inners;
    for (const auto& child : step.children)
      inners.push_back(child.is_vertex ? vertex_actions_.at(child.id)
                                       : std::static_pointer_cast<Action>(engines_.at(child.id)));
    engines_.push_back(std::make_shared<Engine>(*table_, step, group_->step_group(step.id), std::move(inners)));
  }
}

void Composition::run(std::size_t budget) {
  for (auto& e : engines_) e->run_schedule(budget);
}

void Composition::freeze(bool frozen) {
  for (auto& e : engines_) e->freeze(frozen);
}

std::vector<LedgerEntry> Composition::ledger() const {
  std::vector<LedgerEntry> out;
  const auto& fix = root().guarantees().fix_empty;
  for (const auto& [v, spec] : graph_.vertices()) {
    for (const auto& g : incident_images(graph_, v)) {
      LedgerEntry entry;
      entry.vertex = v;
      entry.h = g.base;
      entry.element = group_->group().include_vertex(v, g.base);
      auto it = fix.find(entry.element.encode());
      if (it == fix.end())
        throw InvariantError("ledger gap: " + group_->group().format(entry.element) +
                             " has no recorded empty fixed-point set");
      entry.chain = it->second.second;
      out.push_back(std::move(entry));
    }
  }
  return out;
}

AuditResult Composition::audit_ledger(std::size_t samples) const {
  AuditResult out;
  const auto entries = ledger();
  Engine& r = root();
  for (std::size_t k = 0; k < samples; ++k) {
    const PointId x = r.point(k);
    ++out.sampled;
    for (const auto& e : entries) {
      ++out.checks;
      if (r.apply(e.element, x) == x) {
        if (out.fixed++ == 0)
          out.first_failure = group_->group().format(e.element) + " fixes " + table_->text(x);
      }
    }
  }
  return out;
}

}  // namespace baire
