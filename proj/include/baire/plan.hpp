#pragma once

// Edge-by-edge reduction of a graph of groups into nested HNN and amalgam steps.

#include "baire/graph_of_groups.hpp"

namespace baire {

// Peels the least non-tree edge first (HNN over the connected remainder), otherwise the
// least tree edge (amalgam of the two components). Single vertices are the base cases.
CompositionPlan make_plan(const GraphOfGroups& graph);

// Re-checks the connectivity predicate of every step: removing the step's edge leaves its
// subgraph connected for HNN steps and splits it in two for amalgam steps.
bool plan_is_consistent(const GraphOfGroups& graph, const CompositionPlan& plan);

}  // namespace baire
