#include "baire/graph_of_groups.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

#include "baire/errors.hpp"

namespace baire {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::uint32_t parse_id(const std::string& tok, int line, const char* what) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ValidationError(std::string("malformed ") + what + " id '" + tok + "'", line);
  return static_cast<std::uint32_t>(std::stoul(tok));
}

FiniteGroup parse_table(const std::string& tok, int line, const std::string& context) {
  if (tok.rfind("table:", 0) != 0) throw ValidationError(context + ": expected 'table:<rows>', got '" + tok + "'", line);
  std::vector<std::vector<FiniteGroup::Index>> rows;
  std::stringstream rows_in(tok.substr(6));
  std::string row;
  while (std::getline(rows_in, row, ';')) {
    std::vector<FiniteGroup::Index> entries;
    std::stringstream row_in(row);
    std::string cell;
    while (std::getline(row_in, cell, ',')) entries.push_back(parse_id(cell, line, "table entry"));
    rows.push_back(std::move(entries));
  }
  try {
    return FiniteGroup::from_table(std::move(rows));
  } catch (const ValidationError& e) {
    throw ValidationError(context + ": " + e.what(), line);
  }
}

std::vector<BaseElement> parse_images(const std::string& list, int line, const std::string& context) {
  std::vector<BaseElement> out;
  std::size_t pos = 0;
  while (pos < list.size()) {
    if (list[pos] == ',') {
      ++pos;
      continue;
    }
    const auto close = list.find(')', pos);
    if (list[pos] != '(' || close == std::string::npos)
      throw ValidationError(context + ": malformed image list '" + list + "'", line);
    try {
      out.push_back(parse_base(std::string_view(list).substr(pos, close - pos + 1)));
    } catch (const ValidationError& e) {
      throw ValidationError(context + ": " + e.what(), line);
    }
    pos = close + 1;
  }
  return out;
}

}  // namespace

const VertexSpec& GraphOfGroups::vertex(VertexId v) const {
  auto it = vertices_.find(v);
  if (it == vertices_.end()) throw ValidationError("unknown vertex v" + std::to_string(v));
  return it->second;
}

const EdgeSpec& GraphOfGroups::edge(EdgeId e) const {
  auto it = edges_.find(e);
  if (it == edges_.end()) throw ValidationError("unknown edge e" + std::to_string(e));
  return it->second;
}

std::uint64_t GraphOfGroups::seed() const {
  auto it = header_.find("seed");
  return it == header_.end() ? 1 : std::stoull(it->second);
}

GraphOfGroups parse_graph(std::string_view text) {
  GraphOfGroups g;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  bool any_tree_marker = false;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto tok = split_ws(raw);
    if (tok.empty()) continue;
    if (tok[0] == "vertex") {
      // vertex <id> group Z^<d> [x table:<rows>]
      if (tok.size() < 4 || tok[2] != "group") throw ValidationError("expected 'vertex <id> group Z^<d> x table:<rows>'", line);
      VertexSpec v;
      v.id = parse_id(tok[1], line, "vertex");
      v.line = line;
      if (tok[3].rfind("Z^", 0) != 0) throw ValidationError("vertex group must be written Z^<d>", line);
      const auto rank = parse_id(tok[3].substr(2), line, "rank");
      FiniteGroup finite;
      if (tok.size() >= 6 && tok[4] == "x") {
        finite = parse_table(tok[5], line, "vertex v" + std::to_string(v.id));
      } else if (tok.size() != 4) {
        throw ValidationError("expected 'x table:<rows>' after the free rank", line);
      }
      v.group = BaseGroup(rank, std::move(finite));
      if (!g.vertices_.emplace(v.id, std::move(v)).second)
        throw ValidationError("duplicate vertex id " + tok[1], line);
    } else if (tok[0] == "edge") {
      // edge <id> from <v> to <v> sigma table:<rows> s_images:<list> r_images:<list> [tree]
      if (tok.size() < 10 || tok[2] != "from" || tok[4] != "to" || tok[6] != "sigma")
        throw ValidationError("expected 'edge <id> from <v> to <v> sigma table:<rows> s_images:<list> r_images:<list> [tree]'", line);
      EdgeSpec e;
      e.id = parse_id(tok[1], line, "edge");
      e.line = line;
      const std::string ctx = "edge e" + std::to_string(e.id);
      e.source = parse_id(tok[3], line, "vertex");
      e.range = parse_id(tok[5], line, "vertex");
      if (tok[7].rfind("Z^", 0) == 0 && tok[7] != "Z^0")
        throw ValidationError(ctx + ": edge group must be finite", line);
      e.sigma = parse_table(tok[7], line, ctx);
      if (tok[8].rfind("s_images:", 0) != 0 || tok[9].rfind("r_images:", 0) != 0)
        throw ValidationError(ctx + ": expected s_images:<list> r_images:<list>", line);
      e.s_images = parse_images(tok[8].substr(9), line, ctx);
      e.r_images = parse_images(tok[9].substr(9), line, ctx);
      if (tok.size() >= 11) {
        if (tok[10] != "tree" || tok.size() > 11) throw ValidationError(ctx + ": unexpected trailing tokens", line);
        e.tree = true;
        any_tree_marker = true;
      }
      if (!g.edges_.emplace(e.id, std::move(e)).second) throw ValidationError("duplicate edge id " + tok[1], line);
    } else {
      if (tok.size() != 2) throw ValidationError("header lines are '<key> <value>'", line);
      g.header_[tok[0]] = tok[1];
    }
  }

  if (g.vertices_.empty()) throw ValidationError("graph has no vertices");
  if (g.edges_.empty()) throw ValidationError("graph is trivial: it needs at least one edge pair {e, e-bar}");
  for (auto& [id, e] : g.edges_) {
    const std::string ctx = "edge e" + std::to_string(id);
    auto s = g.vertices_.find(e.source);
    auto r = g.vertices_.find(e.range);
    if (s == g.vertices_.end()) throw ValidationError(ctx + ": dangling incidence, no vertex v" + std::to_string(e.source), e.line);
    if (r == g.vertices_.end()) throw ValidationError(ctx + ": dangling incidence, no vertex v" + std::to_string(e.range), e.line);
    if (auto bad = check_embedding(e.sigma, s->second.group, e.s_images))
      throw ValidationError(ctx + ": s_images is not an embedding: " + *bad, e.line);
    if (auto bad = check_embedding(e.sigma, r->second.group, e.r_images))
      throw ValidationError(ctx + ": r_images is not an embedding: " + *bad, e.line);
    if (e.tree && e.is_loop()) throw ValidationError(ctx + ": a loop cannot be a tree edge", e.line);
  }

  std::set<VertexId> all_vertices;
  for (auto& [id, v] : g.vertices_) all_vertices.insert(id);
  std::set<EdgeId> all_edges;
  for (auto& [id, e] : g.edges_) all_edges.insert(id);
  if (components(g, all_vertices, all_edges).size() != 1) throw ValidationError("graph is disconnected");

  if (any_tree_marker) {
    std::set<EdgeId> tree;
    for (auto& [id, e] : g.edges_)
      if (e.tree) tree.insert(id);
    if (tree.size() + 1 != all_vertices.size() || components(g, all_vertices, tree).size() != 1)
      throw ValidationError("edges marked 'tree' do not form a spanning tree");
  } else {
    // BFS from the least vertex id, ties by edge id.
    std::set<VertexId> seen{all_vertices.begin() == all_vertices.end() ? 0 : *all_vertices.begin()};
    std::deque<VertexId> queue{*all_vertices.begin()};
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto& [id, e] : g.edges_) {
        if (e.is_loop()) continue;
        VertexId other;
        if (e.source == u) other = e.range;
        else if (e.range == u) other = e.source;
        else continue;
        if (seen.insert(other).second) {
          e.tree = true;
          queue.push_back(other);
        }
      }
    }
  }
  return g;
}

std::vector<std::set<VertexId>> components(const GraphOfGroups& graph, const std::set<VertexId>& vertices,
                                           const std::set<EdgeId>& edges) {
  std::vector<std::set<VertexId>> out;
  std::set<VertexId> seen;
  for (auto start : vertices) {
    if (seen.count(start)) continue;
    std::set<VertexId> comp{start};
    std::deque<VertexId> queue{start};
    seen.insert(start);
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto id : edges) {
        const auto& e = graph.edge(id);
        VertexId other;
        if (e.source == u) other = e.range;
        else if (e.range == u) other = e.source;
        else continue;
        if (vertices.count(other) && seen.insert(other).second) {
          comp.insert(other);
          queue.push_back(other);
        }
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

std::string CompositionPlan::serialize() const {
  std::ostringstream out;
  for (const auto& s : steps) {
    out << "step " << s.id << " edge e" << s.edge << " kind " << (s.kind == StepKind::Hnn ? "hnn" : "amalgam")
        << " children";
    for (const auto& c : s.children) out << ' ' << (c.is_vertex ? "v" : "s") << c.id;
    out << '\n';
  }
  return out.str();
}

ComposedGroup::ComposedGroup(const GraphOfGroups& graph, const CompositionPlan& plan) : plan_(plan) {
  for (const auto& [id, v] : graph.vertices()) vertices_[id] = std::make_shared<const BaseGroupNode>(id, v.group);
  for (const auto& step : plan_.steps) {
    const auto& e = graph.edge(step.edge);
    if (step.kind == StepKind::Hnn) {
      auto base = child_group(step.children.at(0));
      std::vector<GroupElement> sigma_images, theta_images;
      for (std::size_t x = 0; x < e.sigma.order(); ++x) {
        sigma_images.push_back(base->include_vertex(e.range, e.r_images[x]));
        theta_images.push_back(base->include_vertex(e.source, e.s_images[x]));
      }
      steps_.push_back(std::make_shared<const HnnGroup>(e.id, base, e.sigma, std::move(sigma_images), std::move(theta_images)));
    } else {
      auto first = child_group(step.children.at(0));
      auto second = child_group(step.children.at(1));
      std::vector<GroupElement> first_images, second_images;
      for (std::size_t x = 0; x < e.sigma.order(); ++x) {
        first_images.push_back(first->include_vertex(e.source, e.s_images[x]));
        second_images.push_back(second->include_vertex(e.range, e.r_images[x]));
      }
      steps_.push_back(std::make_shared<const AmalgamGroup>(e.id, first, second, e.sigma, std::move(first_images),
                                                            std::move(second_images)));
    }
  }
  if (steps_.empty()) throw InvariantError("composition plan has no steps");
  root_ = steps_.back();
}

std::shared_ptr<const Group> ComposedGroup::child_group(const PlanStep::Child& child) const {
  if (child.is_vertex) return vertices_.at(child.id);
  return steps_.at(child.id);
}

GroupElement ComposedGroup::coset_rep(std::uint32_t step, const GroupElement& g, int factor) const {
  const auto& group = steps_.at(step);
  if (auto hnn = std::dynamic_pointer_cast<const HnnGroup>(group)) return hnn->split_base(g).second;
  auto amalgam = std::dynamic_pointer_cast<const AmalgamGroup>(group);
  return amalgam->split_factor(factor, g).second;
}

}  // namespace baire
