#include "baire/action.hpp"

#include <algorithm>
#include <cstdlib>

#include "baire/errors.hpp"

namespace baire {

std::size_t capped_budget(std::size_t requested) {
  if (const char* cap = std::getenv("BAIRE_BUDGET_CAP")) {
    char* end = nullptr;
    const auto value = std::strtoull(cap, &end, 10);
    if (end != cap && *end == '\0') return std::min<std::size_t>(requested, value);
  }
  return requested;
}

std::vector<PointId> Action::folner_candidate(std::size_t) {
  throw InvariantError("this action provides no Følner sequence");
}

std::optional<PointId> Action::moved_point(const GroupElement& g, std::size_t budget) {
  budget = capped_budget(budget);
  for (std::size_t k = 0; k < budget; ++k) {
    const auto x = point(k);
    if (apply(g, x) != x) return x;
  }
  return std::nullopt;
}

std::optional<std::size_t> Action::fixed_point_count(const GroupElement&) { return std::nullopt; }

std::size_t moved_count(Action& action, const GroupElement& g, const std::vector<PointId>& c) {
  std::unordered_set<PointId> members(c.begin(), c.end());
  std::size_t escaped = 0;
  for (auto x : c)
    if (!members.count(action.apply(g, x))) ++escaped;
  return 2 * escaped;
}

std::vector<PointId> saturate(Action& action, const std::vector<GroupElement>& k, const std::vector<PointId>& c) {
  std::vector<PointId> out;
  std::unordered_set<PointId> seen;
  for (auto x : c)
    for (const auto& g : k) {
      const auto y = action.apply(g, x);
      if (seen.insert(y).second) out.push_back(y);
    }
  return out;
}

Ratio FolnerWitness::worst() const {
  Ratio w(0);
  for (auto m : moved) w = std::max(w, Ratio(static_cast<std::int64_t>(m), static_cast<std::int64_t>(points.size())));
  return w;
}

bool FolnerWitness::holds() const { return !points.empty() && worst() < bound; }

FolnerWitness measure(Action& action, const Group& labels_from, const std::vector<GroupElement>& generators,
                      std::vector<PointId> points, Ratio bound) {
  FolnerWitness w;
  w.points = std::move(points);
  w.generators = generators;
  w.bound = bound;
  for (const auto& g : generators) {
    w.labels.push_back(labels_from.format(g));
    w.moved.push_back(moved_count(action, g, w.points));
  }
  return w;
}

FolnerWitness folner(Action& action, const std::vector<GroupElement>& generators, Ratio epsilon, std::size_t budget,
                     const std::vector<GroupElement>& saturate_by, std::size_t start, std::size_t* found) {
  budget = capped_budget(budget);
  for (std::size_t k = start; k < start + budget; ++k) {
    auto c = action.folner_candidate(k);
    if (!saturate_by.empty()) c = saturate(action, saturate_by, c);
    auto w = measure(action, action.group(), generators, std::move(c), epsilon);
    if (w.holds()) {
      if (found) *found = k;
      return w;
    }
  }
  throw BudgetError("no Følner set with ratio < " + to_string(epsilon) + " among " + std::to_string(budget) +
                    " candidates");
}

FolnerWitness folner_grow(Action& action, const std::vector<GroupElement>& generators, Ratio epsilon,
                          std::size_t min_size, std::size_t budget) {
  budget = capped_budget(budget);
  std::vector<PointId> together;
  std::unordered_set<PointId> seen;
  for (std::size_t k = 0; k < budget; ++k) {
    auto c = action.folner_candidate(k);
    if (!measure(action, action.group(), generators, c, epsilon).holds()) continue;
    for (auto x : c)
      if (seen.insert(x).second) together.push_back(x);
    if (together.size() < min_size) continue;
    auto w = measure(action, action.group(), generators, together, epsilon);
    if (w.holds()) return w;
  }
  throw BudgetError("no Følner set of size >= " + std::to_string(min_size) + " with ratio < " + to_string(epsilon) +
                    " within " + std::to_string(budget) + " candidates");
}

// ---------------------------------------------------------------------------

TranslationAction::TranslationAction(PointTable& table, std::shared_ptr<const BaseGroupNode> group)
    : Action(table), group_(std::move(group)), enumerator_(group_->base()) {
  if (!group_->is_infinite())
    throw ValidationError("vertex v" + std::to_string(group_->vertex()) +
                          " has a finite group; finite vertex groups are out of scope (the group would be virtually free)");
  guarantees_.faithful.why = "translation";
  guarantees_.infinite_orbits.why = "translation";
  guarantees_.amenable.why = "translation";
  guarantees_.free.why = "translation";
}

PointId TranslationAction::apply(const GroupElement& g, PointId x) {
  const auto& d = table_->at(x);
  return table_->base(d.tag, group_->base().mul(g.base, d.element.base));
}

PointId TranslationAction::point(std::size_t k) {
  while (enumerated_.size() <= k) enumerated_.push_back(table_->base(group_->vertex(), *enumerator_.next()));
  return enumerated_[k];
}

std::vector<PointId> TranslationAction::folner_candidate(std::size_t k) {
  const auto& base = group_->base();
  const auto side = static_cast<std::int64_t>(k + 1);
  std::vector<PointId> out;
  std::vector<std::int64_t> v(base.rank(), 0);
  while (true) {
    for (FiniteGroup::Index f = 0; f < base.finite().order(); ++f) out.push_back(table_->base(group_->vertex(), {v, f}));
    std::size_t i = v.size();
    while (i > 0 && v[i - 1] == side - 1) v[--i] = 0;
    if (i == 0) break;
    ++v[i - 1];
  }
  return out;
}

std::optional<PointId> TranslationAction::moved_point(const GroupElement& g, std::size_t) {
  if (group_->is_identity(g)) return std::nullopt;
  return point(0);
}

std::optional<std::size_t> TranslationAction::fixed_point_count(const GroupElement& g) {
  if (group_->is_identity(g)) return std::nullopt;
  return 0;
}

// ---------------------------------------------------------------------------

OffDiagonalAction::OffDiagonalAction(std::shared_ptr<Action> inner, std::size_t m)
    : Action(inner->table()), inner_(std::move(inner)), m_(m) {
  if (m_ == 0) throw ValidationError("off-diagonal power needs m >= 1");
  const auto& g = inner_->guarantees();
  if (g.amenable && g.infinite_orbits) guarantees_.amenable.why = "offdiag-amenable";
  if (g.infinite_orbits) guarantees_.infinite_orbits.why = "offdiag-orbits";
  if (g.faithful) guarantees_.faithful.why = "offdiag-faithful";
  if (g.free) guarantees_.free.why = "offdiag-free";
  for (const auto& [key, entry] : g.fix_empty) guarantees_.add_fix_empty(entry.first, entry.second + " > offdiag");
}

PointId OffDiagonalAction::apply(const GroupElement& g, PointId x) {
  std::vector<PointId> entries;
  for (auto y : table_->at(x).children) entries.push_back(inner_->apply(g, y));
  return table_->tuple(entries);
}

PointId OffDiagonalAction::point(std::size_t k) {
  // Distinct index tuples by largest index, then lexicographically.
  while (enumerated_.size() <= k) {
    const std::size_t r = enum_radius_++;
    if (r + 1 < m_) continue;
    std::vector<std::size_t> idx(m_, 0);
    while (true) {
      const bool has_max = std::find(idx.begin(), idx.end(), r) != idx.end();
      std::vector<std::size_t> sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
      if (has_max && distinct) {
        std::vector<PointId> entries;
        for (auto i : idx) entries.push_back(inner_->point(i));
        enumerated_.push_back(table_->tuple(entries));
      }
      std::size_t i = m_;
      while (i > 0 && idx[i - 1] == r) idx[--i] = 0;
      if (i == 0) break;
      ++idx[i - 1];
    }
  }
  return enumerated_[k];
}

std::vector<PointId> OffDiagonalAction::folner_candidate(std::size_t k) {
  const auto c = inner_->folner_candidate(k);
  std::vector<PointId> out;
  if (c.size() < m_) return out;
  std::vector<std::size_t> idx(m_, 0);
  while (true) {
    std::vector<std::size_t> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
      std::vector<PointId> entries;
      for (auto i : idx) entries.push_back(c[i]);
      out.push_back(table_->tuple(entries));
    }
    std::size_t i = m_;
    while (i > 0 && idx[i - 1] == c.size() - 1) idx[--i] = 0;
    if (i == 0) break;
    ++idx[i - 1];
  }
  return out;
}

std::optional<std::size_t> OffDiagonalAction::fixed_point_count(const GroupElement& g) {
  const auto f = inner_->fixed_point_count(g);
  if (!f) return std::nullopt;
  std::size_t count = 1;
  for (std::size_t i = 0; i < m_; ++i) count *= (*f > i ? *f - i : 0);
  return count;
}

std::shared_ptr<Action> offdiag_power(std::shared_ptr<Action> inner, std::size_t m) {
  if (m == 1) return inner;
  return std::make_shared<OffDiagonalAction>(std::move(inner), m);
}

std::shared_ptr<Action> upgrade_almost_free(std::shared_ptr<Action> inner, const std::vector<GroupElement>& f) {
  std::size_t worst = 0;
  for (const auto& g : f) {
    if (inner->group().is_identity(g)) throw ValidationError("the identity cannot be made fixed-point free");
    const auto count = inner->fixed_point_count(g);
    if (!count) throw BudgetError("fixed-point count of " + inner->group().format(g) + " is unavailable");
    worst = std::max(worst, *count);
  }
  const std::size_t m = worst + 1;
  auto out = offdiag_power(std::move(inner), m);
  for (const auto& g : f) out->guarantees().add_fix_empty(g, m == 1 ? "fixed-point count 0" : "offdiag-free m=" + std::to_string(m));
  return out;
}

OffDiagonalCounts offdiag_interval_counts(std::int64_t n, std::size_t m) {
  OffDiagonalCounts out;
  std::vector<std::int64_t> t(m, 0);
  if (n <= 0) return out;
  while (true) {
    ++out.cube;
    bool distinct = true;
    bool escapes = false;
    for (std::size_t i = 0; i < m && distinct; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (t[i] == t[j]) {
          distinct = false;
          break;
        }
    if (!distinct) {
      ++out.diagonal;
    } else {
      for (auto v : t)
        if (v + 1 >= n) escapes = true;
      if (escapes) out.moved += 2;
    }
    std::size_t i = m;
    while (i > 0 && t[i - 1] == n - 1) t[--i] = 0;
    if (i == 0) break;
    ++t[i - 1];
  }
  return out;
}

// ---------------------------------------------------------------------------

InducedAction::InducedAction(std::shared_ptr<Action> inner, std::shared_ptr<const CosetSplitter> splitter,
                             std::uint32_t step)
    : Action(inner->table()),
      inner_(std::move(inner)),
      splitter_(std::move(splitter)),
      step_(step),
      ball_(std::make_unique<BallEnumerator>(splitter_->ambient())) {
  const auto& g = inner_->guarantees();
  if (g.faithful) guarantees_.faithful.why = "induced-faithful";
  if (g.infinite_orbits) guarantees_.infinite_orbits.why = "induced-orbits (finite edge group, almost malnormal)";
  for (const auto& [key, entry] : g.fix_empty)
    guarantees_.add_fix_empty(splitter_->embed(entry.first), entry.second + " > induced");
}

PointId InducedAction::canonicalize(PointId y, const GroupElement& g) {
  auto [h, rep] = splitter_->split(g);
  const auto moved = inner_->apply(splitter_->subgroup().inverse(h), y);
  return table_->induced(step_, moved, rep);
}

PointId InducedAction::embed(PointId y) { return table_->induced(step_, y, splitter_->ambient().identity()); }

PointId InducedAction::apply(const GroupElement& g, PointId x) {
  const auto& d = table_->at(x);
  if (d.kind != PointData::Kind::Induced || d.tag != step_) throw InvariantError("point outside the induced action");
  const auto& ambient = splitter_->ambient();
  const PointId y = d.children[0];
  const auto r = ambient.mul(d.element, ambient.inverse(g));
  return canonicalize(y, r);
}

PointId InducedAction::point(std::size_t k) {
  while (enumerated_.size() <= k) {
    // Cantor order over (inner point i, ball element j).
    const std::size_t d = diagonal_++;
    for (std::size_t i = 0; i <= d; ++i) {
      const auto x = canonicalize(inner_->point(i), ball_->at(d - i));
      if (seen_.insert(x).second) enumerated_.push_back(x);
    }
  }
  return enumerated_[k];
}

std::vector<PointId> InducedAction::folner_candidate(std::size_t k) {
  std::vector<PointId> out;
  for (auto y : inner_->folner_candidate(k)) out.push_back(embed(y));
  return out;
}

std::optional<PointId> InducedAction::moved_point(const GroupElement& g, std::size_t budget) {
  auto [h, rep] = splitter_->split(g);
  if (!splitter_->ambient().is_identity(rep)) return embed(inner_->point(0));
  const auto y = inner_->moved_point(h, budget);
  if (!y) return std::nullopt;
  return embed(*y);
}

// ---------------------------------------------------------------------------

StabilizedAction::StabilizedAction(std::shared_ptr<Action> inner) : Action(inner->table()), inner_(std::move(inner)) {
  guarantees_ = inner_->guarantees();
  for (auto* j : {&guarantees_.faithful, &guarantees_.infinite_orbits, &guarantees_.amenable, &guarantees_.free})
    if (*j) j->why += " > stabilized";
  for (auto& [key, entry] : guarantees_.fix_empty) entry.second += " > stabilized";
}

PointId StabilizedAction::apply(const GroupElement& g, PointId x) {
  const auto& d = table_->at(x);
  if (d.kind != PointData::Kind::Copy) throw InvariantError("point outside the stabilized action");
  const auto n = d.tag;
  return table_->copy(n, inner_->apply(g, d.children[0]));
}

PointId StabilizedAction::point(std::size_t k) {
  std::size_t d = 0;
  while ((d + 1) * (d + 2) / 2 <= k) ++d;
  const std::size_t n = k - d * (d + 1) / 2;
  return table_->copy(static_cast<std::uint32_t>(n), inner_->point(d - n));
}

std::vector<PointId> StabilizedAction::folner_candidate(std::size_t k) {
  std::vector<PointId> out;
  for (auto y : inner_->folner_candidate(k)) out.push_back(table_->copy(0, y));
  return out;
}

std::optional<PointId> StabilizedAction::moved_point(const GroupElement& g, std::size_t budget) {
  const auto y = inner_->moved_point(g, budget);
  if (!y) return std::nullopt;
  return table_->copy(0, *y);
}

// ---------------------------------------------------------------------------

DisjointUnionAction::DisjointUnionAction(std::shared_ptr<Action> first, std::shared_ptr<Action> second)
    : Action(first->table()), first_(std::move(first)), second_(std::move(second)) {
  if (&first_->group() != &second_->group()) throw ValidationError("disjoint union of actions of different groups");
  const auto& a = first_->guarantees();
  const auto& b = second_->guarantees();
  if (a.faithful || b.faithful) guarantees_.faithful.why = "union-faithful";
  if (a.infinite_orbits && b.infinite_orbits) guarantees_.infinite_orbits.why = "union-orbits";
  if (a.free && b.free) guarantees_.free.why = "union-free";
  for (const auto& [key, entry] : a.fix_empty)
    if (b.fix_empty.count(key)) guarantees_.add_fix_empty(entry.first, entry.second + " > union");
}

PointId DisjointUnionAction::apply(const GroupElement& g, PointId x) {
  const auto& d = table_->at(x);
  if (d.kind != PointData::Kind::Side) throw InvariantError("point outside the disjoint union");
  const auto tag = d.tag;
  return table_->side(tag, side(static_cast<int>(tag)).apply(g, d.children[0]));
}

PointId DisjointUnionAction::point(std::size_t k) {
  const auto tag = static_cast<std::uint32_t>(k % 2 + 1);
  return table_->side(tag, side(static_cast<int>(tag)).point(k / 2));
}

std::optional<PointId> DisjointUnionAction::moved_point(const GroupElement& g, std::size_t budget) {
  if (auto y = first_->moved_point(g, budget)) return table_->side(1, *y);
  if (auto y = second_->moved_point(g, budget)) return table_->side(2, *y);
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::vector<SizedFolnerSet> folner_sized(StabilizedAction& stacked, const std::function<Ratio(std::size_t)>& a,
                                         const std::function<std::vector<GroupElement>(std::size_t)>& f,
                                         std::size_t count, std::size_t budget) {
  budget = capped_budget(budget);
  std::vector<SizedFolnerSet> out;
  std::size_t last_n = 0;
  std::size_t index = 0;
  for (std::size_t k = 1; k <= count; ++k) {
    SizedFolnerSet s;
    s.k = k;
    const auto fk = f(k);
    const Ratio eps(1, static_cast<std::int64_t>(k));
    s.base = folner(stacked.inner(), fk, eps, budget, {}, index, &index).points;
    s.base_size = s.base.size();
    std::size_t n = last_n + 1;
    for (;; ++n) {
      if (n - last_n > budget) throw BudgetError("no n with [a_n] >= k|D_k| within the budget");
      if (floor_nonneg(a(n)) >= static_cast<std::int64_t>(k * s.base_size)) break;
    }
    s.n = n;
    last_n = n;
    s.a_floor = floor_nonneg(a(n));
    s.copies = static_cast<std::size_t>(s.a_floor) / s.base_size;
    for (std::size_t j = 1; j <= s.copies; ++j)
      for (auto y : s.base) s.points.push_back(stacked.at(static_cast<std::uint32_t>(j), y));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace baire
