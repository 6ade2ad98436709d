#include "baire/engine.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "baire/errors.hpp"

namespace baire {

void CommitmentLog::commit(PointId x, PointId z) {
  if (in_domain(x) || in_range(z)) throw InvariantError("conflicting commitment");
  forward_.emplace(x, z);
  backward_.emplace(z, x);
  entries_.emplace_back(x, z);
}

std::optional<PointId> CommitmentLog::forward(PointId x) const {
  auto it = forward_.find(x);
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

std::optional<PointId> CommitmentLog::backward(PointId z) const {
  auto it = backward_.find(z);
  if (it == backward_.end()) return std::nullopt;
  return it->second;
}

const char* kind_name(RequirementKind kind) {
  switch (kind) {
    case RequirementKind::Transitive: return "transitive";
    case RequirementKind::Folner: return "folner";
    case RequirementKind::Faithful: return "faithful";
  }
  return "?";
}

std::string Certificate::serialize(const PointTable& table, const Group& group) const {
  std::ostringstream out;
  out << "class " << kind_name(kind) << "\n";
  out << "step " << step << "\n";
  out << "index " << index << "\n";
  switch (kind) {
    case RequirementKind::Transitive:
      out << "x " << table.text(x) << "\n";
      out << "y " << table.text(y) << "\n";
      out << "element " << element.encode() << "\n";
      out << "word " << group.format(element) << "\n";
      break;
    case RequirementKind::Faithful:
      out << "element " << element.encode() << "\n";
      out << "word " << group.format(element) << "\n";
      out << "point " << table.text(x) << "\n";
      out << "image " << table.text(y) << "\n";
      break;
    case RequirementKind::Folner:
      out << "m " << m << "\n";
      out << "bound " << to_string(witness.bound) << "\n";
      out << "size " << witness.points.size() << "\n";
      for (std::size_t i = 0; i < witness.generators.size(); ++i)
        out << "generator " << witness.generators[i].encode() << " " << witness.moved[i] << " " << witness.labels[i]
            << "\n";
      for (auto p : witness.points) out << "point " << table.text(p) << "\n";
      break;
  }
  return out.str();
}

Certificate Certificate::parse(std::string_view text, PointTable& table) {
  Certificate c;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_class = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto space = line.find(' ');
    const std::string key = line.substr(0, space);
    const std::string value = space == std::string::npos ? "" : line.substr(space + 1);
    try {
      if (key == "class") {
        have_class = true;
        if (value == "transitive") c.kind = RequirementKind::Transitive;
        else if (value == "folner") c.kind = RequirementKind::Folner;
        else if (value == "faithful") c.kind = RequirementKind::Faithful;
        else throw ValidationError("unknown certificate class '" + value + "'");
      } else if (key == "step") {
        c.step = static_cast<std::uint32_t>(std::stoul(value));
      } else if (key == "index") {
        c.index = std::stoul(value);
      } else if (key == "x") {
        c.x = table.parse(value);
      } else if (key == "y" || key == "image") {
        c.y = table.parse(value);
      } else if (key == "point") {
        if (c.kind == RequirementKind::Folner) c.witness.points.push_back(table.parse(value));
        else c.x = table.parse(value);
      } else if (key == "element") {
        c.element = GroupElement::decode(value);
      } else if (key == "m") {
        c.m = std::stoul(value);
      } else if (key == "bound") {
        c.witness.bound = parse_ratio(value);
      } else if (key == "generator") {
        std::istringstream fields(value);
        std::string enc;
        std::size_t moved = 0;
        fields >> enc >> moved;
        std::string label;
        std::getline(fields, label);
        if (!label.empty() && label.front() == ' ') label.erase(0, 1);
        c.witness.generators.push_back(GroupElement::decode(enc));
        c.witness.moved.push_back(moved);
        c.witness.labels.push_back(label);
      } else if (key == "word" || key == "size") {
        // derived fields
      } else {
        throw ValidationError("unknown certificate field '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ValidationError("malformed certificate field '" + key + "'");
    } catch (const std::out_of_range&) {
      throw ValidationError("malformed certificate field '" + key + "'");
    }
  }
  if (!have_class) throw ValidationError("certificate without class");
  return c;
}

// ---------------------------------------------------------------------------

namespace {

void require_inner(const Action& inner, std::uint32_t step) {
  const auto& g = inner.guarantees();
  const std::string where = "step " + std::to_string(step) + ": inner action is not ";
  if (!g.faithful) throw InvariantError(where + "faithful");
  if (!g.amenable) throw InvariantError(where + "amenable");
  if (!g.infinite_orbits) throw InvariantError(where + "known to have infinite orbits");
}

void require_free(const Action& inner, const Group& group, const GroupElement& g, std::uint32_t step,
                  const std::string& what) {
  if (group.is_identity(g)) return;
  if (!inner.guarantees().has_fix_empty(g))
    throw InvariantError("step " + std::to_string(step) + ": ledger gap, " + what + " element " + group.format(g) +
                         " has no recorded empty fixed-point set");
}

std::pair<std::size_t, std::size_t> cantor_unpair(std::size_t r) {
  std::size_t d = 0;
  while ((d + 1) * (d + 2) / 2 <= r) ++d;
  const std::size_t i = r - d * (d + 1) / 2;
  return {i, d - i};
}

}  // namespace

Engine::Engine(PointTable& table, const PlanStep& step, std::shared_ptr<const Group> gamma,
               std::vector<std::shared_ptr<Action>> inners)
    : Action(table), step_(step.id), kind_(step.kind), gamma_(std::move(gamma)), inners_(std::move(inners)) {
  for (const auto& inner : inners_) {
    if (!inner) throw InvariantError("step " + std::to_string(step_) + ": missing inner action");
    require_inner(*inner, step_);
  }
  if (kind_ == StepKind::Hnn) {
    hnn_ = std::dynamic_pointer_cast<const HnnGroup>(gamma_);
    if (!hnn_ || inners_.size() != 1) throw InvariantError("HNN step needs an HNN group and one inner action");
    if (&inners_[0]->group() != &hnn_->base()) throw ValidationError("inner action is not an action of the base group");
    for (std::size_t s = 0; s < hnn_->sigma().order(); ++s) {
      require_free(*inners_[0], hnn_->base(), hnn_->sigma_images()[s], step_, "sigma");
      require_free(*inners_[0], hnn_->base(), hnn_->theta_images()[s], step_, "theta");
    }
    auto induced = std::make_shared<InducedAction>(inners_[0], std::make_shared<HnnBaseSplitter>(hnn_), step_);
    induced_ = {induced};
    reference_ = std::make_shared<StabilizedAction>(induced);
    for (std::size_t s = 0; s < hnn_->sigma().order(); ++s) {
      sigma_.push_back(hnn_->embed_base(hnn_->sigma_images()[s]));
      theta_.push_back(hnn_->embed_base(hnn_->theta_images()[s]));
    }
    for (const auto& g : hnn_->base().generators()) folner_generators_.push_back(hnn_->embed_base(g));
    first_factor_generators_ = folner_generators_.size();
    folner_generators_.push_back(hnn_->stable_letter());
  } else {
    amalgam_ = std::dynamic_pointer_cast<const AmalgamGroup>(gamma_);
    if (!amalgam_ || inners_.size() != 2) throw InvariantError("amalgam step needs an amalgam group and two inner actions");
    for (int i = 1; i <= 2; ++i) {
      if (&inners_[i - 1]->group() != &amalgam_->factor(i))
        throw ValidationError("inner action is not an action of factor " + std::to_string(i));
      for (std::size_t s = 0; s < amalgam_->sigma().order(); ++s)
        require_free(*inners_[i - 1], amalgam_->factor(i), amalgam_->images(i)[s], step_,
                     i == 1 ? "first-image" : "second-image");
    }
    auto first = std::make_shared<InducedAction>(inners_[0], std::make_shared<FactorSplitter>(amalgam_, 1), step_);
    auto second = std::make_shared<InducedAction>(inners_[1], std::make_shared<FactorSplitter>(amalgam_, 2), step_);
    induced_ = {first, second};
    auto both = std::make_shared<DisjointUnionAction>(first, second);
    // A nontrivial factor element fixes a point of the other side only through a conjugate
    // in Σ, and Σ is free on both inner actions.
    for (const auto* side : {first.get(), second.get()})
      for (const auto& [key, entry] : side->guarantees().fix_empty)
        both->guarantees().add_fix_empty(entry.first, entry.second + " > cross-factor");
    reference_ = std::make_shared<StabilizedAction>(both);
    for (std::size_t s = 0; s < amalgam_->sigma().order(); ++s) {
      sigma_.push_back(amalgam_->embed_sigma(static_cast<FiniteGroup::Index>(s)));
      theta_.push_back(sigma_.back());
    }
    for (const auto& g : amalgam_->factor(1).generators()) folner_generators_.push_back(amalgam_->embed_factor(1, g));
    first_factor_generators_ = folner_generators_.size();
    for (const auto& g : amalgam_->factor(2).generators()) folner_generators_.push_back(amalgam_->embed_factor(2, g));
  }

  guarantees_.faithful.why = "faithful requirements";
  guarantees_.amenable.why = "folner requirements";
  guarantees_.infinite_orbits.why = "transitive requirements";
  for (const auto& [key, entry] : reference_->guarantees().fix_empty)
    guarantees_.add_fix_empty(entry.first, entry.second + " > conjugator");

  gamma_ball_ = std::make_unique<BallEnumerator>(*gamma_);
  seed_ = reference_->at(0, reference_->inner().point(0));
  registry_cursor_ = 1;
  touched_.insert(0);
  remember(seed_);
}

GroupElement Engine::stable_letter() const {
  if (!hnn_) throw InvariantError("amalgam steps have no stable letter");
  return hnn_->stable_letter();
}

GroupElement Engine::embed(int factor, const GroupElement& h) const {
  if (hnn_) return hnn_->embed_base(h);
  return amalgam_->embed_factor(factor, h);
}

const Group& Engine::subgroup(int factor) const {
  if (hnn_) return hnn_->base();
  return amalgam_->factor(factor);
}

BallEnumerator& Engine::ball(int factor) {
  auto& slot = balls_[factor];
  if (!slot) slot = std::make_unique<BallEnumerator>(subgroup(factor));
  return *slot;
}

PointId Engine::act_subgroup(int factor, const GroupElement& h, PointId x) {
  return reference_->apply(embed(factor, h), x);
}

void Engine::remember(PointId p) {
  if (registered_.insert(p).second) registry_.push_back(p);
}

std::uint32_t Engine::fresh_copy() {
  std::uint32_t c = next_copy_;
  if (!touched_.empty()) c = std::max(c, *touched_.rbegin() + 1);
  next_copy_ = c + 1;
  touched_.insert(c);
  return c;
}

std::vector<PointId> Engine::sigma_orbit(PointId x) {
  std::vector<PointId> out;
  out.reserve(sigma_.size());
  for (const auto& s : sigma_) out.push_back(reference_->apply(s, x));
  std::vector<PointId> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvariantError("Σ does not act freely at " + table_->text(x));
  return out;
}

void Engine::commit_one(PointId x, PointId z) {
  if (log_.in_domain(x))
    throw InvariantError("conflicting commitment: w already defined at " + table_->text(x));
  if (log_.in_range(z)) throw InvariantError("conflicting commitment: " + table_->text(z) + " already an image");
  log_.commit(x, z);
  remember(x);
  remember(z);
  touched_.insert(copy_of(x));
  touched_.insert(copy_of(z));
}

void Engine::commit_orbit(PointId x, PointId z) {
  if (frozen_) throw UncommittedError("frozen conjugator cannot commit at " + table_->text(x));
  const auto xs = sigma_orbit(x);
  std::vector<PointId> zs;
  zs.reserve(theta_.size());
  for (const auto& t : theta_) zs.push_back(reference_->apply(t, z));
  {
    std::vector<PointId> sorted = zs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvariantError("θ(Σ) does not act freely at " + table_->text(z));
  }
  for (std::size_t s = 0; s < xs.size(); ++s) {
    if (log_.in_domain(xs[s])) throw InvariantError("conflicting commitment at " + table_->text(xs[s]));
    if (log_.in_range(zs[s])) throw InvariantError("conflicting commitment onto " + table_->text(zs[s]));
  }
  for (std::size_t s = 0; s < xs.size(); ++s) commit_one(xs[s], zs[s]);
}

void Engine::load_commit(PointId x, PointId z) { commit_one(x, z); }

PointId Engine::lazy_forward(PointId x) {
  if (frozen_) throw UncommittedError("w is undecided at " + table_->text(x));
  const PointId base = hnn_ ? reference_->apply(hnn_->stable_letter(), x) : x;
  if (!log_.in_range(base)) {
    commit_orbit(x, base);
    return base;
  }
  auto& b = ball(1);
  const std::size_t budget = capped_budget(kDefaultSearchBudget);
  for (std::size_t j = 1; j < budget; ++j) {
    const PointId z = act_subgroup(1, b.at(j), base);
    if (!log_.in_range(z)) {
      commit_orbit(x, z);
      return z;
    }
  }
  throw BudgetError("no free image for w at " + table_->text(x));
}

PointId Engine::lazy_backward(PointId z) {
  if (frozen_) throw UncommittedError("w^-1 is undecided at " + table_->text(z));
  const PointId base = hnn_ ? reference_->apply(hnn_->inverse(hnn_->stable_letter()), z) : z;
  if (!log_.in_domain(base)) {
    commit_orbit(base, z);
    return base;
  }
  auto& b = ball(1);
  const std::size_t budget = capped_budget(kDefaultSearchBudget);
  for (std::size_t j = 1; j < budget; ++j) {
    const PointId x = act_subgroup(1, b.at(j), base);
    if (!log_.in_domain(x)) {
      commit_orbit(x, z);
      return x;
    }
  }
  throw BudgetError("no free preimage for w at " + table_->text(z));
}

PointId Engine::apply_w(PointId x) {
  if (auto z = log_.forward(x)) return *z;
  return lazy_forward(x);
}

PointId Engine::apply_w_inverse(PointId z) {
  if (auto x = log_.backward(z)) return *x;
  return lazy_backward(z);
}

PointId Engine::apply(const GroupElement& g, PointId x) {
  if (hnn_) {
    const Group& h = hnn_->base();
    for (std::size_t i = g.tags.size(); i >= 1; --i) {
      const auto& part = g.parts[i];
      if (!h.is_identity(part)) x = reference_->apply(hnn_->embed_base(part), x);
      x = g.tags[i - 1] > 0 ? apply_w(x) : apply_w_inverse(x);
    }
    if (!g.parts.empty() && !h.is_identity(g.parts[0])) x = reference_->apply(hnn_->embed_base(g.parts[0]), x);
    return x;
  }
  for (std::size_t i = g.tags.size(); i-- > 0;) {
    const int f = g.tags[i];
    const auto e = amalgam_->embed_factor(f, g.parts[i]);
    if (f == 1) {
      x = reference_->apply(e, x);
    } else {
      x = apply_w(x);
      x = reference_->apply(e, x);
      x = apply_w_inverse(x);
    }
  }
  if (g.sigma != 0) x = reference_->apply(amalgam_->embed_sigma(g.sigma), x);
  return x;
}

PointId Engine::point(std::size_t k) {
  while (registry_.size() <= k) remember(reference_->at(0, reference_->inner().point(registry_cursor_++)));
  return registry_[k];
}

std::vector<PointId> Engine::folner_candidate(std::size_t k) { return extend_folner(k + 1).witness.points; }

std::optional<PointId> Engine::moved_point(const GroupElement& g, std::size_t) {
  if (gamma_->is_identity(g)) return std::nullopt;
  return extend_faithful(g).x;
}

// ---------------------------------------------------------------------------

Certificate Engine::extend_transitive(PointId x, PointId y) {
  Certificate c;
  c.kind = RequirementKind::Transitive;
  c.step = step_;
  c.x = x;
  c.y = y;
  if (x == y) {
    c.element = gamma_->identity();
  } else {
    c = hnn_ ? transitive_hnn(x, y) : transitive_amalgam(x, y);
  }
  if (apply(c.element, x) != y)
    throw InvariantError("transitivity surgery failed between " + table_->text(x) + " and " + table_->text(y));
  return c;
}

Certificate Engine::transitive_hnn(PointId x, PointId y) {
  auto& b = ball(1);
  const std::size_t budget = capped_budget(kDefaultSearchBudget);
  std::optional<std::size_t> j1, j0;
  for (std::size_t j = 0; j < budget && !j1; ++j)
    if (!log_.in_domain(act_subgroup(1, b.at(j), x))) j1 = j;
  for (std::size_t j = 0; j < budget && !j0; ++j)
    if (!log_.in_range(act_subgroup(1, b.at(j), y))) j0 = j;
  if (!j1 || !j0) throw BudgetError("no free H-translate for the transitivity surgery");
  const GroupElement h1 = b.at(*j1);
  const GroupElement h0 = b.at(*j0);
  const PointId p = act_subgroup(1, h1, x);
  const PointId q = act_subgroup(1, h0, y);
  commit_orbit(p, q);
  Certificate c;
  c.kind = RequirementKind::Transitive;
  c.step = step_;
  c.x = x;
  c.y = y;
  c.element = gamma_->mul(gamma_->mul(gamma_->inverse(embed(1, h0)), hnn_->stable_letter()), embed(1, h1));
  return c;
}

Certificate Engine::transitive_amalgam(PointId x, PointId y) {
  const std::size_t budget = capped_budget(kDefaultSearchBudget);
  auto& b1 = ball(1);
  auto& b2 = ball(2);
  std::optional<GroupElement> g1;
  PointId p = 0;
  for (std::size_t j = 0; j < budget && !g1; ++j) {
    p = act_subgroup(1, b1.at(j), x);
    if (!log_.in_domain(p)) g1 = b1.at(j);
  }
  if (!g1) throw BudgetError("no free Γ1-translate of the source");
  const auto orbit_p = sigma_orbit(p);
  std::optional<GroupElement> g2;
  PointId q = 0;
  for (std::size_t j = 0; j < budget && !g2; ++j) {
    q = reference_->apply(gamma_->inverse(embed(1, b1.at(j))), y);
    if (!log_.in_domain(q) && std::find(orbit_p.begin(), orbit_p.end(), q) == orbit_p.end()) g2 = b1.at(j);
  }
  if (!g2) throw BudgetError("no free Γ1-translate of the target");
  std::optional<PointId> z;
  for (std::size_t j = 0; j < budget && !z; ++j) {
    const PointId cand = act_subgroup(2, b2.at(j), p);
    if (!log_.in_range(cand)) z = cand;
  }
  if (!z) throw BudgetError("no free Γ2-translate for the transitivity surgery");
  const auto orbit_z = sigma_orbit(*z);
  std::optional<GroupElement> h;
  PointId t = 0;
  for (std::size_t j = 1; j < budget && !h; ++j) {
    t = act_subgroup(2, b2.at(j), *z);
    if (!log_.in_range(t) && std::find(orbit_z.begin(), orbit_z.end(), t) == orbit_z.end()) h = b2.at(j);
  }
  if (!h) throw BudgetError("no Γ2 element moving the Σ-orbit for the transitivity surgery");
  commit_orbit(p, *z);
  commit_orbit(q, t);
  Certificate c;
  c.kind = RequirementKind::Transitive;
  c.step = step_;
  c.x = x;
  c.y = y;
  c.element = gamma_->mul(gamma_->mul(embed(1, *g2), embed(2, *h)), embed(1, *g1));
  return c;
}

Certificate Engine::extend_folner(std::size_t m) {
  if (m == 0) throw ValidationError("Følner index m must be positive");
  auto it = folner_cache_.find(m);
  if (it != folner_cache_.end()) return it->second;
  Certificate c = hnn_ ? folner_hnn(m) : folner_amalgam(m);
  c.kind = RequirementKind::Folner;
  c.step = step_;
  c.m = m;
  c.witness = measure(*this, *gamma_, folner_generators_, c.witness.points, Ratio(1, static_cast<std::int64_t>(m)));
  for (std::size_t i = 0; i < folner_generators_.size(); ++i)
    c.witness.moved[i] = moved_under(folner_generators_[i], c.witness.points);
  if (!c.witness.holds()) throw InvariantError("Følner surgery produced a set above its bound for m=" + std::to_string(m));
  folner_cache_.emplace(m, c);
  return c;
}

namespace {

// First point of each orbit, where `orbit(p)` lists the orbit of p.
template <typename F>
std::vector<PointId> orbit_reps(const std::vector<PointId>& points, F orbit) {
  std::unordered_set<PointId> covered;
  std::vector<PointId> reps;
  for (auto p : points) {
    if (covered.count(p)) continue;
    reps.push_back(p);
    for (auto q : orbit(p)) covered.insert(q);
  }
  return reps;
}

}  // namespace

Certificate Engine::folner_hnn(std::size_t m) {
  const std::uint32_t n = fresh_copy();
  Action& inner = *inners_[0];
  std::vector<GroupElement> gens = hnn_->base().generators();
  for (const auto& g : hnn_->theta_images()) gens.push_back(g);
  const auto order = static_cast<std::int64_t>(sigma_.size());
  const Ratio eps(1, 2 * static_cast<std::int64_t>(m) * order);
  const auto d0 = folner(inner, gens, eps, 4096, hnn_->sigma_images());
  std::vector<PointId> d;
  d.reserve(d0.points.size());
  for (auto y : d0.points) d.push_back(reference_->at(n, induced_[0]->embed(y)));
  const auto xs = orbit_reps(d, [&](PointId p) { return sigma_orbit(p); });
  const auto ys = orbit_reps(d, [&](PointId p) {
    std::vector<PointId> o;
    for (const auto& t : theta_) o.push_back(reference_->apply(t, p));
    return o;
  });
  if (ys.size() < xs.size()) throw InvariantError("fewer θ(Σ)-orbits than Σ-orbits in a Følner set");
  for (std::size_t i = 0; i < xs.size(); ++i) commit_orbit(xs[i], ys[i]);
  Certificate c;
  c.witness.points = std::move(d);
  return c;
}

Certificate Engine::folner_amalgam(std::size_t m) {
  const Ratio eps(1, static_cast<std::int64_t>(m));
  const auto c0 = folner(*inners_[0], amalgam_->factor(1).generators(), eps, 4096, amalgam_->images(1));
  const auto d0 = folner(*inners_[1], amalgam_->factor(2).generators(), eps, 4096, amalgam_->images(2));
  const std::size_t a = c0.points.size();
  const std::size_t b = d0.points.size();
  if (a == 0 || b == 0) throw InvariantError("empty Følner set");
  const std::size_t g = std::gcd(a, b);
  const std::size_t q1 = b / g;
  const std::size_t q2 = a / g;
  const std::uint32_t n0 = fresh_copy();
  const std::size_t copies = std::max(q1, q2);
  for (std::size_t j = 1; j < copies; ++j) touched_.insert(n0 + static_cast<std::uint32_t>(j));
  next_copy_ = std::max<std::uint32_t>(next_copy_, n0 + static_cast<std::uint32_t>(copies));
  std::vector<PointId> cset, dset;
  for (std::size_t j = 0; j < q1; ++j)
    for (auto y : c0.points)
      cset.push_back(reference_->at(n0 + static_cast<std::uint32_t>(j), table_->side(1, induced_[0]->embed(y))));
  for (std::size_t j = 0; j < q2; ++j)
    for (auto y : d0.points)
      dset.push_back(reference_->at(n0 + static_cast<std::uint32_t>(j), table_->side(2, induced_[1]->embed(y))));
  auto orbit = [&](PointId p) { return sigma_orbit(p); };
  const auto xs = orbit_reps(cset, orbit);
  const auto ys = orbit_reps(dset, orbit);
  if (xs.size() != ys.size()) throw InvariantError("Σ-orbit counts differ between the two Følner halves");
  for (std::size_t i = 0; i < xs.size(); ++i) commit_orbit(xs[i], ys[i]);
  Certificate c;
  c.witness.points = std::move(cset);
  return c;
}

Certificate Engine::extend_faithful(const GroupElement& g) {
  if (gamma_->is_identity(g)) throw ValidationError("faithfulness requirement for the identity element");
  const std::uint32_t n = fresh_copy();
  auto y = reference_->inner().moved_point(g, capped_budget(kDefaultSearchBudget));
  if (!y) throw BudgetError("no point moved by " + gamma_->format(g) + " in the reference action");
  const PointId p = reference_->at(n, *y);
  remember(p);
  const PointId image = apply(g, p);
  if (image == p) throw InvariantError("faithfulness surgery left " + table_->text(p) + " fixed");
  Certificate c;
  c.kind = RequirementKind::Faithful;
  c.step = step_;
  c.element = g;
  c.x = p;
  c.y = image;
  return c;
}

std::vector<Certificate> Engine::run_schedule(std::size_t budget) {
  std::vector<Certificate> out;
  for (std::size_t i = 0; i < budget; ++i) {
    Certificate c;
    switch (done_ % 3) {
      case 0: {
        const std::size_t r = transitive_done_++;
        const auto [a, b] = cantor_unpair(r);
        const PointId x = point(a);
        const PointId y = point(b);
        c = extend_transitive(x, y);
        c.index = r;
        break;
      }
      case 1: {
        const std::size_t m = ++folner_done_;
        c = extend_folner(m);
        c.index = m - 1;
        break;
      }
      default: {
        const GroupElement g = gamma_ball_->at(faithful_cursor_++);
        c = extend_faithful(g);
        c.index = faithful_done_++;
        break;
      }
    }
    ++done_;
    certificates_.push_back(c);
    out.push_back(c);
  }
  return out;
}

std::size_t Engine::moved_under(const GroupElement& g, const std::vector<PointId>& c) {
  auto image_under_w = [&]() {
    std::vector<PointId> out;
    out.reserve(c.size());
    for (auto p : c) out.push_back(apply_w(p));
    return out;
  };
  if (hnn_) {
    const auto [h, rep] = hnn_->split_base(g);
    if (gamma_->is_identity(rep)) return moved_count(*reference_, g, c);
    const auto t = hnn_->stable_letter();
    if (g == t || g == gamma_->inverse(t)) {
      const auto w = image_under_w();
      const std::unordered_set<PointId> inside(c.begin(), c.end());
      std::size_t outside = 0;
      for (auto z : w) outside += inside.count(z) ? 0 : 1;
      return 2 * outside;
    }
    return moved_count(*this, g, c);
  }
  if (gamma_->is_identity(amalgam_->split_factor(1, g).second)) return moved_count(*reference_, g, c);
  if (gamma_->is_identity(amalgam_->split_factor(2, g).second)) return moved_count(*reference_, g, image_under_w());
  return moved_count(*this, g, c);
}

std::vector<std::pair<PointId, std::size_t>> Engine::equivariance_violations() {
  std::vector<std::pair<PointId, std::size_t>> out;
  const auto entries = log_.entries();
  for (const auto& [x, z] : entries) {
    for (std::size_t s = 0; s < sigma_.size(); ++s) {
      const PointId xs = reference_->apply(sigma_[s], x);
      const PointId expected = reference_->apply(theta_[s], z);
      const auto got = log_.forward(xs);
      if (!got || *got != expected) out.emplace_back(x, s);
    }
  }
  return out;
}

}  // namespace baire
