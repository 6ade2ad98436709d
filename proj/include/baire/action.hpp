#pragma once

// Permutation actions on interned points, their guarantees, Følner witnesses, and the
// combinators that build new actions from old ones.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "baire/group.hpp"
#include "baire/point.hpp"
#include "baire/rational.hpp"

namespace baire {

// A guarantee with the name of the construction that granted it; empty `why` means absent.
struct Justified {
  std::string why;
  explicit operator bool() const noexcept { return !why.empty(); }
};

struct Guarantees {
  Justified faithful;
  Justified infinite_orbits;
  Justified amenable;
  Justified free;
  // Elements of the acting group with an empty fixed-point set, keyed by encoding.
  std::map<std::string, std::pair<GroupElement, std::string>> fix_empty;

  bool has_fix_empty(const GroupElement& g) const { return fix_empty.count(g.encode()) > 0; }
  void add_fix_empty(const GroupElement& g, std::string why) { fix_empty.try_emplace(g.encode(), g, std::move(why)); }
};

inline constexpr std::size_t kDefaultSearchBudget = 1'000'000;

// Caps a search budget by BAIRE_BUDGET_CAP when set.
std::size_t capped_budget(std::size_t requested);

class Action {
 public:
  explicit Action(PointTable& table) : table_(&table) {}
  virtual ~Action() = default;

  virtual const Group& group() const = 0;
  virtual PointId apply(const GroupElement& g, PointId x) = 0;

  // Injective enumeration of the points.
  virtual PointId point(std::size_t k) = 0;

  // The k-th set of a Følner sequence for the designated amenable group (the acting group
  // unless the action says otherwise). Throws InvariantError if the action has none.
  virtual std::vector<PointId> folner_candidate(std::size_t k);

  // Some point moved by g, or nullopt if none was found within the budget.
  virtual std::optional<PointId> moved_point(const GroupElement& g, std::size_t budget);

  // |Fix(g)| when it is known exactly and finite.
  virtual std::optional<std::size_t> fixed_point_count(const GroupElement& g);

  const Guarantees& guarantees() const noexcept { return guarantees_; }
  Guarantees& guarantees() noexcept { return guarantees_; }
  PointTable& table() const noexcept { return *table_; }

 protected:
  PointTable* table_;
  Guarantees guarantees_;
};

// |gC Δ C| for a bijection g.
std::size_t moved_count(Action& action, const GroupElement& g, const std::vector<PointId>& c);

// K C, listed in first-seen order.
std::vector<PointId> saturate(Action& action, const std::vector<GroupElement>& k, const std::vector<PointId>& c);

struct FolnerWitness {
  std::vector<PointId> points;
  std::vector<GroupElement> generators;
  std::vector<std::string> labels;
  std::vector<std::size_t> moved;
  Ratio bound{1};

  // Largest moved/|C|.
  Ratio worst() const;
  // Every generator satisfies moved/|C| < bound.
  bool holds() const;
};

FolnerWitness measure(Action& action, const Group& labels_from, const std::vector<GroupElement>& generators,
                      std::vector<PointId> points, Ratio bound);

// Scans folner_candidate(k) for k >= start, optionally saturated by `saturate_by`, for the first
// set with every ratio strictly below `epsilon`. Throws BudgetError after `budget` candidates.
// `found`, when given, receives the index of the accepted candidate.
FolnerWitness folner(Action& action, const std::vector<GroupElement>& generators, Ratio epsilon,
                     std::size_t budget = 64, const std::vector<GroupElement>& saturate_by = {},
                     std::size_t start = 0, std::size_t* found = nullptr);

// Unions successive good candidates until the union has at least `min_size` points and still
// satisfies the bound.
FolnerWitness folner_grow(Action& action, const std::vector<GroupElement>& generators, Ratio epsilon,
                          std::size_t min_size, std::size_t budget = 256);

// Left translation of Z^d x F on itself; points are B<v>(...).
class TranslationAction final : public Action {
 public:
  TranslationAction(PointTable& table, std::shared_ptr<const BaseGroupNode> group);

  const Group& group() const override { return *group_; }
  PointId apply(const GroupElement& g, PointId x) override;
  PointId point(std::size_t k) override;
  // The box [0, k+1)^d x F.
  std::vector<PointId> folner_candidate(std::size_t k) override;
  std::optional<PointId> moved_point(const GroupElement& g, std::size_t budget) override;
  std::optional<std::size_t> fixed_point_count(const GroupElement& g) override;

 private:
  std::shared_ptr<const BaseGroupNode> group_;
  BaseGroup::Enumerator enumerator_;
  std::vector<PointId> enumerated_;
};

// The diagonal action on m-tuples of pairwise distinct points.
class OffDiagonalAction final : public Action {
 public:
  OffDiagonalAction(std::shared_ptr<Action> inner, std::size_t m);

  std::size_t power() const noexcept { return m_; }
  const Group& group() const override { return inner_->group(); }
  PointId apply(const GroupElement& g, PointId x) override;
  PointId point(std::size_t k) override;
  // C^m minus the large diagonal, for C the inner candidate.
  std::vector<PointId> folner_candidate(std::size_t k) override;
  std::optional<std::size_t> fixed_point_count(const GroupElement& g) override;

 private:
  std::shared_ptr<Action> inner_;
  std::size_t m_;
  std::vector<PointId> enumerated_;
  std::size_t enum_radius_ = 0;
};

std::shared_ptr<Action> offdiag_power(std::shared_ptr<Action> inner, std::size_t m);

// Off-diagonal power with m = max |Fix(g)| + 1 over g in F, so every g in F acts without
// fixed points. Returns the input itself when m = 1.
std::shared_ptr<Action> upgrade_almost_free(std::shared_ptr<Action> inner, const std::vector<GroupElement>& f);

// Counts on the interval [0, n) of Z for the m-th off-diagonal power, by direct enumeration.
struct OffDiagonalCounts {
  std::uint64_t cube = 0;      // n^m
  std::uint64_t diagonal = 0;  // tuples with two equal coordinates
  std::uint64_t moved = 0;     // |gD Δ D| for g = +1
  Ratio ratio() const { return Ratio(static_cast<std::int64_t>(moved), static_cast<std::int64_t>(cube - diagonal)); }
};
OffDiagonalCounts offdiag_interval_counts(std::int64_t n, std::size_t m);

// The induced action of the ambient group on H\(Y x ambient); points are I<step>[y]<rep>.
class InducedAction final : public Action {
 public:
  InducedAction(std::shared_ptr<Action> inner, std::shared_ptr<const CosetSplitter> splitter, std::uint32_t step);

  const Group& group() const override { return splitter_->ambient(); }
  const CosetSplitter& splitter() const noexcept { return *splitter_; }
  Action& inner() const noexcept { return *inner_; }

  // [y, g] in canonical form.
  PointId canonicalize(PointId y, const GroupElement& g);
  // y -> [y, 1].
  PointId embed(PointId y);

  PointId apply(const GroupElement& g, PointId x) override;
  PointId point(std::size_t k) override;
  // The embedded copy of the inner candidate; Følner for the subgroup only.
  std::vector<PointId> folner_candidate(std::size_t k) override;
  std::optional<PointId> moved_point(const GroupElement& g, std::size_t budget) override;

 private:
  std::shared_ptr<Action> inner_;
  std::shared_ptr<const CosetSplitter> splitter_;
  std::uint32_t step_;
  std::unique_ptr<BallEnumerator> ball_;
  std::vector<PointId> enumerated_;
  std::unordered_set<PointId> seen_;
  std::size_t diagonal_ = 0;
};

// Y x N with g(y, n) = (gy, n); points are C<n>[y].
class StabilizedAction final : public Action {
 public:
  explicit StabilizedAction(std::shared_ptr<Action> inner);

  Action& inner() const noexcept { return *inner_; }
  const Group& group() const override { return inner_->group(); }
  PointId at(std::uint32_t n, PointId y) { return table_->copy(n, y); }
  PointId apply(const GroupElement& g, PointId x) override;
  PointId point(std::size_t k) override;
  std::vector<PointId> folner_candidate(std::size_t k) override;
  std::optional<PointId> moved_point(const GroupElement& g, std::size_t budget) override;

 private:
  std::shared_ptr<Action> inner_;
};

// Y1 ⊔ Y2 for two actions of the same group; points are S1[y] and S2[y].
class DisjointUnionAction final : public Action {
 public:
  DisjointUnionAction(std::shared_ptr<Action> first, std::shared_ptr<Action> second);

  Action& side(int i) const { return i == 1 ? *first_ : *second_; }
  const Group& group() const override { return first_->group(); }
  PointId apply(const GroupElement& g, PointId x) override;
  PointId point(std::size_t k) override;
  std::optional<PointId> moved_point(const GroupElement& g, std::size_t budget) override;

 private:
  std::shared_ptr<Action> first_;
  std::shared_ptr<Action> second_;
};

// Copy-stacked Følner sets whose sizes track a prescribed sequence a_n.
struct SizedFolnerSet {
  std::size_t k = 0;
  std::size_t n = 0;         // n_k
  std::int64_t a_floor = 0;  // [a_{n_k}]
  std::size_t base_size = 0; // |D_k|
  std::size_t copies = 0;    // q_k
  std::vector<PointId> base; // D_k
  std::vector<PointId> points;  // C_k, the copies D_k x {1..q_k}
};

// For k = 1..count: D_k the first candidate that is a (1/k, F_k)-Følner set, n_k > n_{k-1}
// least with [a_{n_k}] >= k|D_k|, and C_k = q_k stacked copies of D_k where
// [a_{n_k}] = q_k |D_k| + r_k.
std::vector<SizedFolnerSet> folner_sized(StabilizedAction& stacked, const std::function<Ratio(std::size_t)>& a,
                                         const std::function<std::vector<GroupElement>(std::size_t)>& f,
                                         std::size_t count, std::size_t budget = 1'000'000);

}  // namespace baire
