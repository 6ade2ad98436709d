#pragma once

// The constructive engine for one HNN or amalgam step: a growing Σ-equivariant partial
// bijection w of X = Y x N, the action π_w it defines, and the finite surgeries that meet
// transitivity, Følner and faithfulness requirements one at a time.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "baire/action.hpp"
#include "baire/graph_of_groups.hpp"

namespace baire {

// Append-only record of decided values of w.
class CommitmentLog {
 public:
  void commit(PointId x, PointId z);
  std::optional<PointId> forward(PointId x) const;
  std::optional<PointId> backward(PointId z) const;
  bool in_domain(PointId x) const { return forward_.count(x) > 0; }
  bool in_range(PointId z) const { return backward_.count(z) > 0; }
  const std::vector<std::pair<PointId, PointId>>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::vector<std::pair<PointId, PointId>> entries_;
  std::unordered_map<PointId, PointId> forward_;
  std::unordered_map<PointId, PointId> backward_;
};

enum class RequirementKind : std::uint8_t { Transitive, Folner, Faithful };

const char* kind_name(RequirementKind kind);

struct Certificate {
  RequirementKind kind = RequirementKind::Transitive;
  std::uint32_t step = 0;
  std::size_t index = 0;  // position within its class in this engine's schedule

  // Transitive: x, y, element with π_w(element) x = y.
  // Faithful: element, point, image with image = π_w(element) point != point.
  PointId x = 0;
  PointId y = 0;
  GroupElement element;

  // Folner: m and the witness (bound 1/m).
  std::size_t m = 0;
  FolnerWitness witness;

  std::string serialize(const PointTable& table, const Group& group) const;
  static Certificate parse(std::string_view text, PointTable& table);
};

class Engine final : public Action {
 public:
  // `inners` holds the action of H (HNN) or of Γ1 and Γ2 (amalgam).
  Engine(PointTable& table, const PlanStep& step, std::shared_ptr<const Group> gamma,
         std::vector<std::shared_ptr<Action>> inners);

  std::uint32_t step() const noexcept { return step_; }
  StepKind mode() const noexcept { return kind_; }
  const Group& group() const override { return *gamma_; }
  std::shared_ptr<const Group> group_ptr() const { return gamma_; }
  StabilizedAction& reference() const { return *reference_; }
  Action& inner(int i = 1) const { return *inners_.at(static_cast<std::size_t>(i - 1)); }

  // π_w(g) x, completing w lazily unless frozen.
  PointId apply(const GroupElement& g, PointId x) override;
  // The registry: the seed point, then points in order of first appearance in the log.
  PointId point(std::size_t k) override;
  // The set of the Følner certificate for m = k + 1.
  std::vector<PointId> folner_candidate(std::size_t k) override;
  std::optional<PointId> moved_point(const GroupElement& g, std::size_t budget) override;

  PointId apply_w(PointId x);
  PointId apply_w_inverse(PointId z);

  Certificate extend_transitive(PointId x, PointId y);
  Certificate extend_folner(std::size_t m);
  Certificate extend_faithful(const GroupElement& g);

  // Processes `budget` further requirements in the dovetail order
  // Transitive, Folner, Faithful, Transitive, ...
  std::vector<Certificate> run_schedule(std::size_t budget);
  const std::vector<Certificate>& certificates() const noexcept { return certificates_; }
  std::size_t requirements_done() const noexcept { return done_; }

  const CommitmentLog& log() const noexcept { return log_; }
  // Frozen engines never commit: an undecided value raises UncommittedError.
  void freeze(bool frozen) { frozen_ = frozen; }
  bool frozen() const noexcept { return frozen_; }
  // Replays one logged pair (verification).
  void load_commit(PointId x, PointId z);

  // Σ and θ(Σ) as elements of Γ (equal in amalgam mode).
  const std::vector<GroupElement>& sigma_elements() const noexcept { return sigma_; }
  const std::vector<GroupElement>& theta_elements() const noexcept { return theta_; }
  // HNN: generators of H and t; amalgam: generators of Γ1 then of Γ2.
  const std::vector<GroupElement>& folner_generators() const noexcept { return folner_generators_; }
  GroupElement stable_letter() const;

  // |π_w(g) C Δ C|, using only w on C when g is t^{±1} or lies in Γ2.
  std::size_t moved_under(const GroupElement& g, const std::vector<PointId>& c);

  // Pairs (x, σ) where the equivariance law fails on the log.
  std::vector<std::pair<PointId, std::size_t>> equivariance_violations();

  // Top-level copy index of a point of X.
  std::uint32_t copy_of(PointId x) const { return table_->at(x).tag; }
  PointId seed_point() const noexcept { return seed_; }

 private:
  std::vector<PointId> sigma_orbit(PointId x);
  void commit_orbit(PointId x, PointId z);
  void commit_one(PointId x, PointId z);
  void remember(PointId p);
  std::uint32_t fresh_copy();
  PointId lazy_forward(PointId x);
  PointId lazy_backward(PointId z);
  PointId act_subgroup(int factor, const GroupElement& h, PointId x);
  GroupElement embed(int factor, const GroupElement& h) const;
  const Group& subgroup(int factor) const;
  BallEnumerator& ball(int factor);
  Certificate transitive_hnn(PointId x, PointId y);
  Certificate transitive_amalgam(PointId x, PointId y);
  Certificate folner_hnn(std::size_t m);
  Certificate folner_amalgam(std::size_t m);

  std::uint32_t step_;
  StepKind kind_;
  std::shared_ptr<const Group> gamma_;
  std::shared_ptr<const HnnGroup> hnn_;
  std::shared_ptr<const AmalgamGroup> amalgam_;
  std::vector<std::shared_ptr<Action>> inners_;
  std::vector<std::shared_ptr<InducedAction>> induced_;
  std::shared_ptr<StabilizedAction> reference_;
  std::vector<GroupElement> sigma_;
  std::vector<GroupElement> theta_;
  std::vector<GroupElement> folner_generators_;
  std::size_t first_factor_generators_ = 0;
  std::map<int, std::unique_ptr<BallEnumerator>> balls_;

  CommitmentLog log_;
  bool frozen_ = false;
  std::set<std::uint32_t> touched_;
  std::uint32_t next_copy_ = 1;
  PointId seed_ = 0;
  std::vector<PointId> registry_;
  std::unordered_set<PointId> registered_;
  std::size_t registry_cursor_ = 0;

  std::size_t done_ = 0;
  std::size_t transitive_done_ = 0;
  std::size_t folner_done_ = 0;
  std::size_t faithful_done_ = 0;
  std::size_t faithful_cursor_ = 1;
  std::unique_ptr<BallEnumerator> gamma_ball_;
  std::map<std::size_t, Certificate> folner_cache_;
  std::vector<Certificate> certificates_;
};

}  // namespace baire
