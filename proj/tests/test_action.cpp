#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "baire/action.hpp"
#include "baire/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace baire;

namespace {

std::shared_ptr<const BaseGroupNode> z_times(std::size_t d, FiniteGroup f = FiniteGroup{}) {
  return std::make_shared<const BaseGroupNode>(0, BaseGroup(d, std::move(f)));
}

GroupElement elem(std::vector<std::int64_t> v, FiniteGroup::Index fin = 0) {
  return BaseGroupNode::wrap(BaseElement{std::move(v), fin});
}

// Left translation plus `stars` global fixed points: every nontrivial element fixes exactly
// `stars` points.
class WithFixedPoints final : public Action {
 public:
  WithFixedPoints(PointTable& table, std::shared_ptr<const BaseGroupNode> g, std::size_t stars)
      : Action(table), group_(std::move(g)), inner_(table, group_) {
    PointId p = table.tuple({});
    for (std::size_t i = 0; i < stars; ++i) {
      stars_.push_back(p);
      p = table.tuple({p});
    }
    guarantees_ = inner_.guarantees();
    guarantees_.free = {};
  }
  const Group& group() const override { return *group_; }
  PointId apply(const GroupElement& g, PointId x) override { return is_star(x) ? x : inner_.apply(g, x); }
  PointId point(std::size_t k) override { return k < stars_.size() ? stars_[k] : inner_.point(k - stars_.size()); }
  std::vector<PointId> folner_candidate(std::size_t k) override {
    auto c = inner_.folner_candidate(k);
    c.insert(c.end(), stars_.begin(), stars_.end());
    return c;
  }
  std::optional<std::size_t> fixed_point_count(const GroupElement& g) override {
    return group_->is_identity(g) ? std::nullopt : std::optional<std::size_t>(stars_.size());
  }

 private:
  bool is_star(PointId x) const { return std::find(stars_.begin(), stars_.end(), x) != stars_.end(); }

  std::shared_ptr<const BaseGroupNode> group_;
  TranslationAction inner_;
  std::vector<PointId> stars_;
};

std::int64_t falling(std::int64_t n, std::size_t m) {
  std::int64_t out = 1;
  for (std::size_t i = 0; i < m; ++i) out *= n - static_cast<std::int64_t>(i);
  return out;
}

}  // namespace

TEST_CASE("translation action agrees with group multiplication") {
  PointTable table;
  auto g = z_times(2, FiniteGroup::cyclic(3));
  TranslationAction a(table, g);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto x = a.point(rng() % 100);
    const GroupElement h = elem({static_cast<std::int64_t>(rng() % 7) - 3, static_cast<std::int64_t>(rng() % 7) - 3},
                                static_cast<FiniteGroup::Index>(rng() % 3));
    const auto expected = table.base(0, g->base().mul(h.base, table.at(x).element.base));
    CHECK(a.apply(h, x) == expected);
    if (!g->is_identity(h)) {
      CHECK(a.fixed_point_count(h) == std::optional<std::size_t>(0));
      auto y = a.moved_point(h, 100);
      REQUIRE(y);
      CHECK(a.apply(h, *y) != *y);
    }
  }
}

TEST_CASE("finite vertex groups are rejected") {
  PointTable table;
  CHECK_THROWS_AS(TranslationAction(table, z_times(0, FiniteGroup::cyclic(2))), ValidationError);
}

TEST_CASE("translation boxes are Følner") {
  PointTable table;
  TranslationAction a(table, z_times(1));
  auto w = folner(a, a.group().generators(), Ratio(1, 10), 200);
  CHECK(w.holds());
  // box [0, L): a unit shift moves exactly one point out and one in
  for (std::size_t i = 0; i < w.generators.size(); ++i) CHECK(w.moved[i] == 2);
}

TEST_CASE("large-diagonal counts on Z-translation boxes") {
  for (std::size_t m : {2u, 3u}) {
    Ratio previous(1000);
    for (std::int64_t n = 10; n <= 100; n += 10) {
      CAPTURE(m);
      CAPTURE(n);
      const auto c = offdiag_interval_counts(n, m);
      std::int64_t cube = 1;
      for (std::size_t i = 0; i < m; ++i) cube *= n;
      CHECK(c.cube == static_cast<std::size_t>(cube));
      CHECK(c.diagonal == static_cast<std::size_t>(cube - falling(n, m)));
      CHECK(c.diagonal <= static_cast<std::size_t>(static_cast<std::int64_t>(m * (m - 1) / 2) * cube / n));
      // distinct tuples with a coordinate at n - 1 leave the box under the unit shift
      CHECK(c.moved == static_cast<std::size_t>(2 * (falling(n, m) - falling(n - 1, m))));
      CHECK(c.ratio() <= previous);
      previous = c.ratio();
    }
  }
}

TEST_CASE("off-diagonal power matches the interval counts") {
  PointTable table;
  auto z = std::make_shared<TranslationAction>(table, z_times(1));
  OffDiagonalAction pair(z, 2);
  std::vector<PointId> box;
  for (std::int64_t i = 0; i < 10; ++i)
    for (std::int64_t j = 0; j < 10; ++j)
      if (i != j) box.push_back(table.tuple({table.base(0, BaseElement{{i}, 0}), table.base(0, BaseElement{{j}, 0})}));
  const auto c = offdiag_interval_counts(10, 2);
  CHECK(box.size() == c.cube - c.diagonal);
  CHECK(moved_count(pair, elem({1}), box) == c.moved);
  CHECK(pair.fixed_point_count(elem({1})) == std::optional<std::size_t>(0));
}

TEST_CASE("almost-free upgrade removes fixed points") {
  PointTable table;
  auto g = z_times(1, FiniteGroup::cyclic(2));
  auto base = std::make_shared<WithFixedPoints>(table, g, 1);
  const auto torsion = elem({0}, 1);
  CHECK(base->apply(torsion, base->point(0)) == base->point(0));
  auto up = upgrade_almost_free(base, {torsion, elem({1})});
  auto* off = dynamic_cast<OffDiagonalAction*>(up.get());
  REQUIRE(off != nullptr);
  CHECK(off->power() == 2);
  CHECK(up->guarantees().has_fix_empty(torsion));
  CHECK(up->guarantees().fix_empty.at(torsion.encode()).second == "offdiag-free m=2");
  for (std::size_t k = 0; k < 2000; ++k) {
    const auto x = up->point(k);
    CHECK(up->apply(torsion, x) != x);
    CHECK(up->apply(elem({1}), x) != x);
  }
  CHECK(up->guarantees().amenable);
  CHECK(up->guarantees().faithful);
  CHECK_THROWS_AS(upgrade_almost_free(base, {g->identity()}), ValidationError);
}

TEST_CASE("disjoint union needs one acting group") {
  PointTable table;
  auto a = std::make_shared<TranslationAction>(table, z_times(1));
  auto b = std::make_shared<TranslationAction>(table, z_times(1));
  CHECK_THROWS_AS(DisjointUnionAction(a, b), ValidationError);
  DisjointUnionAction u(a, a);
  const auto x = u.point(3);
  CHECK(table.at(u.apply(elem({2}), x)).tag == table.at(x).tag);
}

TEST_CASE("induced action is well defined and the embedding is equivariant") {
  std::mt19937_64 rng(11);
  for (const char* name : {"hnn_torsion.txt", "amalgam_torsion.txt", "hnn_c3_inverting.txt"}) {
    CAPTURE(name);
    test::Loaded l(test::data_file(name));
    PointTable table;
    const auto& step = l.plan.root();
    auto gamma = l.group.step_group(step.id);
    std::shared_ptr<const CosetSplitter> splitter;
    VertexId v = step.children[0].id;
    if (auto hnn = std::dynamic_pointer_cast<const HnnGroup>(gamma)) splitter = std::make_shared<HnnBaseSplitter>(hnn);
    else splitter = std::make_shared<FactorSplitter>(std::dynamic_pointer_cast<const AmalgamGroup>(gamma), 1);
    auto inner = std::make_shared<TranslationAction>(table, l.group.vertex_group(v));
    InducedAction ind(inner, splitter, step.id);
    BallEnumerator gball(*gamma);
    BallEnumerator hball(splitter->subgroup());
    for (int i = 0; i < 1000; ++i) {
      const auto h = hball.at(rng() % hball.ball_size(3));
      const auto g = gball.at(rng() % gball.ball_size(4));
      const auto y = inner->point(rng() % 50);
      const auto hy = inner->apply(h, y);
      CHECK(ind.canonicalize(hy, gamma->mul(splitter->embed(h), g)) == ind.canonicalize(y, g));
      CHECK(ind.apply(splitter->embed(h), ind.embed(y)) == ind.embed(hy));
      const auto x = ind.point(rng() % 60);
      CHECK(ind.apply(gamma->inverse(g), ind.apply(g, x)) == x);
    }
  }
}

TEST_CASE("stacked Følner sets track a_n = n^2") {
  PointTable table;
  auto z = std::make_shared<TranslationAction>(table, z_times(1));
  StabilizedAction stacked(z);
  BallEnumerator ball(z->group());
  auto fk = [&](std::size_t k) {
    std::vector<GroupElement> out;
    for (std::size_t i = 0; i < ball.ball_size(k); ++i) out.push_back(ball.at(i));
    return out;
  };
  auto a = [](std::size_t n) { return Ratio(static_cast<std::int64_t>(n * n)); };
  const auto sets = folner_sized(stacked, a, fk, 20);
  std::size_t last_n = 0;
  for (const auto& s : sets) {
    CAPTURE(s.k);
    CHECK(s.n > last_n);
    last_n = s.n;
    const Ratio ratio(static_cast<std::int64_t>(s.n * s.n), static_cast<std::int64_t>(s.points.size()));
    CHECK(ratio >= Ratio(1));
    CHECK(ratio < Ratio(1) + Ratio(2, static_cast<std::int64_t>(s.k)));
    const std::set<PointId> c(s.points.begin(), s.points.end());
    CHECK(c.size() == s.points.size());
    for (const auto& g : fk(s.k)) {
      std::size_t out = 0;
      for (auto p : s.points) out += c.count(stacked.apply(g, p)) ? 0 : 1;
      CHECK(Ratio(static_cast<std::int64_t>(2 * out), static_cast<std::int64_t>(c.size())) <
            Ratio(1, static_cast<std::int64_t>(s.k)));
    }
  }
}

TEST_CASE("two fixed points need distinct triples") {
  PointTable table;
  auto g = z_times(1, FiniteGroup::cyclic(2));
  auto base = std::make_shared<WithFixedPoints>(table, g, 2);
  const auto torsion = elem({0}, 1);
  auto up = upgrade_almost_free(base, {torsion});
  auto* off = dynamic_cast<OffDiagonalAction*>(up.get());
  REQUIRE(off != nullptr);
  CHECK(off->power() == 3);
  // every ordered triple of distinct points from a 20-point window
  std::vector<PointId> window;
  for (std::size_t k = 0; k < 20; ++k) window.push_back(base->point(k));
  std::size_t triples = 0;
  for (auto a : window)
    for (auto b : window)
      for (auto c : window) {
        if (a == b || b == c || a == c) continue;
        const auto t = table.tuple({a, b, c});
        CHECK(up->apply(torsion, t) != t);
        ++triples;
      }
  CHECK(triples == 20 * 19 * 18);
}

TEST_CASE("free actions and empty sets pass through the upgrade unchanged") {
  PointTable table;
  auto t = std::make_shared<TranslationAction>(table, z_times(1, FiniteGroup::cyclic(2)));
  CHECK(upgrade_almost_free(t, {elem({0}, 1)}).get() == t.get());
  CHECK(upgrade_almost_free(t, {}).get() == t.get());
  CHECK(offdiag_power(t, 1).get() == t.get());
}

TEST_CASE("unit shifts on Z: the first interval below 1/2 has length 5") {
  PointTable table;
  TranslationAction a(table, z_times(1));
  const auto w = folner(a, a.group().generators(), Ratio(1, 2));
  CHECK(w.points.size() == 5);
  CHECK(w.worst() == Ratio(2, 5));
}

TEST_CASE("grown Følner sets reach the requested size") {
  PointTable table;
  TranslationAction a(table, z_times(1));
  const auto w = folner_grow(a, a.group().generators(), Ratio(1, 10), 100);
  CHECK(w.points.size() >= 100);
  CHECK(w.holds());
  const auto one = folner_grow(a, a.group().generators(), Ratio(1, 10), 1);
  CHECK(one.holds());
}
