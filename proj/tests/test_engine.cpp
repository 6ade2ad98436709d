#include <algorithm>
#include <random>
#include <set>

#include "baire/composer.hpp"
#include "baire/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace baire;

namespace {

const char* kInstances[] = {"free_product.txt", "hnn_torsion.txt", "amalgam_torsion.txt", "two_edge.txt",
                            "hnn_c3_inverting.txt"};

// Random element as a product of generators and their inverses.
GroupElement random_element(const Group& g, std::mt19937_64& rng, int length) {
  const auto& gens = g.generators();
  GroupElement x = g.identity();
  for (int i = 0; i < length; ++i) {
    auto y = gens[rng() % gens.size()];
    if (rng() % 2) y = g.inverse(y);
    x = g.mul(x, y);
  }
  return x;
}

}  // namespace

TEST_CASE("every certificate re-evaluates against the built action") {
  for (const char* name : kInstances) {
    CAPTURE(name);
    Composition c(test::data_file(name));
    c.run(9);
    for (std::size_t s = 0; s < c.engine_count(); ++s) {
      Engine& e = c.engine(static_cast<std::uint32_t>(s));
      CHECK(e.certificates().size() == 9);
      for (const auto& cert : e.certificates()) {
        switch (cert.kind) {
          case RequirementKind::Transitive: CHECK(e.apply(cert.element, cert.x) == cert.y); break;
          case RequirementKind::Faithful:
            CHECK(!e.group().is_identity(cert.element));
            CHECK(e.apply(cert.element, cert.x) == cert.y);
            CHECK(cert.x != cert.y);
            break;
          case RequirementKind::Folner: {
            const std::set<PointId> distinct(cert.witness.points.begin(), cert.witness.points.end());
            CHECK(distinct.size() == cert.witness.points.size());
            for (std::size_t i = 0; i < cert.witness.generators.size(); ++i) {
              // recount through the plain action, image by image
              std::size_t outside = 0;
              for (auto p : cert.witness.points) outside += distinct.count(e.apply(cert.witness.generators[i], p)) ? 0 : 1;
              CHECK(cert.witness.moved[i] == 2 * outside);
              CHECK(Ratio(static_cast<std::int64_t>(2 * outside), static_cast<std::int64_t>(distinct.size())) <
                    Ratio(1, static_cast<std::int64_t>(cert.m)));
            }
            break;
          }
        }
      }
      CHECK(e.equivariance_violations().empty());
    }
  }
}

TEST_CASE("the built action is a homomorphism on sampled points") {
  std::mt19937_64 rng(7);
  for (const char* name : kInstances) {
    CAPTURE(name);
    Composition c(test::data_file(name));
    c.run(6);
    Engine& r = c.root();
    const Group& g = r.group();
    for (int trial = 0; trial < 60; ++trial) {
      const auto a = random_element(g, rng, 1 + static_cast<int>(rng() % 5));
      const auto b = random_element(g, rng, 1 + static_cast<int>(rng() % 5));
      const PointId x = r.point(rng() % 40);
      CHECK(r.apply(g.mul(a, b), x) == r.apply(a, r.apply(b, x)));
      CHECK(r.apply(g.inverse(a), r.apply(a, x)) == x);
    }
  }
}

TEST_CASE("transitivity witnesses join arbitrary registry points") {
  Composition c(test::data_file("hnn_c3_inverting.txt"));
  Engine& e = c.root();
  for (std::size_t i = 0; i < 12; ++i) {
    const PointId x = e.point(i);
    const PointId y = e.point((i * 7 + 3) % 20);
    auto cert = e.extend_transitive(x, y);
    CHECK(e.apply(cert.element, x) == y);
  }
  CHECK(e.equivariance_violations().empty());
}

TEST_CASE("frozen engines refuse undecided values") {
  Composition c(test::data_file("hnn_torsion.txt"));
  Engine& e = c.root();
  e.freeze(true);
  const PointId far = e.reference().at(77, e.reference().inner().point(5));
  CHECK_THROWS_AS(e.apply_w(far), UncommittedError);
  e.freeze(false);
  CHECK_NOTHROW(e.apply_w(far));
}

TEST_CASE("faithfulness of the identity is rejected") {
  Composition c(test::data_file("hnn_torsion.txt"));
  CHECK_THROWS_AS(c.root().extend_faithful(c.root().group().identity()), ValidationError);
}

TEST_CASE("certificates round-trip through text") {
  Composition c(test::data_file("amalgam_torsion.txt"));
  c.run(6);
  for (const auto& cert : c.root().certificates()) {
    const auto text = cert.serialize(c.table(), c.root().group());
    const auto back = Certificate::parse(text, c.table());
    CHECK(back.serialize(c.table(), c.root().group()) == text);
  }
}

TEST_CASE("ledger: every incident edge image is free at the root") {
  for (const char* name : kInstances) {
    CAPTURE(name);
    Composition c(test::data_file(name));
    c.run(6);
    const auto entries = c.ledger();
    const auto audit = c.audit_ledger(300);
    CHECK(audit.fixed == 0);
    CHECK(audit.sampled == 300);
    for (const auto& e : entries) CHECK(e.chain.find(" > ") != std::string::npos);
  }
}

TEST_CASE("schedule budgets") {
  Composition c(test::data_file("hnn_torsion.txt"));
  Engine& e = c.root();
  CHECK(e.run_schedule(0).empty());
  CHECK(e.log().size() == 0);
  const auto three = e.run_schedule(3);
  REQUIRE(three.size() == 3);
  CHECK(three[0].kind == RequirementKind::Transitive);
  CHECK(three[1].kind == RequirementKind::Folner);
  CHECK(three[2].kind == RequirementKind::Faithful);
}

TEST_CASE("lazy completion commits whole orbits and round-trips") {
  Composition c(test::data_file("hnn_torsion.txt"));
  Engine& e = c.root();
  const PointId fresh = e.reference().at(5, e.reference().inner().point(3));
  const auto before = e.log().size();
  const PointId z = e.apply_w(fresh);
  CHECK(e.log().size() == before + 2);
  CHECK(e.apply_w(fresh) == z);
  CHECK(e.log().size() == before + 2);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const PointId x = e.reference().at(static_cast<std::uint32_t>(rng() % 6), e.reference().inner().point(rng() % 200));
    CHECK(e.apply_w_inverse(e.apply_w(x)) == x);
    CHECK(e.apply_w(e.apply_w_inverse(x)) == x);
  }
  CHECK(e.equivariance_violations().empty());
}

TEST_CASE("HNN relation holds on committed points") {
  Composition c(test::data_file("hnn_c3_inverting.txt"));
  c.run(9);
  Engine& e = c.root();
  const Group& g = e.group();
  const auto t = e.stable_letter();
  const auto entries = e.log().entries();
  for (std::size_t s = 0; s < e.sigma_elements().size(); ++s)
    for (const auto& [x, z] : entries) {
      const auto lhs = e.apply(t, e.apply(e.sigma_elements()[s], e.apply(g.inverse(t), z)));
      CHECK(lhs == e.apply(e.theta_elements()[s], z));
    }
}

TEST_CASE("witness shapes") {
  {
    Composition c(test::data_file("hnn_torsion.txt"));
    Engine& e = c.root();
    const PointId x = e.reference().at(3, e.reference().inner().point(0));
    const PointId y = e.reference().at(4, e.reference().inner().point(1));
    const auto w = e.extend_transitive(x, y);
    CHECK(w.element.tags.size() == 1);
    CHECK(e.apply(w.element, x) == y);
  }
  {
    Composition c(test::data_file("free_product.txt"));
    Engine& e = c.root();
    const PointId x = e.point(0);
    const PointId y = e.reference().at(2, e.reference().inner().point(7));
    const auto w = e.extend_transitive(x, y);
    // g2 h g1: at most three syllables, exactly one from the second factor
    CHECK(w.element.tags.size() <= 3);
    CHECK(std::count(w.element.tags.begin(), w.element.tags.end(), 2) == 1);
    e.run_schedule(10);
    CHECK(e.apply(w.element, x) == y);
  }
  {
    Composition c(test::data_file("hnn_torsion.txt"));
    Engine& e = c.root();
    const auto f = e.extend_faithful(e.stable_letter());
    CHECK(f.y != f.x);
  }
}

TEST_CASE("one loop over C2 gives one ledger entry") {
  Composition c(test::data_file("hnn_torsion.txt"));
  c.run(3);
  const auto entries = c.ledger();
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].h == BaseElement{{0}, 1});
}
