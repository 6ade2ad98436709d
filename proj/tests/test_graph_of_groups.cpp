#include <random>

#include "baire/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace baire;
using namespace baire::test;

namespace {

// Word over the presentation letters, paired with its image in the oracle group.
struct Sample {
  Word word;
  FreeWord image;
};

// Letters of F2 x C2 realized by the HNN and amalgam instances: v0 carries (a^n, c^f); the
// second free generator is the stable letter e0 (HNN) or the v1 factor (amalgam).
Sample random_word(std::mt19937_64& rng, bool hnn, int length, bool central_torsion) {
  Sample s;
  std::uniform_int_distribution<int> kind(0, 1), exp(-2, 2), fin(0, central_torsion ? 1 : 0);
  for (int i = 0; i < length; ++i) {
    const int which = kind(rng);
    const long n = exp(rng);
    const int f = fin(rng);
    if (which == 0) {
      s.word.push_back(Letter{Letter::Kind::Vertex, 0, BaseElement{{n}, static_cast<FiniteGroup::Index>(f)}, 1});
      s.image.push(0, n);
      s.image.torsion ^= f;
    } else if (hnn) {
      const int sign = n >= 0 ? 1 : -1;
      s.word.push_back(Letter{Letter::Kind::Edge, 0, {}, sign});
      s.image.push(1, sign);
    } else {
      s.word.push_back(Letter{Letter::Kind::Vertex, 1, BaseElement{{n}, static_cast<FiniteGroup::Index>(f)}, 1});
      s.image.push(1, n);
      s.image.torsion ^= f;
    }
  }
  return s;
}

void check_against_oracle(const std::string& file, bool hnn, bool torsion) {
  Loaded l(data_file(file));
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(0, 6);
  std::vector<Sample> samples;
  for (int i = 0; i < 300; ++i) samples.push_back(random_word(rng, hnn, len(rng), torsion));
  std::vector<GroupElement> nfs;
  for (auto& s : samples) nfs.push_back(l.group.britton_reduce(s.word));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const bool trivial = samples[i].image.syllables.empty() && samples[i].image.torsion == 0;
    INFO(file, ": ", format_word(samples[i].word));
    CHECK(l.group.group().is_identity(nfs[i]) == trivial);
    // Reduction is idempotent through the readable word form.
    CHECK(l.group.britton_reduce(l.group.group().letters(nfs[i])) == nfs[i]);
    CHECK(GroupElement::decode(nfs[i].encode()) == nfs[i]);
    CHECK(parse_word(format_word(l.group.group().letters(nfs[i]))) == l.group.group().letters(nfs[i]));
  }
  for (std::size_t i = 0; i + 1 < samples.size(); i += 2)
    for (std::size_t j = 0; j < samples.size(); j += 7)
      CHECK((nfs[i] == nfs[j]) == (samples[i].image == samples[j].image));
  const auto& g = l.group.group();
  for (std::size_t i = 0; i + 2 < nfs.size(); i += 3) {
    CHECK(g.mul(g.mul(nfs[i], nfs[i + 1]), nfs[i + 2]) == g.mul(nfs[i], g.mul(nfs[i + 1], nfs[i + 2])));
    CHECK(g.is_identity(g.mul(nfs[i], g.inverse(nfs[i]))));
    Word concat = samples[i].word;
    concat.insert(concat.end(), samples[i + 1].word.begin(), samples[i + 1].word.end());
    CHECK(l.group.britton_reduce(concat) == g.mul(nfs[i], nfs[i + 1]));
  }
}

}  // namespace

TEST_CASE("parse accepts the smallest loop and edge data") {
  auto hnn = parse_graph(data_file("hnn_torsion.txt"));
  CHECK(hnn.edges().size() == 1);
  CHECK_FALSE(hnn.is_tree_edge(0));
  auto am = parse_graph(data_file("amalgam_torsion.txt"));
  CHECK(am.is_tree_edge(0));
  CHECK(am.header().at("budget") == "9");
}

TEST_CASE("parse rejects invalid data with locations") {
  CHECK_THROWS_WITH_AS(parse_graph("vertex 0 group Z^1 x table:0\nvertex 1 group Z^1 x table:0\n"),
                       doctest::Contains("trivial"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_graph("vertex 0 group Z^1 x table:0,1;1,0\n"
                                   "edge 4 from 0 to 0 sigma table:0,1;1,0 s_images:(0;0),(1;0) r_images:(0;0),(0;1)\n"),
                       doctest::Contains("e4"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_graph("vertex 0 group Z^1 x table:0\nvertex 1 group Z^1 x table:0\n"
                                   "vertex 2 group Z^1 x table:0\n"
                                   "edge 0 from 0 to 1 sigma table:0 s_images:(0;0) r_images:(0;0)\n"),
                       doctest::Contains("disconnected"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_graph("vertex 0 group Z^1 x table:0\n"
                                   "edge 0 from 0 to 3 sigma table:0 s_images:(0;0) r_images:(0;0)\n"),
                       doctest::Contains("dangling"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_graph("vertex 0 group Z^1 x table:0\n"
                                   "edge 0 from 0 to 0 sigma Z^1 s_images:(0;0) r_images:(0;0)\n"),
                       doctest::Contains("finite"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_graph("vertex 0 group Z^1 x table:0\nbogus\n"), doctest::Contains("line 2"),
                       ValidationError);
}

TEST_CASE("maximal subtree by BFS from the least vertex") {
  auto g = parse_graph(
      "vertex 0 group Z^1 x table:0\nvertex 1 group Z^1 x table:0\nvertex 2 group Z^1 x table:0\n"
      "edge 5 from 1 to 2 sigma table:0 s_images:(0;0) r_images:(0;0)\n"
      "edge 3 from 0 to 2 sigma table:0 s_images:(0;0) r_images:(0;0)\n"
      "edge 7 from 0 to 1 sigma table:0 s_images:(0;0) r_images:(0;0)\n");
  CHECK(g.is_tree_edge(3));
  CHECK(g.is_tree_edge(7));
  CHECK_FALSE(g.is_tree_edge(5));
  auto plan = make_plan(g);
  CHECK(plan_is_consistent(g, plan));
  CHECK(plan.root().kind == StepKind::Hnn);
  CHECK(plan.root().edge == 5);
}

TEST_CASE("plans for the basic shapes") {
  Loaded loop(data_file("hnn_torsion.txt"));
  REQUIRE(loop.plan.steps.size() == 1);
  CHECK(loop.plan.root().kind == StepKind::Hnn);
  Loaded edge(data_file("amalgam_torsion.txt"));
  REQUIRE(edge.plan.steps.size() == 1);
  CHECK(edge.plan.root().kind == StepKind::Amalgam);
  Loaded two(data_file("two_edge.txt"));
  REQUIRE(two.plan.steps.size() == 2);
  CHECK(two.plan.steps[0].kind == StepKind::Amalgam);
  CHECK(two.plan.steps[1].kind == StepKind::Hnn);
  CHECK(plan_is_consistent(two.graph, two.plan));
}

TEST_CASE("HNN relation t s t^-1 = theta(s)") {
  Loaded l(data_file("hnn_torsion.txt"));
  const auto w = parse_word("e0 v0:(0;1) e0^-1");
  const auto nf = l.group.britton_reduce(w);
  CHECK(l.group.group().letters(nf) == parse_word("v0:(0;1)"));
  CHECK(l.group.group().is_identity(l.group.britton_reduce(Word{})));
}

TEST_CASE("free reduction in Z*Z") {
  Loaded l(data_file("free_product.txt"));
  // a b a^-1 a b^-1 a^-1 freely reduces to the identity.
  const auto nf = l.group.britton_reduce(parse_word("v0:(1;0) v1:(1;0) v0:(-1;0) v0:(1;0) v1:(-1;0) v0:(-1;0)"));
  CHECK(l.group.group().is_identity(nf));
  const auto nf2 = l.group.britton_reduce(parse_word("v0:(1;0) v1:(1;0) v0:(-1;0) v0:(1;0) v1:(-1;0)"));
  CHECK(l.group.group().letters(nf2) == parse_word("v0:(1;0)"));
}

TEST_CASE("normal forms agree with the F2 x C2 oracle") {
  check_against_oracle("hnn_torsion.txt", true, true);
  check_against_oracle("amalgam_torsion.txt", false, true);
  check_against_oracle("free_product.txt", false, false);
}

TEST_CASE("coset representatives") {
  Loaded l(data_file("hnn_torsion.txt"));
  const auto& g = l.group.group();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> n(-6, 6);
  std::uniform_int_distribution<int> f(0, 1);
  const auto t = l.group.britton_reduce(parse_word("e0"));
  const auto tail = l.group.britton_reduce(parse_word("v0:(2;0) e0^-1 v0:(-1;1)"));
  for (int i = 0; i < 50; ++i) {
    const auto h1 = g.include_vertex(0, BaseElement{{n(rng)}, static_cast<FiniteGroup::Index>(f(rng))});
    const auto h2 = g.include_vertex(0, BaseElement{{n(rng)}, static_cast<FiniteGroup::Index>(f(rng))});
    CHECK(l.group.coset_rep(0, g.mul(h1, t)) == l.group.coset_rep(0, g.mul(h2, t)));
    CHECK(l.group.coset_rep(0, g.mul(h1, tail)) == l.group.coset_rep(0, tail));
    CHECK(g.is_identity(l.group.coset_rep(0, h1)));
  }

  Loaded a(data_file("amalgam_torsion.txt"));
  const auto& ga = a.group.group();
  // Brute force over short products: same coset of G1 iff g x^-1 lies in G1.
  std::vector<GroupElement> elems;
  for (long x = -1; x <= 1; ++x)
    for (int fx = 0; fx < 2; ++fx)
      for (long y = -1; y <= 1; ++y)
        for (long z = -1; z <= 1; ++z) {
          elems.push_back(ga.mul(ga.mul(ga.include_vertex(0, BaseElement{{x}, static_cast<FiniteGroup::Index>(fx)}),
                                        ga.include_vertex(1, BaseElement{{y}, 0})),
                                 ga.include_vertex(0, BaseElement{{z}, 0})));
        }
  auto in_first = [&](const GroupElement& e) {
    for (const auto& l2 : ga.letters(e))
      if (l2.kind == Letter::Kind::Vertex && l2.id != 0) return false;
    return true;
  };
  for (const auto& x : elems)
    for (const auto& y : elems) {
      const bool same = in_first(ga.mul(x, ga.inverse(y)));
      CHECK((a.group.coset_rep(0, x, 1) == a.group.coset_rep(0, y, 1)) == same);
    }
}
