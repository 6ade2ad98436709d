#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "baire/graph_of_groups.hpp"
#include "baire/plan.hpp"

namespace baire::test {

inline std::string data_file(const std::string& name) {
  std::ifstream in(std::string(BAIRE_TEST_DATA) + "/" + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Loaded {
  GraphOfGroups graph;
  CompositionPlan plan;
  ComposedGroup group;

  explicit Loaded(const std::string& text)
      : graph(parse_graph(text)), plan(make_plan(graph)), group(graph, plan) {}
};

// Free reduction over letters (generator, exponent); the independent word-problem oracle
// for free products of infinite cyclic groups, optionally times a central C2.
struct FreeWord {
  std::vector<std::pair<int, long>> syllables;
  int torsion = 0;

  void push(int gen, long exp) {
    if (exp == 0) return;
    if (!syllables.empty() && syllables.back().first == gen) {
      syllables.back().second += exp;
      if (syllables.back().second == 0) syllables.pop_back();
    } else {
      syllables.emplace_back(gen, exp);
    }
  }
  bool operator==(const FreeWord&) const = default;
  std::size_t length() const {
    std::size_t n = 0;
    for (auto& s : syllables) n += static_cast<std::size_t>(std::labs(s.second));
    return n;
  }
};

}  // namespace baire::test
