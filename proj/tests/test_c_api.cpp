#include <cstring>
#include <filesystem>
#include <string>

#include "baire/baire.h"
#include "doctest.h"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  baire_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and error text") {
  CHECK(std::strlen(baire_version()) > 0);
  CHECK(baire_composition_open(nullptr, nullptr) == BAIRE_ARGUMENT);
  CHECK(std::strlen(baire_last_error()) > 0);
}

TEST_CASE("composition handle") {
  baire_composition* c = nullptr;
  REQUIRE(baire_composition_open(baire::test::data_file("hnn_torsion.txt").c_str(), &c) == BAIRE_OK);
  REQUIRE(baire_composition_run(c, 6) == BAIRE_OK);
  char* p = nullptr;
  REQUIRE(baire_composition_point(c, 0, &p) == BAIRE_OK);
  const auto x = take(p);
  char* y = nullptr;
  REQUIRE(baire_composition_apply(c, "e0 v0:(1;0)", x.c_str(), &y) == BAIRE_OK);
  const auto image = take(y);
  char* back = nullptr;
  REQUIRE(baire_composition_apply(c, "v0:(-1;0) e0^-1", image.c_str(), &back) == BAIRE_OK);
  CHECK(take(back) == x);
  char* ledger = nullptr;
  CHECK(baire_composition_ledger(c, 100, &ledger) == BAIRE_OK);
  CHECK(take(ledger).find("fixed 0") != std::string::npos);
  char* junk = nullptr;
  CHECK(baire_composition_apply(c, "e0", "not a point", &junk) == BAIRE_VALIDATION);
  baire_composition_close(c);
}

TEST_CASE("invalid input maps to the validation code") {
  baire_composition* c = nullptr;
  CHECK(baire_composition_open("vertex 0 group Z^1 x table:0\n", &c) == BAIRE_VALIDATION);
  CHECK(c == nullptr);
}

TEST_CASE("build, verify and schreier through the C interface") {
  const auto out = fs::temp_directory_path() / "baire-capi";
  fs::remove_all(out);
  const auto input = std::string(BAIRE_TEST_DATA) + "/amalgam_torsion.txt";
  char* summary = nullptr;
  REQUIRE(baire_build(input.c_str(), -1, out.c_str(), &summary) == BAIRE_OK);
  CHECK(take(summary).find("certificates 9") != std::string::npos);
  char* report = nullptr;
  CHECK(baire_verify((out / "manifest.txt").c_str(), "all", 2, 3, &report) == BAIRE_OK);
  CHECK(take(report).find("failures 0") != std::string::npos);
  CHECK(baire_verify(out.c_str(), "sideways", 0, 0, &report) == BAIRE_VALIDATION);
  const char* gens[] = {"1"};
  char* dot = nullptr;
  REQUIRE(baire_schreier(out.c_str(), 1, gens, 1, &dot) == BAIRE_OK);
  CHECK(take(dot).find("n0 -> n0") != std::string::npos);
}
