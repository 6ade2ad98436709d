#include <filesystem>
#include <fstream>
#include <sstream>

#include "baire/errors.hpp"
#include "baire/run.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace baire;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("baire-run-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

BuildResult build(const std::string& data, const fs::path& out, std::optional<std::size_t> budget = std::nullopt) {
  BuildOptions o;
  o.out_dir = out.string();
  o.budget = budget;
  return build_run(test::data_file(data), o);
}

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(digest("a") == "fnv1a64:af63dc4c8601ec8c");
}

TEST_CASE("budget 9 on the loop sample gives three certificates per class") {
  const auto out = scratch("loop");
  const auto r = build("hnn_torsion.txt", out);
  CHECK(r.certificates == 9);
  std::map<std::string, int> per_class;
  for (const auto& e : fs::directory_iterator(out / "certs")) ++per_class[e.path().stem().string().substr(0, 5)];
  CHECK(per_class["trans"] == 3);
  CHECK(per_class["folne"] == 3);
  CHECK(per_class["faith"] == 3);
  VerifyOptions v;
  v.depth = 2;
  const auto report = verify_run(r.manifest_path, v);
  CHECK_MESSAGE(report.ok(), report.summary());
  CHECK(report.folner == 3);
}

TEST_CASE("builds are byte-identical across runs") {
  for (const char* name : {"free_product.txt", "amalgam_torsion.txt", "two_edge.txt"}) {
    CAPTURE(name);
    const auto a = scratch("det-a");
    const auto b = scratch("det-b");
    build(name, a);
    build(name, b);
    CHECK(slurp(a / "manifest.txt") == slurp(b / "manifest.txt"));
    CHECK(slurp(a / "wlog.txt") == slurp(b / "wlog.txt"));
    for (const auto& e : fs::directory_iterator(a / "certs"))
      CHECK(slurp(e.path()) == slurp(b / "certs" / e.path().filename()));
  }
}

TEST_CASE("tampering is detected and names the certificate") {
  const auto out = scratch("tamper");
  build("amalgam_torsion.txt", out);
  const auto cert = out / "certs" / "folner-0-1.txt";
  auto text = slurp(cert);
  const auto pos = text.find("generator ");
  REQUIRE(pos != std::string::npos);
  const auto count_at = text.find(' ', text.find(' ', pos) + 1) + 1;
  text.insert(count_at, "1");
  std::ofstream(cert, std::ios::binary | std::ios::trunc) << text;
  VerifyOptions v;
  v.mode = VerifyMode::Folner;
  const auto report = verify_run((out / "manifest.txt").string(), v);
  CHECK(!report.ok());
  bool named = false;
  for (const auto& f : report.failures) named = named || f.find("folner-0-1") != std::string::npos;
  CHECK(named);
}

TEST_CASE("tampered commitment log breaks verification") {
  const auto out = scratch("wlog");
  build("hnn_torsion.txt", out);
  auto text = slurp(out / "wlog.txt");
  const auto cut = text.find('\n', text.size() / 2);
  std::ofstream(out / "wlog.txt", std::ios::binary | std::ios::trunc) << text.substr(0, cut + 1);
  const auto report = verify_run(out.string(), VerifyOptions{});
  CHECK(!report.ok());
}

TEST_CASE("depth 0 is vacuous") {
  const auto out = scratch("depth0");
  build("hnn_torsion.txt", out);
  VerifyOptions v;
  v.mode = VerifyMode::Faithful;
  const auto report = verify_run(out.string(), v);
  CHECK(report.ok());
  CHECK(report.faithful_words == 0);
}

TEST_CASE("malformed input reports the edge") {
  std::string text = test::data_file("hnn_torsion.txt");
  text.replace(text.find("s_images:(0;0),(0;1)"), 20, "s_images:(0;0),(1;0)");
  try {
    build_run(text, BuildOptions{std::nullopt, scratch("bad").string()});
    FAIL("accepted a non-embedding");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("e0") != std::string::npos);
    CHECK(e.line() > 0);
  }
}

TEST_CASE("schreier export") {
  const auto out = scratch("dot");
  build("free_product.txt", out, 30);
  const auto one = schreier_dot(out.string(), 1, {"1"});
  CHECK(one.find("n0 -> n0 [label=\"1\"]") != std::string::npos);
  const auto ten = schreier_dot(out.string(), 10, {"v0:(1;0)", "v1:(1;0)"});
  std::size_t nodes = 0, arcs = 0;
  std::istringstream in(ten);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("->") != std::string::npos) ++arcs;
    else if (line.find("[label=") != std::string::npos) ++nodes;
  }
  CHECK(nodes == 10);
  CHECK(arcs <= 20);
  CHECK_THROWS_AS(schreier_dot(out.string(), 3, {"v9:(1;0)"}), ValidationError);

  // every arc agrees with a fresh evaluation on the replayed log
  LoadedRun run(out.string());
  auto& comp = run.composition();
  comp.freeze(false);
  const auto g = comp.group().britton_reduce(parse_word("v0:(1;0)"));
  std::istringstream again(ten);
  std::vector<std::string> labels;
  while (std::getline(again, line)) {
    const auto q = line.find("label=\"");
    if (line.find("->") == std::string::npos && q != std::string::npos)
      labels.push_back(line.substr(q + 7, line.rfind('"') - q - 7));
  }
  std::istringstream arcs_in(ten);
  while (std::getline(arcs_in, line)) {
    if (line.find("->") == std::string::npos || line.find("v0:(1;0)") == std::string::npos) continue;
    const auto a = std::stoul(line.substr(line.find('n') + 1));
    const auto b = std::stoul(line.substr(line.find("-> n") + 4));
    const auto x = comp.table().parse(labels.at(a));
    CHECK(comp.table().text(comp.root().apply(g, x)) == labels.at(b));
  }
}
