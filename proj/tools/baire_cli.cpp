#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "baire/baire.h"

namespace {

int finish(int status, char* text) {
  if (text) {
    std::fputs(text, stdout);
    baire_string_free(text);
  }
  if (status != BAIRE_OK) std::fprintf(stderr, "error: %s\n", baire_last_error());
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and verify transitive, amenable, faithful actions of graph-of-groups fundamental groups"};
  app.set_version_flag("--version", std::string(baire_version()));
  app.require_subcommand(1);

  std::string input, out_dir = "out";
  long long budget = -1;
  auto* build = app.add_subcommand("build", "run the construction and write manifest, certificates and log");
  build->add_option("input", input, "graph-of-groups input file")->required();
  build->add_option("--budget", budget, "requirements per engine (default: input header)");
  build->add_option("--out", out_dir, "output directory");

  std::string manifest, mode = "all";
  std::size_t depth = 0, pairs = 0;
  auto* verify = app.add_subcommand("verify", "independently re-check a build directory");
  verify->add_option("manifest", manifest, "manifest file or its directory")->required();
  verify->add_option("--mode", mode, "folner|transitive|faithful|equivariance|all")
      ->check(CLI::IsMember({"folner", "transitive", "faithful", "equivariance", "all"}));
  verify->add_option("--depth", depth, "faithfulness: all nontrivial elements of word length <= depth");
  verify->add_option("--pairs", pairs, "transitivity: all ordered pairs among the first K points");

  std::size_t points = 10;
  std::vector<std::string> gens;
  auto* schreier = app.add_subcommand("schreier", "print a Schreier graph fragment as DOT");
  schreier->add_option("manifest", manifest, "manifest file or its directory")->required();
  schreier->add_option("--points", points, "number of points");
  schreier->add_option("--gens", gens, "generator words, comma separated")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  char* text = nullptr;
  int status = BAIRE_OK;
  if (*build) {
    status = baire_build(input.c_str(), budget, out_dir.c_str(), &text);
  } else if (*verify) {
    status = baire_verify(manifest.c_str(), mode.c_str(), depth, pairs, &text);
  } else {
    std::vector<const char*> names;
    for (const auto& g : gens) names.push_back(g.c_str());
    status = baire_schreier(manifest.c_str(), points, names.data(), names.size(), &text);
  }
  return finish(status, text);
}
