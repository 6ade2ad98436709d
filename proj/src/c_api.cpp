#include "baire/baire.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "baire/composer.hpp"
#include "baire/errors.hpp"
#include "baire/run.hpp"

struct baire_composition {
  std::unique_ptr<baire::Composition> comp;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
int guard(F body) {
  last_error.clear();
  try {
    return body();
  } catch (const baire::ValidationError& e) {
    last_error = e.what();
    return BAIRE_VALIDATION;
  } catch (const baire::CertificateError& e) {
    last_error = e.what();
    return BAIRE_CERTIFICATE;
  } catch (const baire::UncommittedError& e) {
    last_error = e.what();
    return BAIRE_CERTIFICATE;
  } catch (const baire::BudgetError& e) {
    last_error = e.what();
    return BAIRE_BUDGET;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BAIRE_INTERNAL;
  }
}

int bad_argument(const char* what) {
  last_error = std::string("missing argument: ") + what;
  return BAIRE_ARGUMENT;
}

}  // namespace

extern "C" {

const char* baire_version(void) { return baire::kEngineVersion; }

const char* baire_last_error(void) { return last_error.c_str(); }

void baire_string_free(char* s) { std::free(s); }

int baire_build(const char* input_path, long long budget, const char* out_dir, char** summary_out) {
  if (!input_path) return bad_argument("input_path");
  if (!out_dir) return bad_argument("out_dir");
  return guard([&] {
    std::ifstream in(input_path, std::ios::binary);
    if (!in) throw baire::ValidationError(std::string("cannot read ") + input_path);
    std::stringstream buf;
    buf << in.rdbuf();
    baire::BuildOptions options;
    if (budget >= 0) options.budget = static_cast<std::size_t>(budget);
    options.out_dir = out_dir;
    const auto r = baire::build_run(buf.str(), options);
    if (summary_out) {
      std::ostringstream s;
      s << "manifest " << r.manifest_path << "\nbudget " << r.budget << "\ncertificates " << r.certificates
        << "\nlog entries " << r.log_entries << "\n";
      *summary_out = dup(s.str());
    }
    return BAIRE_OK;
  });
}

int baire_verify(const char* manifest_path, const char* mode, size_t depth, size_t pairs, char** report_out) {
  if (!manifest_path) return bad_argument("manifest_path");
  return guard([&] {
    baire::VerifyOptions options;
    options.mode = baire::parse_verify_mode(mode ? mode : "all");
    options.depth = depth;
    options.pairs = pairs;
    const auto report = baire::verify_run(manifest_path, options);
    std::ostringstream s;
    s << report.summary() << "\n";
    for (const auto& f : report.failures) s << "FAIL " << f << "\n";
    if (report_out) *report_out = dup(s.str());
    if (!report.ok()) {
      last_error = report.failures.front();
      return BAIRE_CERTIFICATE;
    }
    return BAIRE_OK;
  });
}

int baire_schreier(const char* manifest_path, size_t points, const char* const* generators, size_t count,
                   char** dot_out) {
  if (!manifest_path) return bad_argument("manifest_path");
  if (count > 0 && !generators) return bad_argument("generators");
  return guard([&] {
    std::vector<std::string> gens(generators, generators + count);
    const auto dot = baire::schreier_dot(manifest_path, points, gens);
    if (dot_out) *dot_out = dup(dot);
    return BAIRE_OK;
  });
}

int baire_composition_open(const char* input_text, baire_composition** out) {
  if (!input_text) return bad_argument("input_text");
  if (!out) return bad_argument("out");
  return guard([&] {
    auto handle = std::make_unique<baire_composition>();
    handle->comp = std::make_unique<baire::Composition>(input_text);
    *out = handle.release();
    return BAIRE_OK;
  });
}

void baire_composition_close(baire_composition* c) { delete c; }

int baire_composition_run(baire_composition* c, size_t budget) {
  if (!c) return bad_argument("composition");
  return guard([&] {
    c->comp->run(budget);
    return BAIRE_OK;
  });
}

int baire_composition_point(baire_composition* c, size_t k, char** out) {
  if (!c) return bad_argument("composition");
  if (!out) return bad_argument("out");
  return guard([&] {
    *out = dup(c->comp->table().text(c->comp->root().point(k)));
    return BAIRE_OK;
  });
}

int baire_composition_apply(baire_composition* c, const char* word, const char* point, char** out) {
  if (!c) return bad_argument("composition");
  if (!word || !point || !out) return bad_argument("word, point or out");
  return guard([&] {
    auto& comp = *c->comp;
    const auto g = std::string(word) == "1" ? comp.group().group().identity()
                                            : comp.group().britton_reduce(baire::parse_word(word));
    const auto x = comp.table().parse(point);
    *out = dup(comp.table().text(comp.root().apply(g, x)));
    return BAIRE_OK;
  });
}

int baire_composition_ledger(baire_composition* c, size_t samples, char** out) {
  if (!c) return bad_argument("composition");
  if (!out) return bad_argument("out");
  return guard([&] {
    auto& comp = *c->comp;
    std::ostringstream s;
    for (const auto& e : comp.ledger())
      s << "v" << e.vertex << " " << comp.group().group().format(e.element) << " : " << e.chain << "\n";
    const auto audit = comp.audit_ledger(samples);
    s << "audit sampled " << audit.sampled << " checks " << audit.checks << " fixed " << audit.fixed << "\n";
    *out = dup(s.str());
    if (audit.fixed > 0) throw baire::CertificateError("ledger audit: " + audit.first_failure);
    return BAIRE_OK;
  });
}

}  // extern "C"
