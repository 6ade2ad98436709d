#include "baire/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "baire/errors.hpp"

namespace fs = std::filesystem;

namespace baire {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buf;
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + p.string());
  out << text;
}

std::size_t header_budget(const GraphOfGroups& graph) {
  auto it = graph.header().find("budget");
  if (it == graph.header().end()) return 9;
  try {
    return std::stoul(it->second);
  } catch (const std::exception&) {
    throw ValidationError("header 'budget' is not a number");
  }
}

std::string cert_name(const Certificate& c) {
  return std::string("certs/") + kind_name(c.kind) + "-" + std::to_string(c.step) + "-" + std::to_string(c.index) +
         ".txt";
}

fs::path run_dir(const std::string& path) {
  fs::path p(path);
  if (fs::is_directory(p)) return p;
  return p.has_parent_path() ? p.parent_path() : fs::path(".");
}

}  // namespace

BuildResult build_run(const std::string& input_text, const BuildOptions& options) {
  Composition comp(input_text);
  BuildResult result;
  result.budget = options.budget.value_or(header_budget(comp.graph()));
  comp.run(result.budget);

  const fs::path out(options.out_dir.empty() ? "." : options.out_dir);
  fs::create_directories(out / "certs");
  for (const auto& entry : fs::directory_iterator(out / "certs"))
    if (entry.path().extension() == ".txt") fs::remove(entry.path());

  std::ostringstream manifest;
  manifest << "engine " << kEngineVersion << "\n";
  write_file(out / "input.txt", input_text);
  manifest << "input input.txt " << digest(input_text) << "\n";
  manifest << "budget " << result.budget << "\n";
  manifest << "plan-begin\n" << comp.plan().serialize() << "plan-end\n";

  std::ostringstream wlog;
  for (std::size_t s = 0; s < comp.engine_count(); ++s) {
    Engine& e = comp.engine(static_cast<std::uint32_t>(s));
    for (const auto& c : e.certificates()) {
      const auto text = c.serialize(comp.table(), e.group());
      const auto name = cert_name(c);
      write_file(out / name, text);
      manifest << "cert " << name << " " << digest(text) << "\n";
      ++result.certificates;
    }
  }
  for (std::size_t s = 0; s < comp.engine_count(); ++s) {
    Engine& e = comp.engine(static_cast<std::uint32_t>(s));
    for (const auto& [x, z] : e.log().entries()) {
      wlog << s << '\t' << comp.table().text(x) << '\t' << comp.table().text(z) << '\n';
      ++result.log_entries;
    }
  }
  const auto wlog_text = wlog.str();
  write_file(out / "wlog.txt", wlog_text);
  manifest << "wlog wlog.txt " << digest(wlog_text) << " " << result.log_entries << "\n";

  result.manifest = manifest.str();
  result.manifest_path = (out / "manifest.txt").string();
  write_file(out / "manifest.txt", result.manifest);
  return result;
}

LoadedRun::LoadedRun(const std::string& path) {
  const fs::path dir = run_dir(path);
  dir_ = dir.string();
  const auto manifest = read_file(dir / "manifest.txt");
  std::istringstream in(manifest);
  std::string line;
  std::string input_name, input_digest, wlog_name, wlog_digest;
  std::vector<std::pair<std::string, std::string>> certs;
  bool in_plan = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line == "plan-begin") { in_plan = true; continue; }
    if (line == "plan-end") { in_plan = false; continue; }
    if (in_plan || line.empty()) continue;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "engine") continue;
    if (key == "input") fields >> input_name >> input_digest;
    else if (key == "budget") fields >> budget_;
    else if (key == "cert") {
      std::string name, d;
      fields >> name >> d;
      certs.emplace_back(name, d);
    } else if (key == "wlog") fields >> wlog_name >> wlog_digest;
    else throw ValidationError("manifest: unknown key '" + key + "'", lineno);
  }
  if (input_name.empty() || wlog_name.empty()) throw ValidationError("manifest: missing input or wlog entry");

  const auto input = read_file(dir / input_name);
  if (digest(input) != input_digest) problems_.push_back("input digest mismatch for " + input_name);
  composition_ = std::make_unique<Composition>(input);
  auto& comp = *composition_;

  const auto wlog = read_file(dir / wlog_name);
  if (digest(wlog) != wlog_digest) problems_.push_back("commitment log digest mismatch for " + wlog_name);
  std::istringstream win(wlog);
  lineno = 0;
  while (std::getline(win, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto a = line.find('\t');
    const auto b = line.find('\t', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) throw ValidationError("wlog: malformed entry", lineno);
    const auto step = static_cast<std::uint32_t>(std::stoul(line.substr(0, a)));
    if (step >= comp.engine_count()) throw ValidationError("wlog: unknown step", lineno);
    const PointId x = comp.table().parse(line.substr(a + 1, b - a - 1));
    const PointId z = comp.table().parse(line.substr(b + 1));
    try {
      comp.engine(step).load_commit(x, z);
    } catch (const InvariantError& e) {
      problems_.push_back("wlog line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  comp.freeze(true);

  for (const auto& [name, d] : certs) {
    std::string text;
    try {
      text = read_file(dir / name);
    } catch (const ValidationError& e) {
      problems_.push_back(name + ": " + e.what());
      continue;
    }
    if (digest(text) != d) problems_.push_back(name + ": digest mismatch");
    certificates_.emplace_back(name, Certificate::parse(text, comp.table()));
  }
}

VerifyMode parse_verify_mode(std::string_view text) {
  if (text == "folner") return VerifyMode::Folner;
  if (text == "transitive") return VerifyMode::Transitive;
  if (text == "faithful") return VerifyMode::Faithful;
  if (text == "equivariance") return VerifyMode::Equivariance;
  if (text == "all") return VerifyMode::All;
  throw ValidationError("unknown verify mode '" + std::string(text) + "'");
}

std::string VerifyReport::summary() const {
  std::ostringstream out;
  out << "folner " << folner << ", transitive " << transitive << " (+" << transitive_pairs << " pairs), faithful "
      << faithful << " (+" << faithful_words << " words, " << faithful_extended << " extended), equivariance "
      << equivariance << ", failures " << failures.size();
  return out.str();
}

namespace {

// |gC Δ C| recounted from the log and the reference action, with the generator's mode
// derived here: reference-only, stable letter, or conjugated by w.
std::size_t recount(Engine& e, const GroupElement& g, const std::vector<PointId>& c) {
  const std::unordered_set<PointId> inside(c.begin(), c.end());
  const Group& gamma = e.group();
  const auto& log = e.log();
  enum class Mode { Direct, Stable, StableInverse, Conjugated, General } mode = Mode::General;
  if (e.mode() == StepKind::Hnn) {
    const auto& hnn = static_cast<const HnnGroup&>(gamma);
    if (gamma.is_identity(hnn.split_base(g).second)) mode = Mode::Direct;
    else if (g == hnn.stable_letter()) mode = Mode::Stable;
    else if (g == gamma.inverse(hnn.stable_letter())) mode = Mode::StableInverse;
  } else {
    const auto& am = static_cast<const AmalgamGroup&>(gamma);
    if (gamma.is_identity(am.split_factor(1, g).second)) mode = Mode::Direct;
    else if (gamma.is_identity(am.split_factor(2, g).second)) mode = Mode::Conjugated;
  }
  std::size_t kept = 0;
  for (auto p : c) {
    std::optional<PointId> image;
    switch (mode) {
      case Mode::Direct: image = e.reference().apply(g, p); break;
      case Mode::Stable: image = log.forward(p); if (!image) throw UncommittedError("w undecided on the set"); break;
      case Mode::StableInverse: image = log.backward(p); break;
      case Mode::Conjugated: {
        const auto z = log.forward(p);
        if (!z) throw UncommittedError("w undecided on the set");
        image = log.backward(e.reference().apply(g, *z));
        break;
      }
      case Mode::General: image = e.apply(g, p); break;
    }
    // An undecided preimage lies outside the domain, hence outside the set.
    if (image && inside.count(*image)) ++kept;
  }
  return 2 * (c.size() - kept);
}

template <typename F>
void guarded(VerifyReport& report, const std::string& what, F body) {
  try {
    body();
  } catch (const std::exception& ex) {
    report.failures.push_back(what + ": " + ex.what());
  }
}

}  // namespace

VerifyReport verify_run(const std::string& path, const VerifyOptions& options) {
  LoadedRun run(path);
  VerifyReport report;
  report.failures = run.problems();
  auto& comp = run.composition();
  const auto want = [&](VerifyMode m) { return options.mode == VerifyMode::All || options.mode == m; };
  std::unordered_set<std::string> root_faithful;

  for (const auto& [name, cert] : run.certificates()) {
    if (cert.step >= comp.engine_count()) {
      report.failures.push_back(name + ": unknown step");
      continue;
    }
    Engine& e = comp.engine(cert.step);
    switch (cert.kind) {
      case RequirementKind::Folner:
        if (!want(VerifyMode::Folner)) break;
        guarded(report, name, [&] {
          const auto& w = cert.witness;
          if (cert.m == 0 || w.bound != Ratio(1, static_cast<std::int64_t>(cert.m)))
            throw CertificateError("bound is not 1/m");
          const std::unordered_set<PointId> distinct(w.points.begin(), w.points.end());
          if (distinct.size() != w.points.size() || w.points.empty()) throw CertificateError("set is empty or repeats points");
          if (w.generators.size() != e.folner_generators().size()) throw CertificateError("generator list differs");
          for (std::size_t i = 0; i < w.generators.size(); ++i) {
            if (!(w.generators[i] == e.folner_generators()[i])) throw CertificateError("generator list differs");
            const auto moved = recount(e, w.generators[i], w.points);
            if (moved != w.moved[i])
              throw CertificateError("recount " + std::to_string(moved) + " != recorded " + std::to_string(w.moved[i]) +
                                     " for " + w.labels[i]);
            if (!(Ratio(static_cast<std::int64_t>(moved), static_cast<std::int64_t>(w.points.size())) < w.bound))
              throw CertificateError("ratio not below 1/" + std::to_string(cert.m) + " for " + w.labels[i]);
          }
          ++report.folner;
        });
        break;
      case RequirementKind::Transitive:
        if (!want(VerifyMode::Transitive)) break;
        guarded(report, name, [&] {
          if (e.apply(cert.element, cert.x) != cert.y) throw CertificateError("witness does not map x to y");
          ++report.transitive;
        });
        break;
      case RequirementKind::Faithful:
        if (!want(VerifyMode::Faithful)) break;
        guarded(report, name, [&] {
          if (e.group().is_identity(cert.element)) throw CertificateError("element is the identity");
          const PointId image = e.apply(cert.element, cert.x);
          if (image != cert.y) throw CertificateError("recorded image differs");
          if (image == cert.x) throw CertificateError("point is fixed");
          if (cert.step + 1 == comp.engine_count()) root_faithful.insert(cert.element.encode());
          ++report.faithful;
        });
        break;
    }
  }

  Engine& root = comp.root();
  if (want(VerifyMode::Transitive) && options.pairs > 0) {
    std::vector<PointId> pts;
    for (std::size_t k = 0; k < options.pairs; ++k) pts.push_back(root.point(k));
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j)
        guarded(report, "pair " + std::to_string(i) + "," + std::to_string(j), [&] {
          comp.freeze(false);
          Certificate c;
          try {
            c = root.extend_transitive(pts[i], pts[j]);
          } catch (...) {
            comp.freeze(true);
            throw;
          }
          comp.freeze(true);
          if (root.apply(c.element, pts[i]) != pts[j]) throw CertificateError("witness does not re-evaluate");
          ++report.transitive_pairs;
        });
  }

  if (want(VerifyMode::Faithful) && options.depth > 0) {
    BallEnumerator ball(root.group());
    const std::size_t count = ball.ball_size(options.depth);
    for (std::size_t k = 1; k < count; ++k) {
      const GroupElement g = ball.at(k);
      guarded(report, "word " + root.group().format(g), [&] {
        ++report.faithful_words;
        if (root_faithful.count(g.encode())) return;
        comp.freeze(false);
        Certificate c;
        try {
          c = root.extend_faithful(g);
        } catch (...) {
          comp.freeze(true);
          throw;
        }
        comp.freeze(true);
        ++report.faithful_extended;
        if (root.apply(g, c.x) == c.x) throw CertificateError("no moved point");
      });
    }
  }

  if (want(VerifyMode::Equivariance)) {
    for (std::size_t s = 0; s < comp.engine_count(); ++s) {
      Engine& e = comp.engine(static_cast<std::uint32_t>(s));
      guarded(report, "equivariance step " + std::to_string(s), [&] {
        const auto bad = e.equivariance_violations();
        report.equivariance += e.log().size();
        if (!bad.empty())
          throw CertificateError(std::to_string(bad.size()) + " violations, first at " + comp.table().text(bad[0].first));
      });
    }
  }
  return report;
}

std::string schreier_dot(const std::string& path, std::size_t points, const std::vector<std::string>& generators) {
  LoadedRun run(path);
  auto& comp = run.composition();
  Engine& root = comp.root();
  const Group& gamma = root.group();
  std::vector<std::pair<std::string, GroupElement>> gens;
  for (const auto& name : generators) {
    try {
      gens.emplace_back(name, name == "1" ? gamma.identity() : comp.group().britton_reduce(parse_word(name)));
    } catch (const std::exception&) {
      throw ValidationError("unknown generator '" + name + "'");
    }
  }
  comp.freeze(false);
  std::vector<PointId> nodes;
  std::map<PointId, std::size_t> index;
  for (std::size_t k = 0; k < points; ++k) {
    nodes.push_back(root.point(k));
    index.emplace(nodes.back(), k);
  }
  std::ostringstream out;
  out << "digraph schreier {\n";
  for (std::size_t k = 0; k < nodes.size(); ++k)
    out << "  n" << k << " [label=\"" << comp.table().text(nodes[k]) << "\"];\n";
  for (std::size_t k = 0; k < nodes.size(); ++k)
    for (const auto& [name, g] : gens) {
      auto it = index.find(root.apply(g, nodes[k]));
      if (it != index.end()) out << "  n" << k << " -> n" << it->second << " [label=\"" << name << "\"];\n";
    }
  out << "}\n";
  return out.str();
}

}  // namespace baire
