#pragma once

// Run orchestration: build artifacts (manifest, certificates, commitment log), independent
// verification by replaying the log into read-only engines, and Schreier graph export.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "baire/composer.hpp"

namespace baire {

inline constexpr const char* kEngineVersion = "baire-engine 0.1.0";

std::uint64_t fnv1a64(std::string_view bytes);
// "fnv1a64:<16 hex digits>"
std::string digest(std::string_view bytes);

struct BuildOptions {
  std::optional<std::size_t> budget;  // overrides the input's `budget` header
  std::string out_dir;
};

struct BuildResult {
  std::string manifest_path;
  std::string manifest;
  std::size_t budget = 0;
  std::size_t certificates = 0;
  std::size_t log_entries = 0;
};

BuildResult build_run(const std::string& input_text, const BuildOptions& options);

enum class VerifyMode { Folner, Transitive, Faithful, Equivariance, All };
VerifyMode parse_verify_mode(std::string_view text);

struct VerifyOptions {
  VerifyMode mode = VerifyMode::All;
  std::size_t depth = 0;  // faithfulness: every nontrivial element of word length <= depth
  std::size_t pairs = 0;  // transitivity: every ordered pair among the first `pairs` root points
};

struct VerifyReport {
  std::size_t folner = 0;
  std::size_t transitive = 0;
  std::size_t transitive_pairs = 0;
  std::size_t faithful = 0;
  std::size_t faithful_words = 0;
  std::size_t faithful_extended = 0;
  std::size_t equivariance = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  std::string summary() const;
};

// `path` is the manifest file or its directory.
VerifyReport verify_run(const std::string& path, const VerifyOptions& options);

// DOT digraph on the first `points` root points; arcs under each named generator whose
// target is also a node. Generator names are words such as "v0:(1;0)", "e0" or "1".
std::string schreier_dot(const std::string& path, std::size_t points, const std::vector<std::string>& generators);

// A build directory loaded for verification: engines rebuilt from the stored input with
// the stored log replayed and every engine frozen.
class LoadedRun {
 public:
  explicit LoadedRun(const std::string& path);

  Composition& composition() { return *composition_; }
  const std::vector<std::pair<std::string, Certificate>>& certificates() const { return certificates_; }
  // Integrity problems found while loading (digest mismatches, unreadable files).
  const std::vector<std::string>& problems() const { return problems_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::string dir_;
  std::unique_ptr<Composition> composition_;
  std::vector<std::pair<std::string, Certificate>> certificates_;
  std::vector<std::string> problems_;
  std::size_t budget_ = 0;
};

}  // namespace baire
