#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "asymgen/validate.hpp"

namespace asymgen {

struct GenConfig {
  std::array<int, kPTypeCount> counts{};  // indexed by PType
  std::uint64_t seed = 0;
  ProblemSettings settings;
  int jobs = 1;
  int max_attempts = 400;  // per record slot
  /// Optional word-problem wrappers keyed by record id.
  std::map<std::string, std::string> contexts;

  int& count(PType t) { return counts[static_cast<std::size_t>(t)]; }
  int count(PType t) const { return counts[static_cast<std::size_t>(t)]; }
  int total() const;
};

/// Counts for the 366-problem evaluation mix.
GenConfig mini_mix(std::uint64_t seed);

/// Per-type bookkeeping of candidate draws.
struct TypeStats {
  long drawn = 0;
  long accepted = 0;
  long duplicates = 0;
  long gated = 0;        // candidates that reached the numeric check
  long gate_failed = 0;
  std::map<std::string, long> rejected;  // reason -> count, duplicates excluded

  long rejections() const;
  /// Rejected draws (any reason except duplication) over non-duplicate draws.
  double rejection_rate() const;
  /// Fraction of gated candidates that passed.
  double gate_pass_rate() const;
};

struct SynthesisResult {
  std::vector<ProblemRecord> records;  // ordered by type, then slot
  std::array<TypeStats, kPTypeCount> stats;
};

/// Draws, solves, gates and renders until every type has its count of unique
/// passing records. Output depends only on the config, not on `jobs`.
/// Throws GenerationExhausted when a slot runs out of attempts.
SynthesisResult synthesize(const GenConfig& cfg);

/// Seed of one candidate: independent per (type, slot, attempt).
std::uint64_t candidate_seed(std::uint64_t seed, PType t, int slot, int attempt);

/// Record id such as "roots-0007".
std::string record_id(PType t, int slot);

/// Reads wrapper files: one JSON object per line with "id" and "context".
std::map<std::string, std::string> load_contexts(const std::filesystem::path& path);

/// Short label for a solver-stage error, used in rejection logs.
std::string rejection_reason(const std::exception& e);

}  // namespace asymgen
