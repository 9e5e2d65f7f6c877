#include "asymgen/synthesize.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <thread>

namespace asymgen {

namespace {

struct Candidate {
  std::optional<ProblemRecord> record;
  std::string reason;  // empty on success
  bool gated = false;
};

Candidate attempt(PType t, int slot, std::uint64_t seed, const ProblemSettings& settings) {
  Candidate c;
  Rng rng(seed);
  Json params;
  try {
    params = random_params(t, rng, settings);
  } catch (const Error& e) {
    c.reason = "sampler: " + rejection_reason(e);
    return c;
  }
  try {
    c.record = build_record(t, params, record_id(t, slot), seed);
    c.gated = true;
  } catch (const GateFailure&) {
    c.gated = true;
    c.reason = "gate";
  } catch (const Error& e) {
    c.reason = "solver: " + rejection_reason(e);
  }
  return c;
}

template <typename F>
void parallel_for(std::size_t n, int jobs, F&& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

std::string dedup_key(const ProblemRecord& r) { return ptype_name(r.ptype) + ":" + r.params.dump(); }

}  // namespace

int GenConfig::total() const {
  int n = 0;
  for (int c : counts) n += c;
  return n;
}

GenConfig mini_mix(std::uint64_t seed) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.count(PType::NondimSymbolic) = 40;
  cfg.count(PType::NondimNumeric) = 60;
  cfg.count(PType::Roots) = 60;
  cfg.count(PType::RootsCorrection) = 50;
  cfg.count(PType::Ode) = 60;
  cfg.count(PType::IntegralPoly) = 48;
  cfg.count(PType::IntegralLaplace) = 48;
  return cfg;
}

long TypeStats::rejections() const {
  long n = 0;
  for (const auto& [reason, count] : rejected) n += count;
  return n;
}

double TypeStats::rejection_rate() const {
  const long considered = drawn - duplicates;
  return considered > 0 ? double(rejections()) / double(considered) : 0.0;
}

double TypeStats::gate_pass_rate() const { return gated > 0 ? double(gated - gate_failed) / double(gated) : 1.0; }

std::uint64_t candidate_seed(std::uint64_t seed, PType t, int slot, int attempt) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(t));
  s = splitmix64(s ^ static_cast<std::uint64_t>(slot));
  return splitmix64(s ^ static_cast<std::uint64_t>(attempt));
}

std::string record_id(PType t, int slot) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", slot);
  return ptype_name(t) + "-" + buf;
}

std::string rejection_reason(const std::exception& e) {
  if (dynamic_cast<const DegenerateInput*>(&e)) return "degenerate input";
  if (dynamic_cast<const InconsistentCover*>(&e)) return "inconsistent cover";
  if (dynamic_cast<const SingularCorrection*>(&e)) return "singular correction";
  if (dynamic_cast<const SingularAtOrigin*>(&e)) return "singular at origin";
  if (dynamic_cast<const NoDivergence*>(&e)) return "no divergence";
  if (dynamic_cast<const AmbiguousDominance*>(&e)) return "ambiguous dominance";
  if (dynamic_cast<const NoNonzeroSolution*>(&e)) return "no nonzero solution";
  if (dynamic_cast<const DegenerateMax*>(&e)) return "degenerate maximum";
  if (dynamic_cast<const ZeroAmplitude*>(&e)) return "zero amplitude";
  if (dynamic_cast<const GenerationExhausted*>(&e)) return "prefilter exhausted";
  if (dynamic_cast<const TemplateGap*>(&e)) return "template gap";
  if (dynamic_cast<const NoConvergence*>(&e)) return "no convergence";
  if (dynamic_cast<const StiffFailure*>(&e)) return "stiff failure";
  if (dynamic_cast<const DomainError*>(&e)) return "domain error";
  return "other";
}

SynthesisResult synthesize(const GenConfig& cfg) {
  SynthesisResult out;
  for (PType t : kAllPTypes) {
    const int count = cfg.count(t);
    if (count < 0) throw Error("negative count for " + ptype_name(t));
    TypeStats& stats = out.stats[static_cast<std::size_t>(t)];
    std::vector<std::optional<ProblemRecord>> slots(static_cast<std::size_t>(count));
    std::vector<int> attempts(static_cast<std::size_t>(count), 0);
    std::set<std::string> seen;

    std::vector<int> pending(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pending[static_cast<std::size_t>(i)] = i;
    while (!pending.empty()) {
      std::vector<Candidate> round(pending.size());
      parallel_for(pending.size(), cfg.jobs, [&](std::size_t i) {
        const int slot = pending[i];
        const int a = attempts[static_cast<std::size_t>(slot)];
        round[i] = attempt(t, slot, candidate_seed(cfg.seed, t, slot, a), cfg.settings);
      });

      // Acceptance runs in slot order so dedup does not depend on scheduling.
      std::vector<int> still;
      for (std::size_t i = 0; i < pending.size(); ++i) {
        const int slot = pending[i];
        Candidate& c = round[i];
        ++attempts[static_cast<std::size_t>(slot)];
        ++stats.drawn;
        if (c.gated) ++stats.gated;
        if (c.record) {
          if (seen.insert(dedup_key(*c.record)).second) {
            ++stats.accepted;
            slots[static_cast<std::size_t>(slot)] = std::move(c.record);
            continue;
          }
          ++stats.duplicates;
        } else {
          if (c.reason == "gate") ++stats.gate_failed;
          ++stats.rejected[c.reason];
        }
        if (attempts[static_cast<std::size_t>(slot)] >= cfg.max_attempts) {
          std::string diag;
          for (const auto& [reason, n] : stats.rejected) diag += "; " + reason + ": " + std::to_string(n);
          throw GenerationExhausted(ptype_name(t) + ": slot " + std::to_string(slot) + " used " +
                                    std::to_string(cfg.max_attempts) + " attempts (" +
                                    std::to_string(stats.duplicates) + " duplicates" + diag + ")");
        }
        still.push_back(slot);
      }
      pending = std::move(still);
    }
    for (auto& r : slots) {
      auto ctx = cfg.contexts.find(r->id);
      if (ctx != cfg.contexts.end()) r->context = ctx->second;
      out.records.push_back(std::move(*r));
    }
  }
  return out;
}

std::map<std::string, std::string> load_contexts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::map<std::string, std::string> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(text);
      out[j.at("id").get<std::string>()] = j.at("context").get<std::string>();
    } catch (const Json::exception& e) {
      throw SchemaError(e.what(), line);
    }
  }
  return out;
}

}  // namespace asymgen
