#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mod5orient/exact.hpp"
#include "mod5orient/graph.hpp"
#include "mod5orient/orientation.hpp"

namespace mod5 {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  enum class Mode { kExactY, kSolverOnly };

  int n = 2;
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  int kmax = 3;           // cycle lengths tracked by the cycle experiments
  Mode mode = Mode::kExactY;
  int threads = 0;        // 0 picks the hardware concurrency
  int exact_max_n = 6;    // exact-counting limit forwarded to the counter
  SolverOptions solver{}; // budgets for the orientation search
};

struct Statistic {
  std::string name;
  double mean = 0;
  double variance = 0;    // per-trial sample variance
  double stderror = 0;    // sqrt(variance / trials)
  std::int64_t trials = 0;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<Statistic> stats;
  ExperimentConfig config;

  const Statistic& stat(const std::string& name) const;
};

// Per trial: sample a pairing, count its valid orientations exactly at point
// level; reports E[Y], E[Y^2], E[Y(Y-1)]. Exact integer aggregation, so runs
// are bit-identical per config and independent of the thread count.
ExperimentResult estimate_moments(const ExperimentConfig& cfg);

// Empirical mean/variance of the k-cycle counts X_k for k <= kmax, plus their
// pairwise correlations; Poisson behaviour means mean ~ variance.
ExperimentResult cycle_poisson_experiment(const ExperimentConfig& cfg);

// Ratio sum(Y X_k) / sum(Y) across trials, with a delta-method standard
// error; compares against finite_n_joint_moment_ratio.
ExperimentResult joint_moment_experiment(const ExperimentConfig& cfg, int k);

// Fraction of sampled pairings the search orients; in exact mode also counts
// disagreements between the search and the exact count.
ExperimentResult orientation_success_rate(const ExperimentConfig& cfg);

// One JSON object per statistic, randomness metadata embedded.
std::string to_json_lines(const ExperimentResult& result);
std::string to_csv(const ExperimentResult& result);

}  // namespace mod5
