#include "mod5orient/montecarlo.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "json.hpp"

#include "mod5orient/rng.hpp"

namespace mod5 {

const Statistic& ExperimentResult::stat(const std::string& name) const {
  for (const auto& s : stats) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("ExperimentResult: no statistic named " + name);
}

namespace {

int resolve_threads(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 2 : static_cast<int>(hw);
}

// Runs trials [0, cfg.trials) split across threads; each worker owns an
// accumulator and the partials are merged in worker order, so the result does
// not depend on scheduling.
template <typename Acc, typename PerTrial>
Acc run_trials(const ExperimentConfig& cfg, PerTrial per_trial) {
  const int threads = resolve_threads(cfg);
  std::vector<Acc> partials(static_cast<std::size_t>(threads));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(threads));
  const std::int64_t chunk = (cfg.trials + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
      const std::int64_t end = std::min(cfg.trials, begin + chunk);
      for (std::int64_t t = begin; t < end; ++t) {
        per_trial(static_cast<std::uint64_t>(t), partials[static_cast<std::size_t>(w)]);
      }
    });
  }
  for (auto& worker : workers) worker.join();
  Acc total;
  for (const Acc& part : partials) total.merge(part);
  return total;
}

// Sample mean / variance of a per-trial quantity from exact power sums.
Statistic moment_stat(const std::string& name, const Rational& sum, const Rational& sum_sq,
                      std::int64_t trials) {
  Statistic s;
  s.name = name;
  s.trials = trials;
  const Rational mean = sum / trials;
  s.mean = to_double(mean);
  if (trials > 1) {
    const Rational var = (sum_sq - sum * mean) / (trials - 1);
    s.variance = to_double(var);
    s.stderror = std::sqrt(std::max(0.0, s.variance / static_cast<double>(trials)));
  }
  return s;
}

// Exact point-level orientation counts, memoized on the edge list. Pairings
// at small n repeat graphs constantly, so this pays for itself.
class CountCache {
 public:
  explicit CountCache(int max_n) : opts_{max_n} {}

  const BigInt& point_count(const MultiGraph& g) {
    key_.assign(g.edges.size() * 2, 0);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      key_[2 * i] = static_cast<char>(g.edges[i].first);
      key_[2 * i + 1] = static_cast<char>(g.edges[i].second);
    }
    auto it = cache_.find(key_);
    if (it == cache_.end()) {
      it = cache_.emplace(key_, count_valid_point_orientations(g, opts_)).first;
    }
    return it->second;
  }

 private:
  CountOptions opts_;
  std::unordered_map<std::string, BigInt> cache_;
  std::string key_;
};

nlohmann::json metadata_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["experiment"] = result.experiment;
  j["n"] = result.config.n;
  j["trials"] = result.config.trials;
  j["seed"] = result.config.seed;
  j["kmax"] = result.config.kmax;
  j["mode"] = result.config.mode == ExperimentConfig::Mode::kExactY ? "exact-Y" : "solver-only";
  j["prng"] = kPrngName;
  j["seed_scheme"] = kSeedScheme;
  j["version"] = kVersion;
  return j;
}

}  // namespace

ExperimentResult estimate_moments(const ExperimentConfig& cfg) {
  if (cfg.mode != ExperimentConfig::Mode::kExactY)
    throw std::invalid_argument("estimate_moments: requires exact-Y mode");
  if (cfg.n > cfg.exact_max_n)
    throw std::invalid_argument("estimate_moments: n exceeds the exact-counting limit");

  struct Acc {
    BigInt y, y2, y3, y4;
    CountCache cache{12};
    void merge(const Acc& o) { y += o.y; y2 += o.y2; y3 += o.y3; y4 += o.y4; }
  };

  Acc total = run_trials<Acc>(cfg, [&cfg](std::uint64_t t, Acc& acc) {
    const Pairing p = sample_pairing(cfg.n, 9, trial_seed(cfg.seed, t));
    const BigInt& y = acc.cache.point_count(pairing_to_multigraph(p));
    const BigInt y2 = y * y;
    acc.y += y;
    acc.y2 += y2;
    acc.y3 += y2 * y;
    acc.y4 += y2 * y2;
  });

  ExperimentResult result;
  result.experiment = "moments";
  result.config = cfg;
  const std::int64_t T = cfg.trials;
  result.stats.push_back(moment_stat("E[Y]", Rational(total.y), Rational(total.y2), T));
  result.stats.push_back(moment_stat("E[Y^2]", Rational(total.y2), Rational(total.y4), T));
  // Y(Y-1) has power sums y2 - y and y4 - 2 y3 + y2.
  result.stats.push_back(moment_stat("E[Y(Y-1)]", Rational(total.y2 - total.y),
                                     Rational(total.y4 - 2 * total.y3 + total.y2), T));
  return result;
}

ExperimentResult cycle_poisson_experiment(const ExperimentConfig& cfg) {
  const int kmax = cfg.kmax;
  if (kmax < 1) throw std::invalid_argument("cycle_poisson_experiment: kmax must be >= 1");

  struct Acc {
    std::vector<std::int64_t> sum, sum_sq;
    std::vector<std::int64_t> cross;  // upper-triangle sums of X_j X_k
    bool init = false;
    void ensure(int kmax) {
      if (init) return;
      sum.assign(static_cast<std::size_t>(kmax) + 1, 0);
      sum_sq.assign(static_cast<std::size_t>(kmax) + 1, 0);
      cross.assign(static_cast<std::size_t>((kmax + 1) * (kmax + 1)), 0);
      init = true;
    }
    void merge(const Acc& o) {
      if (!o.init) return;
      ensure(static_cast<int>(o.sum.size()) - 1);
      for (std::size_t i = 0; i < sum.size(); ++i) {
        sum[i] += o.sum[i];
        sum_sq[i] += o.sum_sq[i];
      }
      for (std::size_t i = 0; i < cross.size(); ++i) cross[i] += o.cross[i];
    }
  };

  Acc total = run_trials<Acc>(cfg, [&cfg, kmax](std::uint64_t t, Acc& acc) {
    acc.ensure(kmax);
    const Pairing p = sample_pairing(cfg.n, 9, trial_seed(cfg.seed, t));
    const CycleCensus census = count_cycles(pairing_to_multigraph(p), kmax);
    for (int k = 1; k <= kmax; ++k) {
      const std::int64_t x = census.at(k);
      acc.sum[static_cast<std::size_t>(k)] += x;
      acc.sum_sq[static_cast<std::size_t>(k)] += x * x;
      for (int j = 1; j < k; ++j) {
        acc.cross[static_cast<std::size_t>(j * (kmax + 1) + k)] += census.at(j) * x;
      }
    }
  });

  ExperimentResult result;
  result.experiment = "cycles";
  result.config = cfg;
  const std::int64_t T = cfg.trials;
  for (int k = 1; k <= kmax; ++k) {
    result.stats.push_back(moment_stat("E[X_" + std::to_string(k) + "]",
                                       Rational(total.sum[static_cast<std::size_t>(k)]),
                                       Rational(total.sum_sq[static_cast<std::size_t>(k)]), T));
  }
  for (int j = 1; j <= kmax; ++j) {
    for (int k = j + 1; k <= kmax; ++k) {
      const double mj = static_cast<double>(total.sum[static_cast<std::size_t>(j)]) / static_cast<double>(T);
      const double mk = static_cast<double>(total.sum[static_cast<std::size_t>(k)]) / static_cast<double>(T);
      const double cov =
          static_cast<double>(total.cross[static_cast<std::size_t>(j * (kmax + 1) + k)]) /
              static_cast<double>(T) - mj * mk;
      const double vj = static_cast<double>(total.sum_sq[static_cast<std::size_t>(j)]) / static_cast<double>(T) - mj * mj;
      const double vk = static_cast<double>(total.sum_sq[static_cast<std::size_t>(k)]) / static_cast<double>(T) - mk * mk;
      Statistic s;
      s.name = "corr(X_" + std::to_string(j) + ",X_" + std::to_string(k) + ")";
      s.mean = (vj > 0 && vk > 0) ? cov / std::sqrt(vj * vk) : 0.0;
      s.variance = 1.0;  // rough Fisher scale
      s.stderror = 1.0 / std::sqrt(static_cast<double>(T));
      s.trials = T;
      result.stats.push_back(s);
    }
  }
  return result;
}

ExperimentResult joint_moment_experiment(const ExperimentConfig& cfg, int k) {
  if (cfg.mode != ExperimentConfig::Mode::kExactY)
    throw std::invalid_argument("joint_moment_experiment: requires exact-Y mode");
  if (cfg.n > cfg.exact_max_n)
    throw std::invalid_argument("joint_moment_experiment: n exceeds the exact-counting limit");
  if (k < 1) throw std::invalid_argument("joint_moment_experiment: k must be >= 1");

  struct Acc {
    BigInt a, b, a2, b2, ab;  // a = Y X_k, b = Y
    CountCache cache{12};
    void merge(const Acc& o) { a += o.a; b += o.b; a2 += o.a2; b2 += o.b2; ab += o.ab; }
  };

  Acc total = run_trials<Acc>(cfg, [&cfg, k](std::uint64_t t, Acc& acc) {
    const Pairing p = sample_pairing(cfg.n, 9, trial_seed(cfg.seed, t));
    const MultiGraph g = pairing_to_multigraph(p);
    const BigInt& y = acc.cache.point_count(g);
    const std::int64_t x = count_cycles(g, k).at(k);
    const BigInt a = y * x;
    acc.a += a;
    acc.b += y;
    acc.a2 += a * a;
    acc.b2 += y * y;
    acc.ab += a * y;
  });

  ExperimentResult result;
  result.experiment = "joint";
  result.config = cfg;
  result.config.kmax = k;
  const std::int64_t T = cfg.trials;
  Statistic s;
  s.name = "E[YX_" + std::to_string(k) + "]/E[Y]";
  s.trials = T;
  if (total.b == 0) throw std::runtime_error("joint_moment_experiment: every trial had Y = 0");
  const Rational ratio(Rational(total.a) / Rational(total.b));
  s.mean = to_double(ratio);
  // delta method: Var(ratio) ~ Var(A - r B) / (T E[B]^2)
  const double r = s.mean;
  const double mean_b = to_double(Rational(total.b) / T);
  const double var_a = to_double((Rational(total.a2) - Rational(total.a * total.a) / T) / (T - 1));
  const double var_b = to_double((Rational(total.b2) - Rational(total.b * total.b) / T) / (T - 1));
  const double cov = to_double((Rational(total.ab) - Rational(total.a * total.b) / T) / (T - 1));
  s.variance = std::max(0.0, (var_a - 2 * r * cov + r * r * var_b) / (mean_b * mean_b));
  s.stderror = std::sqrt(s.variance / static_cast<double>(T));
  result.stats.push_back(s);
  return result;
}

ExperimentResult orientation_success_rate(const ExperimentConfig& cfg) {
  const bool exact = cfg.mode == ExperimentConfig::Mode::kExactY && cfg.n <= cfg.exact_max_n;

  struct Acc {
    std::int64_t successes = 0;
    std::int64_t feasible = 0;
    std::int64_t disagreements = 0;
    CountCache cache{12};
    void merge(const Acc& o) {
      successes += o.successes;
      feasible += o.feasible;
      disagreements += o.disagreements;
    }
  };

  Acc total = run_trials<Acc>(cfg, [&cfg, exact](std::uint64_t t, Acc& acc) {
    const Pairing p = sample_pairing(cfg.n, 9, trial_seed(cfg.seed, t));
    const MultiGraph g = pairing_to_multigraph(p);
    SolverOptions solver = cfg.solver;
    solver.seed = splitmix64(trial_seed(cfg.seed, t) ^ 0xC2B2AE3D27D4EB4FULL);
    const auto orientation = find_valid_orientation(g, solver);
    if (orientation) {
      if (!verify_orientation(g, *orientation))
        throw std::logic_error("orientation_success_rate: search returned an invalid orientation");
      ++acc.successes;
    }
    if (exact) {
      const bool possible = acc.cache.point_count(g) > 0;
      acc.feasible += possible ? 1 : 0;
      acc.disagreements += (possible != orientation.has_value()) ? 1 : 0;
    }
  });

  ExperimentResult result;
  result.experiment = "orient";
  result.config = cfg;
  const std::int64_t T = cfg.trials;
  result.stats.push_back(moment_stat("success_rate", Rational(total.successes),
                                     Rational(total.successes), T));
  if (exact) {
    result.stats.push_back(moment_stat("feasible_rate", Rational(total.feasible),
                                       Rational(total.feasible), T));
    Statistic d;
    d.name = "solver_oracle_disagreements";
    d.mean = static_cast<double>(total.disagreements);
    d.trials = T;
    result.stats.push_back(d);
  }
  return result;
}

std::string to_json_lines(const ExperimentResult& result) {
  std::ostringstream out;
  const nlohmann::json meta = metadata_json(result);
  for (const auto& s : result.stats) {
    nlohmann::json j = meta;
    j["statistic"] = s.name;
    j["mean"] = s.mean;
    j["variance"] = s.variance;
    j["stderr"] = s.stderror;
    j["stat_trials"] = s.trials;
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "experiment,statistic,mean,variance,stderr,trials,n,seed,prng,version\n";
  out.precision(17);
  for (const auto& s : result.stats) {
    out << result.experiment << "," << s.name << "," << s.mean << "," << s.variance << ","
        << s.stderror << "," << s.trials << "," << result.config.n << "," << result.config.seed
        << "," << kPrngName << "," << kVersion << "\n";
  }
  return out.str();
}

}  // namespace mod5
