#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mflab/logmath.hpp"
#include "mflab/models.hpp"

namespace mflab {

/// Pairing of the S base, the iterated-log base and the time variable.
/// Time is T = log_b(1/diameter): the level n for ell-adic models in base
/// ell, ln(1/R_n) for self-similar ones in base e.
struct LilConvention {
  std::string name;
  LogBase s_base = LogBase::two;
  LogBase loglog_base = LogBase::natural;
  double ln_c = 1.0;  // ln of the iterated-log base

  /// Smallest admissible time: 3 for natural iterated logs, 16 otherwise.
  int n_min() const { return loglog_base == LogBase::natural ? 3 : 16; }
};

/// "classical" (S base 2, ln ln), "quasi_bernoulli" (base ell throughout),
/// "self_similar" (natural logs, T = ln 1/R_n). Rejects pairings the model
/// cannot express.
LilConvention lil_convention(std::string_view name, const MeasureModel& model);
/// Default convention for a model: classical for Bernoulli, quasi_bernoulli
/// for other ell-adic families, self_similar for IFS.
LilConvention default_convention(const MeasureModel& model);

/// sqrt(sigma2(b) * ln c): the limsup of the ratio under the convention.
double matched_sigma(const MeasureModel& model, const LilConvention& conv);
/// sqrt(sigma2(b)): standard deviation of S - dT per unit T.
double clt_sigma(const MeasureModel& model, const LilConvention& conv);

/// S_1..S_n of a word, S_j = -log_b m(prefix_j). Throws on null prefixes.
std::vector<double> s_process(const MeasureModel& model, const Word& w, LogBase base);

/// (S - d T) / sqrt(2 T L(L(T))) with L = log in the convention's iterated
/// base. Throws ValidationError when T < n_min.
double lil_ratio(double s, double time, double d, const LilConvention& conv);

struct CheckpointStats {
  int n = 0;
  double mean_ratio = 0.0;
  double var_ratio = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double mean_s = 0.0;
  double mean_time = 0.0;
  double ks_distance = 0.0;  // (S - dT)/(sigma sqrt T) against N(0,1)
};

struct EnsembleConfig {
  std::uint64_t paths = 1000;
  std::vector<int> checkpoints;     // strictly increasing, >= n_min
  std::vector<int> horizons;        // window [window_lo, h] for each h
  int window_lo = 16;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::uint64_t max_draws = 0;      // 0: MFLAB_MAX_DRAWS or 1e10
};

struct EnsembleSummary {
  std::string model_name;
  LilConvention convention;
  double d = 0.0;
  double sigma = 0.0;      // matched
  double clt_sigma = 0.0;
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
  std::vector<CheckpointStats> checkpoints;
  std::vector<int> horizons;
  // [horizon][path]: running extremes over [window_lo, horizon]
  std::vector<std::vector<double>> window_sup_ratio;
  std::vector<std::vector<double>> window_inf_ratio;
  std::vector<std::vector<double>> window_sup_sqrt;  // (S - dT)/sqrt(T)
};

/// Monte Carlo ensemble; bit-identical for any thread count.
EnsembleSummary run_ensemble(const MeasureModel& model, const EnsembleConfig& config,
                             const LilConvention& conv);

/// S and T (base b) at the given levels for N paths, row-major [path][level].
struct CheckpointSamples {
  std::vector<int> levels;
  std::uint64_t paths = 0;
  std::vector<double> s;
  std::vector<double> t;
};
CheckpointSamples sample_checkpoints(const MeasureModel& model, std::uint64_t paths,
                                     const std::vector<int>& levels, std::uint64_t seed,
                                     unsigned threads, LogBase base,
                                     std::uint64_t max_draws = 0);

/// Powers of two from 2^lo to 2^hi.
std::vector<int> power_of_two_levels(int lo, int hi);

/// Draw budget: MFLAB_MAX_DRAWS when set, else 1e10.
std::uint64_t default_max_draws();

/// sup_x |F_n(x) - Phi(x)|; sorts its argument.
double ks_normal(std::vector<double>& sample);
double normal_cdf(double x);

struct Atom {
  double value;
  double prob;
};

/// Exact law of S_n (base b) merged over equal values, sorted by value.
/// Product families collapse to digit-count classes; Markov uses a DP over
/// (first symbol, last symbol, transition counts).
std::vector<Atom> exact_distribution(const MeasureModel& model, int n, LogBase base,
                                     std::uint64_t budget = std::uint64_t{1} << 24);

struct Moments {
  long double mean = 0;
  long double variance = 0;
  long double total = 0;
};
Moments moments(const std::vector<Atom>& atoms);

/// Exact m{ sup_{n0<=k<=n1} (S_k - k d) >= a } for product families (S in
/// base b, d dimension-normalized), by first-passage DP over count vectors.
/// n1 is capped by MFLAB_TAIL_MAX_LEVEL (default 64).
double running_max_tail(const MeasureModel& model, int n0, int n1, double a, LogBase base);

}  // namespace mflab
