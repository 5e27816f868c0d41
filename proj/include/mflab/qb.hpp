#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mflab/models.hpp"
#include "mflab/spectrum.hpp"

namespace mflab {

struct QBReport {
  std::string model_name;
  double C_hat = 1.0;                // sup of m(IJ)/(m(I)m(J)) and its reciprocal
  std::optional<double> C_exact;     // closed form when known
  bool exact = false;
  int max_level = 0;                 // exhaustive pairs up to this total level
  int random_level = 0;              // random pairs up to this total level
  std::vector<double> by_level;      // running C_hat, index = total level
};

/// Exhaustive word pairs with |I| + |J| <= max_level, then `random_pairs`
/// seeded pairs with total level in (max_level, random_level].
QBReport qb_constant(const MeasureModel& model, int max_level = 8, int random_level = 16,
                     int random_pairs = 4096, std::uint64_t seed = 0,
                     std::uint64_t budget = std::uint64_t{1} << 24);

/// Closed-form quasi-Bernoulli constant: 1 for products,
/// max over P_ij > 0 of max(P_ij / pi_j, pi_j / P_ij) for Markov chains.
double qb_constant_closed(const MeasureModel& model);

struct BoundRow {
  double q = 0.0;
  int n = 0;
  double log_z = 0.0;      // log_ell of the partition sum
  double n_tau = 0.0;      // n * (tau(q) + shift)
  double deviation = 0.0;  // log_z - n_tau
  double bound = 0.0;      // |q| log_ell C
  double slack = 0.0;      // bound - |deviation|
  bool holds = false;
  std::string method;      // enumeration | transfer | factorized
};

struct BoundReport {
  double C = 1.0;
  double tau_shift = 0.0;
  std::vector<BoundRow> rows;
  bool all_hold = true;
  double worst_slack = 0.0;
};

/// C^-|q| ell^{n tau} <= sum m(I)^q <= C^|q| ell^{n tau} on the q x n grid.
/// `tau_shift` perturbs tau to test sensitivity.
BoundReport partition_bound_check(const MeasureModel& model, const std::vector<double>& q_list,
                                  const std::vector<int>& n_list, double C,
                                  double tau_shift = 0.0,
                                  std::uint64_t budget = std::uint64_t{1} << 24);

enum class DichotomyCase { equivalent_to_Hdelta, singular_Hd_ac_Pd, inconclusive };
std::string_view to_string(DichotomyCase c);

struct DichotomyResult {
  DichotomyCase verdict = DichotomyCase::inconclusive;
  double d = 0.0;
  double delta = 0.0;
  double tol = 1e-9;
  std::string statement;
  // case (i): range of ln(m(I)/m0(I)) (ell-adic) or ln(m(K_w)/diam^delta) (IFS)
  std::optional<std::pair<double, double>> log_ratio_range;
  int ratio_levels = 0;
  // case (ii) evidence
  std::optional<NotFlatResult> not_flat_positive;
  std::optional<NotFlatResult> not_flat_negative;
  double chi_plus_one = 0.0;
  double chi_minus_one = 0.0;
  std::vector<std::string> witnesses;
  std::string reason;  // why inconclusive
};

DichotomyResult dichotomy_classify(const MeasureModel& model);

}  // namespace mflab
