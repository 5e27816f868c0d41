#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mflab/logmath.hpp"
#include "mflab/models.hpp"

namespace mflab {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

enum class SpectrumMethod { closed_form, implicit_root, perron, empirical };
std::string_view to_string(SpectrumMethod method);

// Exact spectra ------------------------------------------------------------
//
// tau is normalized as a dimension: base ell for ell-adic families, the root
// of sum p_i^q r_i^tau = 1 for self-similar ones. tau(1) = 0 is returned
// exactly at q == 1.

/// log2(p^q + (1-p)^q).
double tau_closed_bernoulli(double p, double q);

/// Unique root of sum p_i^q r_i^tau = 1; bracketing + safeguarded Newton,
/// |F| <= 1e-13 on return.
double tau_implicit_selfsimilar(std::span<const double> probs, std::span<const double> ratios,
                                double q);

/// delta with sum r_i^delta = 1.
double similarity_dimension(std::span<const double> ratios);

/// log_ell of the Perron root of P^{(q)} (entrywise power, 0^q = 0) on the
/// active states. Throws NumericalError naming the closed classes when the
/// active graph is reducible.
double tau_perron_markov(const MarkovShift& chain, double q);

/// Dispatches to the family's exact method.
double tau(const MeasureModel& model, double q);
SpectrumMethod exact_method(const MeasureModel& model);

/// tau in a requested log base: tau_dim * ln(ell) / ln(base) for ell-adic
/// families. Self-similar spectra are dimension-valued and only accept
/// LogBase::natural.
double tau_in_base(const MeasureModel& model, double q, LogBase base);

/// tau_n(q) from the level-n partition sum over nonzero-mass cylinders.
/// Product families fall back to the factorized sum when k^n exceeds the
/// budget; Markov models throw BudgetError.
double tau_empirical(const MeasureModel& model, double q, int n, LogBase base = LogBase::ell,
                     std::uint64_t budget = kDefaultEnumerationBudget);

/// ln sum_{|w|=n, m(w)>0} m(w)^q by explicit enumeration (k^n <= budget).
double log_partition_sum_enumerated(const MeasureModel& model, double q, int n,
                                    std::uint64_t budget = kDefaultEnumerationBudget);

/// Same sum for Markov models by the exact forward recursion over the last
/// symbol (no enumeration, any n).
double log_partition_sum_transfer(const MarkovShift& chain, double q, int n);

/// Support dimension: log_ell g for ell-adic families, similarity dimension
/// for self-similar ones.
double support_dimension(const MeasureModel& model);

struct SpectrumTable {
  std::string model_name;
  LogBase base = LogBase::ell;
  SpectrumMethod method = SpectrumMethod::closed_form;
  std::vector<std::pair<double, double>> points;  // (q, tau(q))
  double d = 0.0;
  std::optional<double> sigma2;  // empty: not estimated
};

SpectrumTable spectrum_table(const MeasureModel& model, std::span<const double> q_grid,
                             LogBase base);

/// q_min, q_min + step, ... <= q_max, snapped to multiples of step.
std::vector<double> make_q_grid(double q_min, double q_max, double step);

// Dimension and curvature ---------------------------------------------------

struct DimensionResult {
  double d = 0.0;          // closed form
  double d_numeric = 0.0;  // -tau'(1), Richardson central difference
  std::string method;
};

/// Throws NumericalError when the closed form and the Richardson derivative
/// disagree by more than 1e-8.
DimensionResult dimension(const MeasureModel& model);

/// Closed-form dimension without the cross-check.
double dimension_closed(const MeasureModel& model);

struct Sigma2Result {
  double value = 0.0;
  double error = 0.0;
  LogBase base = LogBase::natural;
  std::string method;
  bool flagged = false;  // unstable derivative estimate
};

/// Variance rate of S^(b)_n - d T^(b)_n per unit of T^(b)_n = log_b(1/diameter).
/// Natural base gives tau''(1); base b divides it by ln b. For Bernoulli
/// products in base 2 this is p(1-p) log2(p/(1-p))^2.
Sigma2Result sigma2(const MeasureModel& model, LogBase base);

/// Richardson-combined derivatives of tau at 1 (steps h, h/2).
struct TauDerivatives {
  double first = 0.0;
  double second = 0.0;
  double first_err = 0.0;
  double second_err = 0.0;
  double second_disagreement = 0.0;  // |D2(h) - D2(h/2)|
};
TauDerivatives tau_derivatives_at_one(const MeasureModel& model, double h = 1e-4);

// chi(q) = tau(1-q) - q d ----------------------------------------------------

double chi(const MeasureModel& model, double q);

enum class ChiSide { positive, negative };

/// Continuous chi evaluator plus dyadic grids on both sides of 0.
struct ChiProfile {
  MeasureModel model;
  double d = 0.0;
  double q_max = 1.0;
  std::vector<std::pair<double, double>> positive;  // (q, chi(q)), q in (0, q_max]
  std::vector<std::pair<double, double>> negative;  // (q, chi(q)), q in [-q_max, 0)
  bool flat = false;                                // chi == 0 on the grids

  /// chi(s) on the positive side, chi(-s) on the negative side, s >= 0.
  double eval(ChiSide side, double s) const;
};

ChiProfile chi_profile(const MeasureModel& model, double q_max = 1.0, int grid_size = 12);

/// s in [0, q_max] with chi(+-s) = y, by bisection on the continuous evaluator.
double chi_inverse(const ChiProfile& profile, double y, ChiSide side = ChiSide::positive);

/// 1 / chi^{-1}(1/t). Requires t >= 1/chi(+-q_max).
double theta_gauge(const ChiProfile& profile, double t, ChiSide side = ChiSide::positive);

struct NotFlatResult {
  bool holds = false;
  bool flat = false;                  // chi identically 0 (d == delta)
  double C = 0.0;                     // sup_j chi(q_j) / chi(q_j / 2)
  double alpha_lower_bound = 0.0;     // log2 C
  double alpha_tail = 0.0;            // log2 of the ratio at the finest grid point
  std::vector<double> ratios;
};

/// Dyadic scan q_j = +-q_max 2^-j, j = 0..grid_size.
NotFlatResult not_flat_check(const ChiProfile& profile, double q_max, int grid_size,
                             ChiSide side = ChiSide::positive);

}  // namespace mflab
