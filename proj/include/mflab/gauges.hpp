#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mflab/models.hpp"
#include "mflab/spectrum.hpp"

namespace mflab {

/// Iterated-log correction Theta. Arguments are L = ln(1/t) since t itself
/// underflows long before the correction matters.
///   base2:    Theta = 2^sqrt(2 L2 ln ln L2),             L2 = L / ln 2
///   natural:  theta = e^sqrt(2 L ln ln L)
///   base_ell: Theta = ell^sqrt(2 Ll log_l log_l Ll),    Ll = L / ln ell
enum class ThetaConvention { base2, natural, base_ell };
std::string_view to_string(ThetaConvention c);
ThetaConvention parse_theta_convention(std::string_view text);

struct ThetaDomain {
  double log_inv_t_max = 0.0;        // ln(1/t_max): Theta defined for L > this
  double log_inv_t_monotone = 0.0;   // ln Theta increasing in L beyond this
};

/// Domain of the convention, computed by scan and cached per (convention, ell).
ThetaDomain theta_domain(ThetaConvention c, double ln_ell = std::log(2.0));

/// ln Theta at L = ln(1/t). Throws ValidationError outside the domain.
double log_theta(double log_inv_t, ThetaConvention c, double ln_ell = std::log(2.0));

enum class GaugeFamily { lil_hausdorff, lil_packing, sqrt_a, theta_a, power };
std::string_view to_string(GaugeFamily f);
GaugeFamily parse_gauge_family(std::string_view text);

/// Packing gauges: t^d Theta^-(sigma+eps) on the singular side,
/// t^d Theta^-(sigma-eps) on the absolutely continuous side.
enum class PackingSide { singular, ac };

struct GaugeSpec {
  GaugeFamily family = GaugeFamily::lil_hausdorff;
  double d = 0.0;
  double sigma = 0.0;
  double eps = 0.1;
  double a = 0.5;
  ThetaConvention theta = ThetaConvention::base2;
  double ln_ell = std::log(2.0);
  PackingSide packing_side = PackingSide::singular;
  ChiSide theta_side = ChiSide::positive;
  std::optional<ChiProfile> profile;  // theta_a only

  /// Throws ValidationError on violated parameter constraints.
  void validate() const;
  /// Smallest admissible L = ln(1/t).
  double log_inv_t_min() const;
};

/// Spec with d and the matched sigma taken from the model. For theta_a the
/// chi profile is built with q_max = 1.
GaugeSpec make_gauge(const MeasureModel& model, GaugeFamily family, ThetaConvention theta,
                     double eps_or_a);

/// sqrt(sigma2) matched to a Theta convention: base 2 for base2, natural otherwise.
double gauge_sigma(const MeasureModel& model, ThetaConvention theta);

struct GaugeValue {
  double log_value = 0.0;  // natural log, always finite in domain
  double value = 0.0;
  bool underflow = false;
};

/// Psi at L = ln(1/t), evaluated in the log domain.
GaugeValue gauge_value(const GaugeSpec& spec, double log_inv_t);

struct GaugeFractionResult {
  std::vector<int> levels;
  std::vector<double> fraction;  // m(B_n) estimate per level
  std::vector<double> hit_ever;  // paths with a hit at some level <= n
  double hit_ever_fraction = 0.0;  // hit at >= 1 level
  std::uint64_t paths = 0;
};

/// Fraction of N sampled paths whose level-n cylinder has log m <= log Psi(diam)
/// (equality within 1e-12 relative counts as a hit).
GaugeFractionResult mass_gauge_fraction(const MeasureModel& model, const GaugeSpec& spec,
                                        const std::vector<int>& levels, std::uint64_t paths,
                                        std::uint64_t seed, unsigned threads = 1,
                                        std::uint64_t max_draws = 0);

}  // namespace mflab
