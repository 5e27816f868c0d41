#include "mflab/gauges.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "mflab/errors.hpp"
#include "mflab/lil.hpp"

namespace mflab {
namespace {

// Boundary of the domain in L = ln(1/t): innermost iterated log positive.
double domain_boundary(ThetaConvention c, double ln_ell) {
  switch (c) {
    case ThetaConvention::base2: return std::exp(1.0) * std::log(2.0);
    case ThetaConvention::natural: return std::exp(1.0);
    case ThetaConvention::base_ell: return std::exp(ln_ell) * ln_ell;
  }
  return 0.0;
}

double log_theta_raw(double L, ThetaConvention c, double ln_ell) {
  switch (c) {
    case ThetaConvention::base2: {
      const double ln2 = std::log(2.0), l2 = L / ln2;
      return ln2 * std::sqrt(2.0 * l2 * std::log(std::log(l2)));
    }
    case ThetaConvention::natural:
      return std::sqrt(2.0 * L * std::log(std::log(L)));
    case ThetaConvention::base_ell: {
      const double ll = L / ln_ell;
      return ln_ell * std::sqrt(2.0 * ll * std::log(std::log(ll) / ln_ell) / ln_ell);
    }
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(ThetaConvention c) {
  switch (c) {
    case ThetaConvention::base2: return "base2";
    case ThetaConvention::natural: return "natural";
    case ThetaConvention::base_ell: return "base_ell";
  }
  return "?";
}

ThetaConvention parse_theta_convention(std::string_view text) {
  if (text == "base2") return ThetaConvention::base2;
  if (text == "natural") return ThetaConvention::natural;
  if (text == "base_ell") return ThetaConvention::base_ell;
  throw ValidationError("unknown theta convention '" + std::string(text) +
                        "' (expected base2|natural|base_ell)");
}

ThetaDomain theta_domain(ThetaConvention c, double ln_ell) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, ThetaDomain> cache;
  const std::lock_guard lock(mu);
  const auto key = std::make_pair(static_cast<int>(c), c == ThetaConvention::base_ell ? ln_ell : 0.0);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  ThetaDomain dom;
  const double b = domain_boundary(c, ln_ell);
  dom.log_inv_t_max = b;
  // last grid point where ln Theta fails to increase, scanning up to 1e6 b
  double prev = log_theta_raw(std::nextafter(b, INFINITY), c, ln_ell);
  dom.log_inv_t_monotone = b;
  for (double L = b * 1.001; L < b * 1e6; L *= 1.001) {
    const double v = log_theta_raw(L, c, ln_ell);
    if (!(v > prev)) dom.log_inv_t_monotone = L;
    prev = v;
  }
  cache[key] = dom;
  return dom;
}

double log_theta(double log_inv_t, ThetaConvention c, double ln_ell) {
  if (!(log_inv_t > domain_boundary(c, ln_ell)))
    throw ValidationError("theta correction (" + std::string(to_string(c)) +
                          "): ln(1/t) = " + std::to_string(log_inv_t) +
                          " outside domain (needs > " +
                          std::to_string(domain_boundary(c, ln_ell)) + ")");
  return log_theta_raw(log_inv_t, c, ln_ell);
}

std::string_view to_string(GaugeFamily f) {
  switch (f) {
    case GaugeFamily::lil_hausdorff: return "lil_hausdorff";
    case GaugeFamily::lil_packing: return "lil_packing";
    case GaugeFamily::sqrt_a: return "sqrt_a";
    case GaugeFamily::theta_a: return "theta_a";
    case GaugeFamily::power: return "power";
  }
  return "?";
}

GaugeFamily parse_gauge_family(std::string_view text) {
  for (auto f : {GaugeFamily::lil_hausdorff, GaugeFamily::lil_packing, GaugeFamily::sqrt_a,
                 GaugeFamily::theta_a, GaugeFamily::power})
    if (to_string(f) == text) return f;
  throw ValidationError("unknown gauge family '" + std::string(text) +
                        "' (expected lil_hausdorff|lil_packing|sqrt_a|theta_a|power)");
}

void GaugeSpec::validate() const {
  switch (family) {
    case GaugeFamily::lil_hausdorff:
    case GaugeFamily::lil_packing:
      if (!(eps > 0)) throw ValidationError("gauge: eps must be > 0");
      if (!(sigma >= 0)) throw ValidationError("gauge: sigma must be >= 0");
      break;
    case GaugeFamily::sqrt_a:
      if (a == 0 || !std::isfinite(a)) throw ValidationError("gauge sqrt_a: a must be nonzero");
      break;
    case GaugeFamily::theta_a:
      if (!(a > 0 && a < 1)) throw ValidationError("gauge theta_a: a must lie in (0,1)");
      if (!profile) throw ValidationError("gauge theta_a: missing chi profile");
      break;
    case GaugeFamily::power: break;
  }
  if (!(ln_ell > 0)) throw ValidationError("gauge: ln(ell) must be > 0");
}

double GaugeSpec::log_inv_t_min() const {
  switch (family) {
    case GaugeFamily::lil_hausdorff:
    case GaugeFamily::lil_packing: return theta_domain(theta, ln_ell).log_inv_t_max;
    case GaugeFamily::sqrt_a:
    case GaugeFamily::power: return 0.0;
    case GaugeFamily::theta_a: {
      const double top = profile->eval(theta_side, profile->q_max);
      return ln_ell / top;
    }
  }
  return 0.0;
}

double gauge_sigma(const MeasureModel& model, ThetaConvention theta) {
  const auto s2 = sigma2(model, theta == ThetaConvention::base2 ? LogBase::two : LogBase::natural);
  return std::sqrt(std::max(0.0, s2.value));
}

GaugeSpec make_gauge(const MeasureModel& model, GaugeFamily family, ThetaConvention theta,
                     double eps_or_a) {
  GaugeSpec g;
  g.family = family;
  g.d = dimension_closed(model);
  g.theta = theta;
  if (theta == ThetaConvention::base_ell || family == GaugeFamily::sqrt_a ||
      family == GaugeFamily::theta_a) {
    if (!model.ln_ell()) throw ValidationError("gauge: base ell undefined for this model");
    g.ln_ell = *model.ln_ell();
  }
  if (family == GaugeFamily::lil_hausdorff || family == GaugeFamily::lil_packing) {
    g.sigma = gauge_sigma(model, theta);
    g.eps = eps_or_a;
  } else {
    g.a = eps_or_a;
  }
  if (family == GaugeFamily::theta_a) g.profile = chi_profile(model, 1.0);
  g.validate();
  return g;
}

GaugeValue gauge_value(const GaugeSpec& spec, double L) {
  spec.validate();
  if (!(L > spec.log_inv_t_min()) && spec.family != GaugeFamily::power &&
      spec.family != GaugeFamily::sqrt_a)
    throw ValidationError("gauge " + std::string(to_string(spec.family)) + ": ln(1/t) = " +
                          std::to_string(L) + " outside domain (needs > " +
                          std::to_string(spec.log_inv_t_min()) + ")");
  if (!(L > 0)) throw ValidationError("gauge: t must lie in (0,1)");
  double lv = -spec.d * L;
  switch (spec.family) {
    case GaugeFamily::lil_hausdorff:
      lv += (spec.sigma + spec.eps) * log_theta(L, spec.theta, spec.ln_ell);
      break;
    case GaugeFamily::lil_packing: {
      const double e = spec.packing_side == PackingSide::singular ? spec.sigma + spec.eps
                                                                  : spec.sigma - spec.eps;
      lv -= e * log_theta(L, spec.theta, spec.ln_ell);
      break;
    }
    case GaugeFamily::sqrt_a:
      lv += spec.a * std::sqrt(L / spec.ln_ell) * spec.ln_ell;
      break;
    case GaugeFamily::theta_a: {
      const double th = theta_gauge(*spec.profile, L / spec.ln_ell, spec.theta_side);
      const double sign = spec.theta_side == ChiSide::positive ? -1.0 : 1.0;
      lv += sign * spec.a * th * spec.ln_ell;
      break;
    }
    case GaugeFamily::power: break;
  }
  GaugeValue out;
  out.log_value = lv;
  out.value = std::exp(lv);
  out.underflow = out.value == 0.0 || !std::isnormal(out.value);
  return out;
}

GaugeFractionResult mass_gauge_fraction(const MeasureModel& model, const GaugeSpec& spec,
                                        const std::vector<int>& levels, std::uint64_t paths,
                                        std::uint64_t seed, unsigned threads,
                                        std::uint64_t max_draws) {
  spec.validate();
  const auto samples =
      sample_checkpoints(model, paths, levels, seed, threads, LogBase::natural, max_draws);
  const std::size_t m = levels.size();
  // the gauge only depends on the diameter; equal diameters share one evaluation
  const bool equal_diam = model.is_ell_adic() || model.ln_ell().has_value();
  std::vector<double> lpsi_level(m);
  if (equal_diam)
    for (std::size_t j = 0; j < m; ++j)
      lpsi_level[j] =
          gauge_value(spec, -model.log_diam_k() - levels[j] * model.log_ratios()[0]).log_value;
  GaugeFractionResult out;
  out.levels = levels;
  out.paths = paths;
  std::vector<std::uint64_t> hits(m, 0), ever(m, 0);
  for (std::uint64_t i = 0; i < paths; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < m; ++j) {
      const double log_mass = -samples.s[i * m + j];
      const double lpsi =
          equal_diam ? lpsi_level[j] : gauge_value(spec, samples.t[i * m + j]).log_value;
      if (log_mass <= lpsi + 1e-12 * std::max(1.0, std::abs(lpsi))) {
        ++hits[j];
        any = true;
      }
      ever[j] += any;
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    out.fraction.push_back(static_cast<double>(hits[j]) / paths);
    out.hit_ever.push_back(static_cast<double>(ever[j]) / paths);
  }
  out.hit_ever_fraction = out.hit_ever.back();
  return out;
}

}  // namespace mflab
