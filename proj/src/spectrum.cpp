#include "mflab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "mflab/errors.hpp"

namespace mflab {
namespace {

using real = long double;

// ln sum_i exp(q ln p_i + tau ln r_i) and its tau-derivative.
std::pair<real, real> moran_log_sum(std::span<const double> log_p, std::span<const double> log_r,
                                    double q, real t) {
  real hi = -INFINITY;
  for (std::size_t i = 0; i < log_p.size(); ++i)
    if (log_p[i] != kNegInf) hi = std::max(hi, q * (real)log_p[i] + t * (real)log_r[i]);
  real sum = 0, dsum = 0;
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    if (log_p[i] == kNegInf) continue;
    const real e = std::exp(q * (real)log_p[i] + t * (real)log_r[i] - hi);
    sum += e;
    dsum += e * (real)log_r[i];
  }
  return {hi + std::log(sum), dsum / sum};
}

// Root of G(tau) = ln sum exp(q ln p_i + tau ln r_i) = 0; G is decreasing.
real solve_moran(std::span<const double> log_p, std::span<const double> log_r, double q) {
  real max_lp = 0, min_lr = INFINITY;
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    if (log_p[i] != kNegInf) max_lp = std::max(max_lp, std::abs((real)log_p[i]));
    min_lr = std::min(min_lr, std::abs((real)log_r[i]));
  }
  real span = std::abs(q) * max_lp / min_lr + 1;
  real lo = -span, hi = span;
  auto g = [&](real t) { return moran_log_sum(log_p, log_r, q, t).first; };
  for (int i = 0; g(lo) < 0 && i < 200; ++i) lo *= 2;
  for (int i = 0; g(hi) > 0 && i < 200; ++i) hi *= 2;
  if (g(lo) < 0 || g(hi) > 0) {
    std::ostringstream os;
    os << "implicit spectrum: failed to bracket root at q=" << q;
    throw NumericalError(os.str());
  }
  real t = 0.5L * (lo + hi);
  for (int iter = 0; iter < 500; ++iter) {
    auto [val, slope] = moran_log_sum(log_p, log_r, q, t);
    if (val == 0) return t;
    if (val > 0) lo = t; else hi = t;
    real next = t - val / slope;
    if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
    if (std::abs(next - t) <= 4 * std::numeric_limits<real>::epsilon() * (1 + std::abs(t))) {
      t = next;
      break;
    }
    t = next;
  }
  const real residual = std::expm1(moran_log_sum(log_p, log_r, q, t).first);
  if (std::abs(residual) > 1e-13L) {
    std::ostringstream os;
    os << "implicit spectrum: no convergence at q=" << q << ", bracket [" << (double)lo << ", "
       << (double)hi << "]";
    throw NumericalError(os.str());
  }
  return t;
}

std::vector<int> active_states(const MarkovShift& chain) {
  const int k = chain.size();
  std::vector<bool> seen(k, false);
  std::vector<int> stack;
  for (int i = 0; i < k; ++i)
    if (chain.pi[i] > 0) {
      seen[i] = true;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < k; ++j)
      if (chain.at(i, j) > 0 && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
  }
  std::vector<int> out;
  for (int i = 0; i < k; ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

void require_irreducible(const MarkovShift& chain, const std::vector<int>& states) {
  const int k = chain.size();
  auto reach = [&](int from) {
    std::vector<bool> seen(k, false);
    std::vector<int> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < k; ++j)
        if (chain.at(i, j) > 0 && !seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
    }
    return seen;
  };
  std::vector<std::vector<bool>> r(k);
  for (int s : states) r[s] = reach(s);
  bool irreducible = true;
  for (int a : states)
    for (int b : states)
      if (!r[a][b]) irreducible = false;
  if (irreducible) return;
  // closed classes: a's class is closed when everything reachable from a reaches a
  std::ostringstream os;
  os << "perron spectrum: active-state graph is reducible; closed classes:";
  std::vector<bool> reported(k, false);
  for (int a : states) {
    if (reported[a]) continue;
    bool closed = true;
    for (int b : states)
      if (r[a][b] && !r[b][a]) closed = false;
    if (!closed) continue;
    os << " {";
    bool first = true;
    for (int b : states)
      if (r[a][b] && r[b][a]) {
        os << (first ? "" : ",") << b;
        reported[b] = true;
        first = false;
      }
    os << "}";
  }
  throw NumericalError(os.str());
}

real perron_root(const std::vector<real>& m, int n) {
  // power iteration on M + I: same Perron vector, no periodicity issues
  std::vector<real> v(n, 1.0L / n), w(n);
  real rho = 0, prev = -1;
  for (int iter = 0; iter < 100000; ++iter) {
    real total = 0;
    for (int i = 0; i < n; ++i) {
      real acc = v[i];
      for (int j = 0; j < n; ++j) acc += m[i * n + j] * v[j];
      w[i] = acc;
      total += acc;
    }
    for (int i = 0; i < n; ++i) v[i] = w[i] / total;
    rho = total - 1;  // v had unit l1 norm
    if (iter > 3 && std::abs(rho - prev) <= 1e-19L * std::max<real>(1, std::abs(rho))) return rho;
    prev = rho;
  }
  if (std::abs(rho - prev) > 1e-13L * std::abs(rho))
    throw NumericalError("perron spectrum: power iteration did not converge to 1e-13");
  return rho;
}

double richardson(const std::function<double(double)>& d, double h, double* err) {
  const double a = d(h), b = d(h / 2);
  const double r = (4 * b - a) / 3;
  if (err) *err = std::abs(r - b);
  return r;
}

}  // namespace

std::string_view to_string(SpectrumMethod method) {
  switch (method) {
    case SpectrumMethod::closed_form: return "closed-form";
    case SpectrumMethod::implicit_root: return "implicit-root";
    case SpectrumMethod::perron: return "perron";
    case SpectrumMethod::empirical: return "empirical";
  }
  return "?";
}

double tau_closed_bernoulli(double p, double q) {
  if (!(p > 0 && p < 1)) throw ValidationError("tau_closed_bernoulli: p must lie in (0,1)");
  if (q == 1.0) return 0.0;
  const real a = q * std::log((real)p), b = q * std::log1p(-(real)p);
  const real hi = std::max(a, b);
  return (double)((hi + std::log(std::exp(a - hi) + std::exp(b - hi))) / std::log(2.0L));
}

double tau_implicit_selfsimilar(std::span<const double> probs, std::span<const double> ratios,
                                double q) {
  if (probs.size() != ratios.size() || probs.empty())
    throw ValidationError("tau_implicit_selfsimilar: probs/ratios size mismatch");
  if (q == 1.0) return 0.0;
  std::vector<double> lp(probs.size()), lr(ratios.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    lp[i] = probs[i] > 0 ? std::log(probs[i]) : kNegInf;
    lr[i] = std::log(ratios[i]);
  }
  return (double)solve_moran(lp, lr, q);
}

double similarity_dimension(std::span<const double> ratios) {
  std::vector<double> ones(ratios.size(), 0.5);
  return tau_implicit_selfsimilar(ones, ratios, 0.0);
}

double tau_perron_markov(const MarkovShift& chain, double q) {
  const auto states = active_states(chain);
  require_irreducible(chain, states);
  if (q == 1.0) return 0.0;
  const int n = static_cast<int>(states.size());
  std::vector<real> m(static_cast<std::size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double p = chain.at(states[a], states[b]);
      m[a * n + b] = p > 0 ? std::pow((real)p, (real)q) : 0;
    }
  const real rho = perron_root(m, n);
  return (double)(std::log(rho) / std::log((real)chain.alphabet.ell()));
}

SpectrumMethod exact_method(const MeasureModel& model) {
  switch (model.family()) {
    case Family::bernoulli:
    case Family::multinomial: return SpectrumMethod::closed_form;
    case Family::self_similar: return SpectrumMethod::implicit_root;
    case Family::markov: return SpectrumMethod::perron;
  }
  return SpectrumMethod::closed_form;
}

double tau(const MeasureModel& model, double q) {
  switch (model.family()) {
    case Family::bernoulli:
      return tau_closed_bernoulli(std::get<BernoulliProduct>(model.data()).p, q);
    case Family::multinomial: {
      if (q == 1.0) return 0.0;
      LogSumAccumulator<real> acc;
      for (double lw : model.log_weights())
        if (lw != kNegInf) acc.add(q * (real)lw);
      return (double)(acc.value() / (real)*model.ln_ell());
    }
    case Family::self_similar: {
      const auto& ss = std::get<SelfSimilarSymbolic>(model.data());
      return tau_implicit_selfsimilar(ss.probs, ss.ratios, q);
    }
    case Family::markov:
      return tau_perron_markov(std::get<MarkovShift>(model.data()), q);
  }
  return 0.0;
}

double tau_in_base(const MeasureModel& model, double q, LogBase base) {
  if (!model.is_ell_adic()) {
    if (base != LogBase::natural)
      throw ValidationError("self-similar spectra are dimension-valued; use base natural");
    return tau(model, q);
  }
  const double ln_ell = *model.ln_ell();
  return tau(model, q) * ln_ell / ln_of_base(base, ln_ell);
}

double log_partition_sum_enumerated(const MeasureModel& model, double q, int n,
                                    std::uint64_t budget) {
  if (n < 1) throw ValidationError("partition sum: level must be >= 1");
  const int k = model.symbol_count();
  if (n * std::log((double)k) > std::log((double)budget) + 1e-9)
    throw BudgetError("partition sum: k^n = " + std::to_string(k) + "^" + std::to_string(n) +
                      " exceeds enumeration budget " + std::to_string(budget));
  LogSumAccumulator<real> acc;
  std::function<void(int, int, real)> walk = [&](int level, int prev, real logm) {
    if (level == n) {
      acc.add(q * logm);
      return;
    }
    for (int s = 0; s < k; ++s) {
      const double step = model.log_step(prev, static_cast<std::uint32_t>(s));
      if (step == kNegInf) continue;
      walk(level + 1, s, logm + step);
    }
  };
  walk(0, -1, 0);
  return (double)acc.value();
}

double log_partition_sum_transfer(const MarkovShift& chain, double q, int n) {
  if (n < 1) throw ValidationError("partition sum: level must be >= 1");
  const int k = chain.size();
  // v[j] = ln sum over words ending in j of m(w)^q
  std::vector<real> v(k, -INFINITY), next(k);
  for (int j = 0; j < k; ++j)
    if (chain.pi[j] > 0) v[j] = q * std::log((real)chain.pi[j]);
  for (int level = 1; level < n; ++level) {
    for (int j = 0; j < k; ++j) {
      LogSumAccumulator<real> acc;
      for (int i = 0; i < k; ++i)
        if (chain.at(i, j) > 0 && v[i] != -INFINITY) acc.add(v[i] + q * std::log((real)chain.at(i, j)));
      next[j] = acc.value();
    }
    v.swap(next);
  }
  LogSumAccumulator<real> total;
  for (auto x : v) total.add(x);
  return (double)total.value();
}

double tau_empirical(const MeasureModel& model, double q, int n, LogBase base,
                     std::uint64_t budget) {
  if (n < 1) throw ValidationError("tau_empirical: level must be >= 1");
  const int k = model.symbol_count();
  const bool fits = n * std::log((double)k) <= std::log((double)budget) + 1e-9;
  if (model.family() == Family::self_similar) {
    if (base == LogBase::two)
      throw ValidationError("self-similar spectra are dimension-valued; use base natural");
    if (!fits) return tau(model, q);  // factorized: level-n Moran equation is the level-1 one
    std::vector<double> lm, ld;
    std::function<void(int, double, double)> walk = [&](int level, double a, double b) {
      if (level == n) {
        lm.push_back(a);
        ld.push_back(b);
        return;
      }
      for (int s = 0; s < k; ++s)
        walk(level + 1, a + model.log_weights()[s], b + model.log_ratios()[s]);
    };
    walk(0, 0.0, 0.0);
    return (double)solve_moran(lm, ld, q);
  }
  const double ln_base = ln_of_base(base, *model.ln_ell());
  if (!fits) {
    if (!model.is_product())
      throw BudgetError("tau_empirical: k^n = " + std::to_string(k) + "^" + std::to_string(n) +
                        " exceeds enumeration budget for a non-product model");
    LogSumAccumulator<real> acc;
    for (double lw : model.log_weights())
      if (lw != kNegInf) acc.add(q * (real)lw);
    return (double)(acc.value() / (real)ln_base);
  }
  return log_partition_sum_enumerated(model, q, n, budget) / (n * ln_base);
}

double support_dimension(const MeasureModel& model) {
  if (model.family() == Family::self_similar)
    return similarity_dimension(std::get<SelfSimilarSymbolic>(model.data()).ratios);
  return support_info(model).delta;
}

std::vector<double> make_q_grid(double q_min, double q_max, double step) {
  if (!(step > 0) || !(q_max >= q_min)) throw ValidationError("q grid: need step > 0 and q_max >= q_min");
  const double inv = 1.0 / step;
  const bool integral = std::abs(inv - std::round(inv)) < 1e-9;
  std::vector<double> out;
  const long first = std::lround(std::ceil(q_min / step - 1e-9));
  const long last = std::lround(std::floor(q_max / step + 1e-9));
  if (last - first > 1000000) throw BudgetError("q grid: more than 10^6 points");
  for (long i = first; i <= last; ++i)
    out.push_back(integral ? static_cast<double>(i) / std::round(inv) : i * step);
  return out;
}

SpectrumTable spectrum_table(const MeasureModel& model, std::span<const double> q_grid,
                             LogBase base) {
  SpectrumTable table;
  table.model_name = model.name();
  table.base = base;
  table.method = exact_method(model);
  for (double q : q_grid) table.points.emplace_back(q, tau_in_base(model, q, base));
  table.d = dimension_closed(model);
  const auto s2 = sigma2(model, model.is_ell_adic() ? base : LogBase::natural);
  if (!s2.flagged) table.sigma2 = s2.value;
  return table;
}

double dimension_closed(const MeasureModel& model) {
  switch (model.family()) {
    case Family::bernoulli: {
      const double p = std::get<BernoulliProduct>(model.data()).p;
      return -(p * std::log2(p) + (1 - p) * std::log2(1 - p));
    }
    case Family::multinomial: {
      const auto& w = std::get<Multinomial>(model.data()).weights;
      real h = 0;
      for (double x : w)
        if (x > 0) h -= x * std::log((real)x);
      return (double)(h / (real)*model.ln_ell());
    }
    case Family::self_similar: {
      const auto& ss = std::get<SelfSimilarSymbolic>(model.data());
      real num = 0, den = 0;
      for (std::size_t i = 0; i < ss.probs.size(); ++i) {
        num += ss.probs[i] * std::log((real)ss.probs[i]);
        den += ss.probs[i] * std::log((real)ss.ratios[i]);
      }
      return (double)(num / den);
    }
    case Family::markov: {
      const auto& chain = std::get<MarkovShift>(model.data());
      const auto pi = chain.pi_is_stationary ? chain.pi : stationary_distribution(chain);
      const int k = chain.size();
      real h = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          if (chain.at(i, j) > 0) h -= pi[i] * chain.at(i, j) * std::log((real)chain.at(i, j));
      return (double)(h / (real)*model.ln_ell());
    }
  }
  return 0.0;
}

TauDerivatives tau_derivatives_at_one(const MeasureModel& model, double h) {
  auto t = [&](double q) { return tau(model, q); };
  const double t1 = t(1.0);
  TauDerivatives out;
  out.first = richardson([&](double s) { return (t(1 + s) - t(1 - s)) / (2 * s); }, h,
                         &out.first_err);
  auto d2 = [&](double s) { return (t(1 + s) - 2 * t1 + t(1 - s)) / (s * s); };
  out.second = richardson(d2, h, &out.second_err);
  out.second_disagreement = std::abs(d2(h) - d2(h / 2));
  return out;
}

DimensionResult dimension(const MeasureModel& model) {
  DimensionResult out;
  out.d = dimension_closed(model);
  out.d_numeric = -tau_derivatives_at_one(model).first;
  out.method = model.family() == Family::markov ? "entropy-rate" : "closed-form";
  if (std::abs(out.d - out.d_numeric) > 1e-8) {
    std::ostringstream os;
    os.precision(17);
    os << "dimension cross-check failed for '" << model.name() << "': closed form " << out.d
       << " vs -tau'(1) = " << out.d_numeric;
    throw NumericalError(os.str());
  }
  return out;
}

Sigma2Result sigma2(const MeasureModel& model, LogBase base) {
  Sigma2Result out;
  out.base = base;
  if (base == LogBase::ell && !model.ln_ell())
    throw ValidationError("sigma2: base 'ell' undefined for IFS with unequal ratios");
  const double ln_base = ln_of_base(base, model.ln_ell().value_or(1.0));
  if (model.is_product()) {
    // sum p_i (ln p_i - d ln r_i)^2 / (-sum p_i ln r_i), active symbols only
    const double d = dimension_closed(model);
    real num = 0, den = 0;
    for (int s = 0; s < model.symbol_count(); ++s) {
      const double lw = model.log_weights()[s];
      if (lw == kNegInf) continue;
      const real p = std::exp((real)lw), lr = model.log_ratios()[s];
      const real c = (real)lw - d * lr;
      num += p * c * c;
      den -= p * lr;
    }
    out.value = (double)(num / den / ln_base);
    out.method = "closed-form";
    return out;
  }
  const auto der = tau_derivatives_at_one(model);
  out.value = der.second / ln_base;
  out.error = der.second_err / ln_base;
  out.method = "richardson";
  out.flagged = der.second_disagreement > 1e-4 * std::max(std::abs(der.second), 1e-8);
  return out;
}

double chi(const MeasureModel& model, double q) {
  if (q == 0.0) return 0.0;
  return tau(model, 1 - q) - q * dimension_closed(model);
}

double ChiProfile::eval(ChiSide side, double s) const {
  if (s == 0.0) return 0.0;
  const double q = side == ChiSide::positive ? s : -s;
  return tau(model, 1 - q) - q * d;
}

ChiProfile chi_profile(const MeasureModel& model, double q_max, int grid_size) {
  if (!(q_max > 0 && q_max <= 1)) throw ValidationError("chi_profile: q_max must lie in (0,1]");
  if (grid_size < 0 || grid_size > 60) throw ValidationError("chi_profile: grid_size out of range");
  ChiProfile p{model, dimension_closed(model), q_max, {}, {}, false};
  double biggest = 0;
  for (int j = grid_size; j >= 0; --j) {
    const double s = std::ldexp(q_max, -j);
    p.positive.emplace_back(s, p.eval(ChiSide::positive, s));
    p.negative.emplace_back(-s, p.eval(ChiSide::negative, s));
    biggest = std::max({biggest, std::abs(p.positive.back().second),
                        std::abs(p.negative.back().second)});
  }
  p.flat = biggest <= 1e-12;
  return p;
}

double chi_inverse(const ChiProfile& profile, double y, ChiSide side) {
  if (profile.flat) throw ValidationError("chi_inverse: chi is flat (d == delta); not invertible");
  const auto& grid = side == ChiSide::positive ? profile.positive : profile.negative;
  double prev = 0;
  for (const auto& [q, c] : grid) {
    if (!(c > prev))
      throw ValidationError("chi_inverse: chi is not strictly increasing on the grid");
    prev = c;
  }
  const double top = profile.eval(side, profile.q_max);
  const double tol = 1e-12 * std::max(1.0, y);
  if (!(y >= 0) || y > top + tol)
    throw ValidationError("chi_inverse: y outside [0, chi(q_max)]");
  if (y == 0) return 0.0;
  if (std::abs(y - top) <= tol) return profile.q_max;
  double lo = 0, hi = profile.q_max;
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (profile.eval(side, mid) < y) lo = mid; else hi = mid;
  }
  const double flo = std::abs(profile.eval(side, lo) - y), fhi = std::abs(profile.eval(side, hi) - y);
  const double s = flo <= fhi ? lo : hi;
  if (std::min(flo, fhi) > tol) throw NumericalError("chi_inverse: bisection did not reach tolerance");
  return s;
}

double theta_gauge(const ChiProfile& profile, double t, ChiSide side) {
  if (profile.flat) throw ValidationError("theta_gauge: flat spectrum");
  const double top = profile.eval(side, profile.q_max);
  if (!(t > 0) || 1.0 / t > top * (1 + 1e-12))
    throw ValidationError("theta_gauge: t must be >= 1/chi(q_max)");
  return 1.0 / chi_inverse(profile, std::min(1.0 / t, top), side);
}

NotFlatResult not_flat_check(const ChiProfile& profile, double q_max, int grid_size,
                             ChiSide side) {
  NotFlatResult out;
  if (profile.flat) {
    out.flat = true;
    return out;
  }
  constexpr double kPositive = 1e-12;
  bool positive = true;
  for (int j = 0; j <= grid_size; ++j) {
    const double s = std::ldexp(q_max, -j);
    const double a = profile.eval(side, s), b = profile.eval(side, s / 2);
    if (!(a > kPositive && b > kPositive)) {
      positive = false;
      break;
    }
    out.ratios.push_back(a / b);
  }
  if (!positive) {
    bool all_zero = true;
    for (int j = 0; j <= grid_size; ++j)
      if (std::abs(profile.eval(side, std::ldexp(q_max, -j))) > kPositive) all_zero = false;
    out.flat = all_zero;
    return out;
  }
  out.C = *std::max_element(out.ratios.begin(), out.ratios.end());
  out.holds = std::isfinite(out.C);
  out.alpha_lower_bound = std::log2(out.C);
  out.alpha_tail = std::log2(out.ratios.back());
  return out;
}

}  // namespace mflab
