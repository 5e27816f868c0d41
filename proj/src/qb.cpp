#include "mflab/qb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "mflab/errors.hpp"

namespace mflab {
namespace {

struct WordMass {
  Word word;
  double log_mass;
};

std::vector<WordMass> positive_words(const MeasureModel& model, int level) {
  std::vector<WordMass> out;
  const int k = model.symbol_count();
  std::vector<std::uint32_t> buf(level);
  std::function<void(int, int, double)> rec = [&](int j, int prev, double lm) {
    if (j == level) {
      out.push_back({Word(model.alphabet(), buf), lm});
      return;
    }
    for (int s = 0; s < k; ++s) {
      const double step = model.log_step(prev, static_cast<std::uint32_t>(s));
      if (step == kNegInf) continue;
      buf[j] = static_cast<std::uint32_t>(s);
      rec(j + 1, s, lm + step);
    }
  };
  rec(0, -1, 0.0);
  return out;
}

double pair_log_ratio(const MeasureModel& model, const WordMass& a, const WordMass& b) {
  const double joint = log_cylinder_mass(model, word_concat(a.word, b.word));
  if (joint == kNegInf) return 0.0;  // not a positive-mass pair
  return std::abs(joint - a.log_mass - b.log_mass);
}

}  // namespace

double qb_constant_closed(const MeasureModel& model) {
  if (model.is_product()) return 1.0;
  const auto& chain = std::get<MarkovShift>(model.data());
  const int k = chain.size();
  double c = 1.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double p = chain.at(i, j);
      if (p > 0 && chain.pi[i] > 0 && chain.pi[j] > 0)
        c = std::max({c, p / chain.pi[j], chain.pi[j] / p});
    }
  return c;
}

QBReport qb_constant(const MeasureModel& model, int max_level, int random_level, int random_pairs,
                     std::uint64_t seed, std::uint64_t budget) {
  if (max_level < 2) throw ValidationError("qb_constant: max_level must be >= 2");
  QBReport r;
  r.model_name = model.name();
  r.max_level = max_level;
  r.random_level = std::max(random_level, max_level);
  r.by_level.assign(r.random_level + 1, 1.0);
  r.C_exact = qb_constant_closed(model);
  r.exact = true;
  if (model.is_product()) {
    // m(IJ) = m(I) m(J) identically
    r.C_hat = 1.0;
    return r;
  }
  const int k = model.symbol_count();
  long double pairs = 0;
  for (int s = 2; s <= max_level; ++s) pairs += (s - 1) * std::pow((long double)k, s);
  if (pairs > budget)
    throw BudgetError("qb_constant: " + std::to_string((double)pairs) +
                      " word pairs exceed the enumeration budget");
  std::vector<std::vector<WordMass>> words(max_level);
  for (int a = 1; a < max_level; ++a) words[a] = positive_words(model, a);
  double log_c = 0.0;
  for (int s = 2; s <= max_level; ++s) {
    for (int a = 1; a < s; ++a)
      for (const auto& wa : words[a])
        for (const auto& wb : words[s - a]) log_c = std::max(log_c, pair_log_ratio(model, wa, wb));
    r.by_level[s] = std::exp(log_c);
  }
  StreamRng rng(seed, 0);
  std::vector<double> level_max(r.random_level + 1, 0.0);
  for (int i = 0; i < random_pairs && r.random_level > max_level; ++i) {
    const int s = max_level + 1 + static_cast<int>(rng.next_u64() % (r.random_level - max_level));
    const int a = 1 + static_cast<int>(rng.next_u64() % (s - 1));
    const Word wa = sample_path(model, a, seed, 2 * i + 1);
    const Word wb = sample_path(model, s - a, seed, 2 * i + 2);
    const WordMass ma{wa, log_cylinder_mass(model, wa)}, mb{wb, log_cylinder_mass(model, wb)};
    level_max[s] = std::max(level_max[s], pair_log_ratio(model, ma, mb));
  }
  for (int s = max_level + 1; s <= r.random_level; ++s) {
    log_c = std::max(log_c, level_max[s]);
    r.by_level[s] = std::exp(log_c);
  }
  r.C_hat = std::exp(log_c);
  return r;
}

BoundReport partition_bound_check(const MeasureModel& model, const std::vector<double>& q_list,
                                  const std::vector<int>& n_list, double C, double tau_shift,
                                  std::uint64_t budget) {
  if (!model.is_ell_adic()) throw ValidationError("partition_bound_check: needs an ell-adic model");
  if (!(C >= 1)) throw ValidationError("partition_bound_check: C must be >= 1");
  BoundReport rep;
  rep.C = C;
  rep.tau_shift = tau_shift;
  rep.worst_slack = INFINITY;
  const double ln_ell = *model.ln_ell();
  const int k = model.symbol_count();
  for (double q : q_list) {
    const double t = tau(model, q) + tau_shift;
    for (int n : n_list) {
      BoundRow row;
      row.q = q;
      row.n = n;
      double ln_z;
      if (n * std::log((double)k) <= std::log((double)budget) + 1e-9) {
        ln_z = log_partition_sum_enumerated(model, q, n, budget);
        row.method = "enumeration";
      } else if (model.family() == Family::markov) {
        ln_z = log_partition_sum_transfer(std::get<MarkovShift>(model.data()), q, n);
        row.method = "transfer";
      } else {
        LogSumAccumulator<long double> acc;
        for (double lw : model.log_weights())
          if (lw != kNegInf) acc.add(q * (long double)lw);
        ln_z = static_cast<double>(n * acc.value());
        row.method = "factorized";
      }
      row.log_z = ln_z / ln_ell;
      row.n_tau = n * t;
      row.deviation = row.log_z - row.n_tau;
      row.bound = std::abs(q) * std::log(C) / ln_ell;
      row.slack = row.bound - std::abs(row.deviation);
      row.holds = row.slack >= -1e-10 * (1 + std::abs(row.n_tau));
      rep.all_hold = rep.all_hold && row.holds;
      rep.worst_slack = std::min(rep.worst_slack, row.slack);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

std::string_view to_string(DichotomyCase c) {
  switch (c) {
    case DichotomyCase::equivalent_to_Hdelta: return "equivalent_to_Hdelta";
    case DichotomyCase::singular_Hd_ac_Pd: return "singular_Hd_ac_Pd";
    case DichotomyCase::inconclusive: return "inconclusive";
  }
  return "?";
}

DichotomyResult dichotomy_classify(const MeasureModel& model) {
  DichotomyResult r;
  r.d = dimension_closed(model);
  r.delta = support_dimension(model);
  r.tol = model.family() == Family::markov ? 1e-5 : 1e-9;
  if (model.family() == Family::markov) {
    const double dn = dimension(model).d_numeric;  // throws on cross-check failure
    (void)dn;
  }
  if (std::abs(r.d - r.delta) <= r.tol) {
    r.verdict = DichotomyCase::equivalent_to_Hdelta;
    r.statement = "m strongly equivalent to H^delta on supp(m)";
    // finite-level comparison with the reference measure
    const int k = model.symbol_count();
    r.ratio_levels = std::max(1, std::min(8, static_cast<int>(std::log(double(1 << 20)) / std::log((double)k))));
    double lo = INFINITY, hi = -INFINITY;
    if (model.is_ell_adic()) {
      const auto m0 = homogeneous_measure(model);
      for (int n = 1; n <= r.ratio_levels; ++n)
        for (const auto& w : positive_words(model, n)) {
          const double v = w.log_mass - log_cylinder_mass(m0, w.word);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
    } else {
      for (int n = 1; n <= r.ratio_levels; ++n)
        for (const auto& w : positive_words(model, n)) {
          const double v = w.log_mass - r.delta * log_cylinder_diameter(model, w.word);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
    }
    r.log_ratio_range = std::make_pair(lo, hi);
    return r;
  }
  const auto profile = chi_profile(model, 1.0, 12);
  r.chi_plus_one = profile.eval(ChiSide::positive, 1.0);
  r.chi_minus_one = profile.eval(ChiSide::negative, 1.0);
  r.not_flat_positive = not_flat_check(profile, 1.0, 12, ChiSide::positive);
  r.not_flat_negative = not_flat_check(profile, 1.0, 12, ChiSide::negative);
  if (r.d > r.delta + r.tol) {
    std::ostringstream os;
    os.precision(17);
    os << "d = " << r.d << " exceeds delta = " << r.delta;
    r.reason = os.str();
    return r;
  }
  if (!r.not_flat_positive->holds || !r.not_flat_negative->holds) {
    r.reason = std::string("chi flat or not strictly positive on the dyadic grid (") +
               (r.not_flat_positive->holds ? "" : "q > 0 ") +
               (r.not_flat_negative->holds ? "" : "q < 0 ") + "side)";
    return r;
  }
  r.verdict = DichotomyCase::singular_Hd_ac_Pd;
  r.statement = "m singular to H^d and absolutely continuous w.r.t. P^d";
  r.witnesses = {"theta_a(+): t^d ell^{-a theta(log_ell 1/t)}, 0<a<1 (m << P^d)",
                 "theta_a(-): t^d ell^{+a theta(log_ell 1/t)}, 0<a<1 (m singular to H^d)"};
  return r;
}

}  // namespace mflab
