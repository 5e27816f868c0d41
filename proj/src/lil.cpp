#include "mflab/lil.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <thread>

#include "mflab/errors.hpp"
#include "mflab/spectrum.hpp"

namespace mflab {
namespace {

double base_log(const MeasureModel& model, LogBase base) {
  return ln_of_base(base, model.ln_ell().value_or(1.0));
}

void require_base(const MeasureModel& model, LogBase base) {
  if (base == LogBase::ell && !model.ln_ell())
    throw ValidationError("base 'ell' is undefined for an IFS with unequal ratios");
}

std::uint64_t env_u64(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const double x = std::strtod(v, &end);
  if (end == v || *end != '\0' || !(x >= 1))
    throw ValidationError(std::string(name) + " must be a positive number");
  return static_cast<std::uint64_t>(x);
}

// Per-symbol S and T increments in the convention's base.
struct Increments {
  std::vector<double> s;  // -log_b w_s (product) / unused (Markov)
  std::vector<double> t;  // -log_b r_s
  double t0 = 0.0;        // -log_b diam_K
  double ln_b = 1.0;
};

Increments increments(const MeasureModel& model, LogBase base) {
  Increments inc;
  inc.ln_b = base_log(model, base);
  for (double lw : model.log_weights()) inc.s.push_back(lw == kNegInf ? INFINITY : -lw / inc.ln_b);
  for (double lr : model.log_ratios()) inc.t.push_back(-lr / inc.ln_b);
  inc.t0 = -model.log_diam_k() / inc.ln_b;
  return inc;
}

template <typename F>
void parallel_for(std::uint64_t count, unsigned threads, F&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(count, 256))));
  if (threads == 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t start = next.fetch_add(16);
        if (start >= count) return;
        for (std::uint64_t i = start; i < std::min(count, start + 16); ++i) body(i);
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace

LilConvention lil_convention(std::string_view name, const MeasureModel& model) {
  LilConvention c;
  c.name = std::string(name);
  if (name == "classical") {
    if (!model.is_ell_adic())
      throw ValidationError("convention 'classical' needs an ell-adic model (S in base 2)");
    c.s_base = LogBase::two;
    c.loglog_base = LogBase::natural;
  } else if (name == "quasi_bernoulli") {
    if (!model.ln_ell())
      throw ValidationError("convention 'quasi_bernoulli' needs a base ell (equal ratios)");
    c.s_base = LogBase::ell;
    c.loglog_base = LogBase::ell;
    c.ln_c = *model.ln_ell();
  } else if (name == "self_similar") {
    c.s_base = LogBase::natural;
    c.loglog_base = LogBase::natural;
  } else {
    throw ValidationError("unknown convention '" + c.name +
                          "' (expected classical|quasi_bernoulli|self_similar)");
  }
  return c;
}

LilConvention default_convention(const MeasureModel& model) {
  switch (model.family()) {
    case Family::bernoulli: return lil_convention("classical", model);
    case Family::self_similar: return lil_convention("self_similar", model);
    default: return lil_convention("quasi_bernoulli", model);
  }
}

double clt_sigma(const MeasureModel& model, const LilConvention& conv) {
  const auto s2 = sigma2(model, conv.s_base);
  return std::sqrt(std::max(0.0, s2.value));
}

double matched_sigma(const MeasureModel& model, const LilConvention& conv) {
  const auto s2 = sigma2(model, conv.s_base);
  return std::sqrt(std::max(0.0, s2.value) * conv.ln_c);
}

std::vector<double> s_process(const MeasureModel& model, const Word& w, LogBase base) {
  require_base(model, base);
  if (!(w.alphabet() == model.alphabet()))
    throw ValidationError("s_process: word alphabet does not match the model");
  const double ln_b = base_log(model, base);
  std::vector<double> out;
  out.reserve(w.level());
  CompensatedSum acc;
  int prev = -1;
  for (int j = 0; j < w.level(); ++j) {
    const double step = model.log_step(prev, w[j]);
    if (step == kNegInf)
      throw ValidationError("s_process: prefix of length " + std::to_string(j + 1) +
                            " has zero mass");
    acc.add(-step / ln_b);
    out.push_back(acc.value());
    prev = static_cast<int>(w[j]);
  }
  return out;
}

double lil_ratio(double s, double time, double d, const LilConvention& conv) {
  if (!(time >= conv.n_min()))
    throw ValidationError("lil_ratio: time " + std::to_string(time) + " below n_min = " +
                          std::to_string(conv.n_min()));
  const double ll = std::log(std::log(time) / conv.ln_c) / conv.ln_c;
  if (!(ll > 0))
    throw ValidationError("lil_ratio: iterated log not positive at time " + std::to_string(time));
  return (s - d * time) / std::sqrt(2.0 * time * ll);
}

std::vector<int> power_of_two_levels(int lo, int hi) {
  std::vector<int> out;
  for (int e = lo; e <= hi; ++e) out.push_back(1 << e);
  return out;
}

std::uint64_t default_max_draws() { return env_u64("MFLAB_MAX_DRAWS", 10'000'000'000ULL); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_normal(std::vector<double>& sample) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}


EnsembleSummary run_ensemble(const MeasureModel& model, const EnsembleConfig& config,
                             const LilConvention& conv) {
  require_base(model, conv.s_base);
  if (config.paths < 1) throw ValidationError("run_ensemble: need at least one path");
  auto checkpoints = config.checkpoints;
  auto horizons = config.horizons;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < conv.n_min())
      throw ValidationError("checkpoint " + std::to_string(checkpoints[i]) + " below n_min = " +
                            std::to_string(conv.n_min()));
    if (i && checkpoints[i] <= checkpoints[i - 1])
      throw ValidationError("checkpoints must be strictly increasing");
  }
  for (std::size_t i = 0; i < horizons.size(); ++i)
    if (horizons[i] < config.window_lo || (i && horizons[i] <= horizons[i - 1]))
      throw ValidationError("horizons must be increasing and >= window_lo");
  if (!horizons.empty() && config.window_lo < 1) throw ValidationError("window_lo must be >= 1");
  int n_max = 0;
  if (!checkpoints.empty()) n_max = checkpoints.back();
  if (!horizons.empty()) n_max = std::max(n_max, horizons.back());
  if (n_max == 0) throw ValidationError("run_ensemble: no checkpoints or horizons");
  const std::uint64_t budget = config.max_draws ? config.max_draws : default_max_draws();
  if (static_cast<long double>(config.paths) * n_max > budget)
    throw BudgetError("run_ensemble: N * n_max = " + std::to_string(config.paths) + " * " +
                      std::to_string(n_max) + " exceeds draw budget " + std::to_string(budget) +
                      " (MFLAB_MAX_DRAWS)");

  EnsembleSummary out;
  out.model_name = model.name();
  out.convention = conv;
  out.d = dimension_closed(model);
  out.sigma = matched_sigma(model, conv);
  out.clt_sigma = clt_sigma(model, conv);
  out.paths = config.paths;
  out.seed = config.seed;
  out.horizons = horizons;

  const Increments inc = increments(model, conv.s_base);
  const int k = model.symbol_count();
  const bool product = model.is_product();
  const std::size_t m = checkpoints.size(), nh = horizons.size();
  const std::uint64_t N = config.paths;
  std::vector<double> s_at(N * m), t_at(N * m);
  out.window_sup_ratio.assign(nh, std::vector<double>(N));
  out.window_inf_ratio.assign(nh, std::vector<double>(N));
  out.window_sup_sqrt.assign(nh, std::vector<double>(N));
  const double d = out.d;

  parallel_for(N, config.threads, [&](std::uint64_t path) {
    PathSampler sampler(model, config.seed, path);
    std::vector<std::int64_t> counts(k, 0);
    CompensatedSum s_acc;  // Markov
    double s = 0, t = inc.t0;
    std::size_t next_cp = 0, next_h = 0;
    double sup_r = -INFINITY, inf_r = INFINITY, sup_q = -INFINITY;
    int prev = -1;
    for (int n = 1; n <= n_max; ++n) {
      const std::uint32_t sym = sampler.next();
      ++counts[sym];
      const bool at_cp = next_cp < m && checkpoints[next_cp] == n;
      const bool in_window = next_h < nh && n >= config.window_lo;
      if (!product) s_acc.add(-model.log_step(prev, sym) / inc.ln_b);
      prev = static_cast<int>(sym);
      if (!at_cp && !in_window) continue;
      if (product) {
        s = 0;
        t = inc.t0;
        for (int j = 0; j < k; ++j)
          if (counts[j]) {
            s += counts[j] * inc.s[j];
            t += counts[j] * inc.t[j];
          }
      } else {
        s = s_acc.value();
        t = inc.t0 + n * inc.t[0];
      }
      if (at_cp) {
        s_at[path * m + next_cp] = s;
        t_at[path * m + next_cp] = t;
        ++next_cp;
      }
      if (in_window) {
        if (t >= conv.n_min()) {
          const double r = lil_ratio(s, t, d, conv);
          sup_r = std::max(sup_r, r);
          inf_r = std::min(inf_r, r);
          sup_q = std::max(sup_q, (s - d * t) / std::sqrt(t));
        }
        while (next_h < nh && horizons[next_h] == n) {
          out.window_sup_ratio[next_h][path] = sup_r;
          out.window_inf_ratio[next_h][path] = inf_r;
          out.window_sup_sqrt[next_h][path] = sup_q;
          ++next_h;
        }
      }
    }
  });

  for (std::size_t j = 0; j < m; ++j) {
    CheckpointStats cs;
    cs.n = checkpoints[j];
    CompensatedSum sum_r, sum_s, sum_t;
    cs.min_ratio = INFINITY;
    cs.max_ratio = -INFINITY;
    std::vector<double> ratios(N), z(N);
    for (std::uint64_t i = 0; i < N; ++i) {
      const double s = s_at[i * m + j], t = t_at[i * m + j];
      const double r = t >= conv.n_min() ? lil_ratio(s, t, d, conv) : NAN;
      ratios[i] = r;
      sum_r.add(r);
      sum_s.add(s);
      sum_t.add(t);
      cs.min_ratio = std::min(cs.min_ratio, r);
      cs.max_ratio = std::max(cs.max_ratio, r);
      z[i] = (s - d * t) / (out.clt_sigma * std::sqrt(t));
    }
    cs.mean_ratio = sum_r.value() / N;
    cs.mean_s = sum_s.value() / N;
    cs.mean_time = sum_t.value() / N;
    CompensatedSum sq;
    for (double r : ratios) sq.add((r - cs.mean_ratio) * (r - cs.mean_ratio));
    cs.var_ratio = N > 1 ? sq.value() / (N - 1) : 0.0;
    cs.ks_distance = out.clt_sigma > 0 ? ks_normal(z) : NAN;
    out.checkpoints.push_back(cs);
  }
  return out;
}

CheckpointSamples sample_checkpoints(const MeasureModel& model, std::uint64_t paths,
                                     const std::vector<int>& levels, std::uint64_t seed,
                                     unsigned threads, LogBase base, std::uint64_t max_draws) {
  require_base(model, base);
  if (paths < 1) throw ValidationError("need at least one path");
  if (levels.empty()) throw ValidationError("no checkpoint levels");
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] < 1 || (i && levels[i] <= levels[i - 1]))
      throw ValidationError("checkpoints must be positive and strictly increasing");
  const std::uint64_t budget = max_draws ? max_draws : default_max_draws();
  if (static_cast<long double>(paths) * levels.back() > budget)
    throw BudgetError("N * n_max = " + std::to_string(paths) + " * " +
                      std::to_string(levels.back()) + " exceeds draw budget " +
                      std::to_string(budget) + " (MFLAB_MAX_DRAWS)");
  CheckpointSamples out;
  out.levels = levels;
  out.paths = paths;
  const std::size_t m = levels.size();
  out.s.resize(paths * m);
  out.t.resize(paths * m);
  const Increments inc = increments(model, base);
  const int k = model.symbol_count();
  const bool product = model.is_product();
  parallel_for(paths, threads, [&](std::uint64_t path) {
    PathSampler sampler(model, seed, path);
    std::vector<std::int64_t> counts(k, 0);
    CompensatedSum s_acc;
    int prev = -1;
    std::size_t next_cp = 0;
    for (int n = 1; n <= levels.back(); ++n) {
      const std::uint32_t sym = sampler.next();
      ++counts[sym];
      if (!product) s_acc.add(-model.log_step(prev, sym) / inc.ln_b);
      prev = static_cast<int>(sym);
      if (levels[next_cp] != n) continue;
      double s = 0, t = inc.t0;
      if (product) {
        for (int j = 0; j < k; ++j)
          if (counts[j]) {
            s += counts[j] * inc.s[j];
            t += counts[j] * inc.t[j];
          }
      } else {
        s = s_acc.value();
        t += n * inc.t[0];
      }
      out.s[path * m + next_cp] = s;
      out.t[path * m + next_cp] = t;
      ++next_cp;
    }
  });
  return out;
}

namespace {

struct CountState {
  std::vector<int> counts;
  long double log_prob;
};

// All count vectors over the active symbols summing to n.
template <typename F>
void for_each_composition(int n, int parts, F&& f) {
  std::vector<int> c(parts, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts - 1) {
      c[i] = left;
      f(c);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      c[i] = x;
      rec(i + 1, left - x);
    }
  };
  rec(0, n);
}

long double binom_count(int n, int parts) {
  return std::exp(std::lgamma((long double)n + parts) - std::lgamma((long double)n + 1) -
                  std::lgamma((long double)parts));
}

std::vector<Atom> merge_atoms(std::vector<std::pair<long double, long double>> raw) {
  std::sort(raw.begin(), raw.end());
  std::vector<Atom> out;
  for (auto [v, p] : raw) {
    const double vd = static_cast<double>(v);
    if (!out.empty() && out.back().value == vd)
      out.back().prob += static_cast<double>(p);
    else
      out.push_back({vd, static_cast<double>(p)});
  }
  return out;
}

}  // namespace

std::vector<Atom> exact_distribution(const MeasureModel& model, int n, LogBase base,
                                     std::uint64_t budget) {
  require_base(model, base);
  if (n < 1) throw ValidationError("exact_distribution: n must be >= 1");
  const long double ln_b = base_log(model, base);
  std::vector<std::pair<long double, long double>> raw;
  if (model.is_product()) {
    std::vector<int> active;
    for (int s = 0; s < model.symbol_count(); ++s)
      if (model.log_weights()[s] != kNegInf) active.push_back(s);
    const int g = static_cast<int>(active.size());
    if (binom_count(n, g) > budget)
      throw BudgetError("exact_distribution: too many count classes for n = " + std::to_string(n));
    const long double lgn = std::lgamma((long double)n + 1);
    for_each_composition(n, g, [&](const std::vector<int>& c) {
      long double lp = lgn, v = 0;
      for (int i = 0; i < g; ++i) {
        const long double lw = model.log_weights()[active[i]];
        lp += c[i] * lw - std::lgamma((long double)c[i] + 1);
        v -= c[i] * lw;
      }
      raw.emplace_back(v / ln_b, std::exp(lp));
    });
    return merge_atoms(std::move(raw));
  }
  // Markov: key = (first, last, transition counts)
  const auto& chain = std::get<MarkovShift>(model.data());
  const int k = chain.size();
  std::map<std::vector<int>, long double> cur, nxt;
  for (int s = 0; s < k; ++s)
    if (chain.pi[s] > 0) {
      std::vector<int> key(2 + k * k, 0);
      key[0] = key[1] = s;
      cur[key] = chain.pi[s];
    }
  for (int level = 1; level < n; ++level) {
    nxt.clear();
    for (const auto& [key, p] : cur) {
      const int last = key[1];
      for (int j = 0; j < k; ++j) {
        const double pij = chain.at(last, j);
        if (pij <= 0) continue;
        auto nk = key;
        nk[1] = j;
        ++nk[2 + last * k + j];
        nxt[nk] += p * pij;
      }
    }
    if (nxt.size() > budget)
      throw BudgetError("exact_distribution: Markov DP state count exceeds budget at level " +
                        std::to_string(level + 1));
    cur.swap(nxt);
  }
  for (const auto& [key, p] : cur) {
    long double v = -std::log((long double)chain.pi[key[0]]);
    for (int i = 0; i < k * k; ++i)
      if (key[2 + i]) v -= key[2 + i] * std::log((long double)chain.transition[i]);
    raw.emplace_back(v / ln_b, p);
  }
  return merge_atoms(std::move(raw));
}

Moments moments(const std::vector<Atom>& atoms) {
  Moments m;
  for (const auto& a : atoms) {
    m.total += a.prob;
    m.mean += (long double)a.prob * a.value;
  }
  m.mean /= m.total;
  for (const auto& a : atoms) m.variance += a.prob * (a.value - m.mean) * (a.value - m.mean);
  m.variance /= m.total;
  return m;
}

double running_max_tail(const MeasureModel& model, int n0, int n1, double a, LogBase base) {
  require_base(model, base);
  if (!model.is_product())
    throw ValidationError("running_max_tail: needs an exchangeable (product) model");
  if (n0 < 1 || n1 < n0) throw ValidationError("running_max_tail: need 1 <= n0 <= n1");
  const auto cap = env_u64("MFLAB_TAIL_MAX_LEVEL", 64);
  if (static_cast<std::uint64_t>(n1) > cap)
    throw BudgetError("running_max_tail: n1 = " + std::to_string(n1) +
                      " exceeds MFLAB_TAIL_MAX_LEVEL = " + std::to_string(cap));
  const long double ln_b = base_log(model, base);
  const long double d = dimension_closed(model);
  std::vector<int> active;
  for (int s = 0; s < model.symbol_count(); ++s)
    if (model.log_weights()[s] != kNegInf) active.push_back(s);
  const int g = static_cast<int>(active.size());
  if (binom_count(n1, g) > (1 << 24)) throw BudgetError("running_max_tail: too many count classes");
  std::vector<long double> s_inc(g), t_inc(g), lw(g);
  for (int i = 0; i < g; ++i) {
    lw[i] = model.log_weights()[active[i]];
    s_inc[i] = -lw[i] / ln_b;
    t_inc[i] = -(long double)model.log_ratios()[active[i]] / ln_b;
  }
  const long double t0 = -(long double)model.log_diam_k() / ln_b;
  // unabsorbed probability per count vector
  std::map<std::vector<int>, long double> cur{{std::vector<int>(g, 0), 1.0L}}, nxt;
  long double absorbed = 0;
  for (int level = 1; level <= n1; ++level) {
    nxt.clear();
    for (const auto& [c, p] : cur)
      for (int i = 0; i < g; ++i) {
        auto nc = c;
        ++nc[i];
        nxt[nc] += p * std::exp(lw[i]);
      }
    cur.swap(nxt);
    if (level < n0) continue;
    for (auto it = cur.begin(); it != cur.end();) {
      long double s = 0, t = t0;
      for (int i = 0; i < g; ++i) {
        s += it->first[i] * s_inc[i];
        t += it->first[i] * t_inc[i];
      }
      if (s - d * t >= a) {
        absorbed += it->second;
        it = cur.erase(it);
      } else {
        ++it;
      }
    }
  }
  return static_cast<double>(absorbed);
}

}  // namespace mflab
