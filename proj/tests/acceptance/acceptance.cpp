// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mflab/commands.hpp"
#include "mflab/errors.hpp"
#include "mflab/gauges.hpp"
#include "mflab/lil.hpp"
#include "mflab/output.hpp"
#include "mflab/qb.hpp"
#include "mflab/report.hpp"
#include "mflab/spectrum.hpp"

#ifndef MFLAB_SOURCE_DIR
#define MFLAB_SOURCE_DIR "."
#endif

using namespace mflab;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kZoo = {"bernoulli_half", "bernoulli_quarter", "cantor_natural",
                                       "cantor_biased", "markov_two_state"};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [fail: " + what + "]";
    }
  }
};

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

LogBase natural_base(const MeasureModel& m) { return m.is_ell_adic() ? LogBase::ell : LogBase::natural; }

// 1. tau(1) = 0 and tau(0) = support dimension for every method.
void spectrum_exactness(Outcome& o, const std::vector<OracleRecord>&) {
  double worst1 = 0, worst0 = 0;
  for (const auto& name : kZoo) {
    const auto m = zoo_model(name);
    const double delta = name.rfind("cantor", 0) == 0 ? std::log(2.0) / std::log(3.0) : 1.0;
    std::vector<std::pair<std::string, std::function<double(double)>>> methods = {
        {"exact", [&](double q) { return tau(m, q); }},
        {"empirical_n8", [&](double q) { return tau_empirical(m, q, 8, natural_base(m)); }},
        {"enumerated", [&](double q) {
           const int n = 10;
           const double scale = m.is_ell_adic() ? n * std::log(m.alphabet().ell()) : n * std::log(3.0);
           return log_partition_sum_enumerated(m, q, n) / scale;
         }}};
    if (m.family() == Family::markov)
      methods.push_back({"transfer", [&](double q) {
                           const auto& mc = std::get<MarkovShift>(m.data());
                           return log_partition_sum_transfer(mc, q, 200) / (200 * std::log(2.0));
                         }});
    for (const auto& [label, f] : methods) {
      const double t1 = f(1.0), t0 = f(0.0);
      worst1 = std::max(worst1, std::abs(t1));
      o.require(close(t1, 0.0, 1e-10), name + " " + label + " tau(1)");
      worst0 = std::max(worst0, std::abs(t0 - delta));
      o.require(close(t0, delta, 1e-9), name + " " + label + " tau(0)");
    }
  }
  o.detail << "max|tau(1)| = " << worst1 << ", max|tau(0) - delta| = " << worst0;
}

// 2. Dimension cross-check and the Bernoulli quarter constants.
void closed_vs_numeric(Outcome& o, const std::vector<OracleRecord>& oracles) {
  double worst = 0;
  for (const auto& name : kZoo) {
    try {
      const auto r = dimension(zoo_model(name));
      worst = std::max(worst, std::abs(r.d - r.d_numeric));
      o.require(close(r.d, r.d_numeric, 1e-8), name + " cross-check");
    } catch (const NumericalError& e) {
      o.require(false, name + ": " + e.what());
    }
  }
  const auto b = zoo_model("bernoulli_quarter");
  const double d = dimension(b).d, s2 = sigma2(b, LogBase::two).value;
  o.require(close(d, 0.8112781, 1e-6), "d");
  o.require(close(s2, 0.4710196, 1e-6), "sigma2 base 2");
  o.require(close(d, find_oracle(oracles, "bernoulli_quarter.d").value, 1e-12), "d oracle");
  o.require(close(s2, find_oracle(oracles, "bernoulli_quarter.sigma2_base2").value, 1e-12), "sigma2 oracle");
  char buf[160];
  std::snprintf(buf, sizeof buf, "max|d - d_num| = %.2e, d = %.10f, sigma2_2 = %.10f", worst, d, s2);
  o.detail << buf;
}

// 3. Enumerated moments equal n d and n sigma^2.
void exact_moments(Outcome& o, const std::vector<OracleRecord>& oracles) {
  double worst = 0;
  for (const std::string name : {"bernoulli_quarter", "cantor_biased"}) {
    const auto m = zoo_model(name);
    const double d = dimension(m).d, s2 = sigma2(m, LogBase::ell).value;
    for (int n = 1; n <= 16; ++n) {
      const auto mo = moments(exact_distribution(m, n, LogBase::ell));
      const double mean = static_cast<double>(mo.mean), var = static_cast<double>(mo.variance);
      worst = std::max({worst, std::abs(mean - n * d), std::abs(var - n * s2)});
      o.require(close_rel(mean, n * d, 1e-12), name + " mean n=" + std::to_string(n));
      o.require(close_rel(var, n * s2, 1e-12), name + " var n=" + std::to_string(n));
      if (n == 5 || n == 16) {
        o.require(close_rel(mean, find_oracle(oracles, name + ".mean_S" + std::to_string(n)).value, 1e-12),
                  name + " mean oracle");
        o.require(close_rel(var, find_oracle(oracles, name + ".var_S" + std::to_string(n)).value, 1e-12),
                  name + " var oracle");
      }
    }
  }
  o.detail << "max moment deviation = " << worst;
}

// 4. Partition-sum bound for the Markov chain, and rejection of tau + 0.01.
void partition_bound(Outcome& o, const std::vector<OracleRecord>& oracles) {
  const auto mk = zoo_model("markov_two_state");
  const double C = qb_constant_closed(mk);
  o.require(close(C, 3.0, 1e-12), "C = 3");
  o.require(close(C, find_oracle(oracles, "markov_two_state.C").value, 1e-12), "C oracle");
  const auto ok = partition_bound_check(mk, {-1.0, 0.5, 2.0}, {6, 10, 14}, C);
  o.require(ok.all_hold, "bound with exact tau");
  for (const auto& row : ok.rows)
    if (row.n == 14) {
      char key[64];
      std::snprintf(key, sizeof key, "markov_two_state.dev_%s_n14",
                    row.q == -1.0 ? "m1" : row.q == 0.5 ? "0.5" : "2");
      o.require(close(row.deviation, find_oracle(oracles, key).value, 1e-9),
                std::string("deviation oracle ") + key);
    }
  const auto shifted = partition_bound_check(mk, {-1.0, 0.5, 2.0}, {14}, C, 0.01);
  o.require(!shifted.all_hold, "tau+0.01 rejected at n=14");
  o.detail << "worst slack = " << ok.worst_slack << ", shifted worst slack at n=14 = " << shifted.worst_slack;
}

// 5. KS distance of the normalized S_n at n = 1e4.
void clt_diagnostic(Outcome& o, const std::vector<OracleRecord>& oracles) {
  const auto b = zoo_model("bernoulli_quarter");
  const int n = 10000;
  const auto cs = sample_checkpoints(b, 100000, {n}, 20240501, worker_threads(), LogBase::two);
  const double d = dimension(b).d, sigma = std::sqrt(sigma2(b, LogBase::two).value);
  std::vector<double> z(cs.s.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = (cs.s[i] - n * d) / (sigma * std::sqrt(double(n)));
  const double ks = ks_normal(z);
  const double floor = find_oracle(oracles, "ks.noise_floor_1e5").value;
  o.require(ks < 0.02, "KS < 0.02");
  o.detail << "KS = " << ks << " (Gaussian noise floor " << floor << ")";
}

// 6. Window sups of the ratio over [2^4, 2^20].
void lil_trend(Outcome& o, const std::vector<OracleRecord>&) {
  const auto b = zoo_model("bernoulli_quarter");
  const auto conv = lil_convention("quasi_bernoulli", b);
  EnsembleConfig cfg;
  cfg.paths = 200;
  cfg.checkpoints = {1 << 12, 1 << 16, 1 << 20};
  cfg.horizons = {1 << 12, 1 << 16, 1 << 20};
  cfg.window_lo = 16;
  cfg.seed = 20240502;
  cfg.threads = worker_threads();
  const auto r = run_ensemble(b, cfg, conv);
  std::vector<double> medians;
  double ens_max = -INFINITY;
  for (auto sups : r.window_sup_ratio) {
    for (double s : sups) ens_max = std::max(ens_max, s);
    std::sort(sups.begin(), sups.end());
    medians.push_back(0.5 * (sups[99] + sups[100]));
  }
  o.require(std::isfinite(ens_max) && ens_max < r.sigma + 1.5, "ensemble max < sigma + 1.5");
  o.require(medians[0] <= medians[1] && medians[1] <= medians[2], "median non-decreasing");

  const auto half = zoo_model("bernoulli_half");
  auto hcfg = cfg;
  hcfg.paths = 20;
  const auto h = run_ensemble(half, hcfg, lil_convention("quasi_bernoulli", half));
  bool zero = true;
  for (const auto& c : h.checkpoints) zero = zero && c.min_ratio == 0.0 && c.max_ratio == 0.0;
  for (const auto& w : h.window_sup_ratio)
    for (double s : w) zero = zero && s == 0.0;
  for (const auto& w : h.window_inf_ratio)
    for (double s : w) zero = zero && s == 0.0;
  o.require(zero, "p=1/2 ratios all 0");
  char buf[200];
  std::snprintf(buf, sizeof buf, "max = %.4f (sigma = %.4f), medians = %.4f, %.4f, %.4f", ens_max, r.sigma,
                medians[0], medians[1], medians[2]);
  o.detail << buf;
}

// 7. Hausdorff and packing gauge fractions.
void gauge_dichotomy(Outcome& o, const std::vector<OracleRecord>& oracles) {
  const auto b = zoo_model("bernoulli_quarter");
  const std::vector<int> levels{1 << 10, 1 << 14, 1 << 18};
  const auto hs = make_gauge(b, GaugeFamily::lil_hausdorff, ThetaConvention::base2, 0.3);
  const auto pk = make_gauge(b, GaugeFamily::lil_packing, ThetaConvention::base2, 0.3);
  const auto rh = mass_gauge_fraction(b, hs, levels, 10000, 20240503, worker_threads());
  const auto rp = mass_gauge_fraction(b, pk, levels, 10000, 20240503, worker_threads());
  o.require(rh.fraction[0] <= rh.fraction[1] && rh.fraction[1] <= rh.fraction[2], "hausdorff non-decreasing");
  o.require(rh.fraction[2] >= 0.95, "hausdorff >= 0.95 at 2^18");
  o.require(rp.fraction[2] <= 0.05, "packing <= 0.05 at 2^18");
  char buf[260];
  std::snprintf(buf, sizeof buf, "hausdorff = %.4f, %.4f, %.4f (gaussian %.4f, %.4f, %.4f); packing at 2^18 = %.4f",
                rh.fraction[0], rh.fraction[1], rh.fraction[2],
                find_oracle(oracles, "gauge.hausdorff_fraction_2^10").value,
                find_oracle(oracles, "gauge.hausdorff_fraction_2^14").value,
                find_oracle(oracles, "gauge.hausdorff_fraction_2^18").value, rp.fraction[2]);
  o.detail << buf;
}

// 8. Exact running-max tails against the maximal inequality.
void running_max(Outcome& o, const std::vector<OracleRecord>&) {
  const auto b = zoo_model("bernoulli_quarter");
  const double sigma = matched_sigma(b, lil_convention("quasi_bernoulli", b)), eps = 0.1;
  const int n0 = 16, n1 = 32;
  const std::vector<double> as{2, 4, 6};
  std::vector<double> tail, bound;
  auto exponent = [&](double a) { return -a * a / (2 * n1 * (sigma + eps) * (sigma + eps)); };
  for (double a : as) tail.push_back(running_max_tail(b, n0, n1, a, LogBase::two));
  const double C = tail[0] / std::exp2(exponent(as[0]));
  for (double a : as) bound.push_back(C * std::exp2(exponent(a)));
  // log-convexity in a^2 at the middle point
  const double x0 = 4, x1 = 16, x2 = 36, w = (x2 - x1) / (x2 - x0);
  const double interp = w * std::log(tail[0]) + (1 - w) * std::log(tail[2]);
  o.require(std::log(tail[1]) <= interp + 1e-12, "log-convex in a^2");
  for (std::size_t i = 1; i < as.size(); ++i)
    o.require(tail[i] <= bound[i], "below bound at a=" + std::to_string(int(as[i])));
  char buf[220];
  std::snprintf(buf, sizeof buf, "tails = %.6e, %.6e, %.6e; bounds = %.6e, %.6e, %.6e (C = %.4f)", tail[0],
                tail[1], tail[2], bound[0], bound[1], bound[2], C);
  o.detail << buf;
}

// 9. Dichotomy verdicts.
void dichotomy(Outcome& o, const std::vector<OracleRecord>&) {
  const std::vector<std::pair<std::string, DichotomyCase>> expected = {
      {"cantor_natural", DichotomyCase::equivalent_to_Hdelta},
      {"bernoulli_quarter", DichotomyCase::singular_Hd_ac_Pd},
      {"cantor_biased", DichotomyCase::singular_Hd_ac_Pd},
      {"markov_two_state", DichotomyCase::singular_Hd_ac_Pd},
      {"bernoulli_half", DichotomyCase::equivalent_to_Hdelta}};
  for (const auto& [name, want] : expected) {
    const auto r = dichotomy_classify(zoo_model(name));
    o.require(r.verdict == want, name + " verdict " + std::string(to_string(r.verdict)));
    if (want == DichotomyCase::equivalent_to_Hdelta)
      o.require(r.log_ratio_range.has_value(), name + " ratio evidence");
    else
      o.require(r.not_flat_positive && r.not_flat_negative && r.not_flat_positive->holds &&
                    r.not_flat_negative->holds && !r.witnesses.empty(),
                name + " not-flat evidence");
    o.detail << name << "=" << to_string(r.verdict) << " ";
  }
}

// 10. CLI runs replay bit-identically under other thread counts.
void reproducibility(Outcome& o, const std::vector<OracleRecord>&) {
  const auto root = fs::temp_directory_path() / "mflab_acceptance_replay";
  fs::remove_all(root);
  const std::string zoo = std::string(MFLAB_SOURCE_DIR) + "/zoo/";
  const std::vector<std::vector<std::string>> runs = {
      {"spectrum", "--model", zoo + "cantor_biased.model"},
      {"lil-sim", "--model", zoo + "markov_two_state.model", "--paths", "400", "--checkpoints",
       "2^4,2^8,2^12", "--horizons", "2^8,2^12", "--seed", "11"},
      {"gauge-test", "--model", zoo + "bernoulli_quarter.model", "--family", "lil_hausdorff", "--eps", "0.3",
       "--checkpoints", "2^8,2^12", "--paths", "400", "--seed", "12"},
      {"qb-check", "--model", zoo + "markov_two_state.model", "--seed", "13"}};
  int replays = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto dir = root / ("run" + std::to_string(i));
    auto args = runs[i];
    args.insert(args.end(), {"--threads", "1", "--out", dir.string()});
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    o.require(code == 0, runs[i][0] + " exit " + std::to_string(code) + " " + err.str());
    if (code) continue;
    for (const char* threads : {"1", "3"}) {
      std::ostringstream rout, rerr;
      const auto rdir = root / ("replay" + std::to_string(i) + "_" + threads);
      const int rc = run_cli({"replay", (dir / kManifestFile).string(), "--out", rdir.string(), "--threads",
                              threads},
                             rout, rerr);
      o.require(rc == 0, runs[i][0] + " replay threads=" + threads + " " + rerr.str());
      const auto orig = manifest_from_json(read_file((dir / kManifestFile).string()));
      for (const auto& [file, digest] : orig.outputs)
        o.require(sha256_hex(read_file((rdir / file).string())) == digest, runs[i][0] + " " + file);
      ++replays;
    }
  }
  fs::remove_all(root);
  o.detail << replays << " replays compared";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cache_dir = argc > 1 ? argv[1] : ".";
  const auto oracles = build_oracles();
  write_output(cache_dir, kOracleCacheFile, oracles_to_json(oracles));
  int oracle_fail = 0;
  for (const auto& c : cross_check(oracles)) oracle_fail += !c.pass;
  std::cout << "oracles: " << oracles.size() << " records, " << oracle_fail << " cross-check failures\n";

  struct Criterion {
    int id;
    const char* title;
    double limit_s;
    void (*run)(Outcome&, const std::vector<OracleRecord>&);
  };
  const Criterion criteria[] = {
      {1, "spectrum exactness", 1, spectrum_exactness},
      {2, "closed form vs numeric", 1, closed_vs_numeric},
      {3, "exact moments", 5, exact_moments},
      {4, "partition-sum bound", 30, partition_bound},
      {5, "CLT diagnostic", 60, clt_diagnostic},
      {6, "LIL trend", 120, lil_trend},
      {7, "gauge dichotomy", 120, gauge_dichotomy},
      {8, "running-max tail", 10, running_max},
      {9, "dichotomy classifier", 10, dichotomy},
      {10, "reproducibility", 60, reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o, oracles);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < c.limit_s, "runtime");
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s; %.2f s (limit %.0f s)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.str().c_str(), secs, c.limit_s, o.failures.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed;
}
