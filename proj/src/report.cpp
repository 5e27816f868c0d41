#include "mflab/report.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "json.hpp"
#include "mflab/errors.hpp"
#include "mflab/gauges.hpp"
#include "mflab/lil.hpp"
#include "mflab/qb.hpp"
#include "mflab/spectrum.hpp"

namespace mflab {
namespace {

using hp = boost::multiprecision::cpp_bin_float_50;

double to_d(const hp& x) { return x.convert_to<double>(); }

struct Moments50 {
  hp mean = 0, var = 0;
};

// 2^n words, S in base b: mass of each word multiplied out symbol by symbol.
Moments50 enumerate_two_symbol(const hp& p0, const hp& p1, int n, const hp& ln_b) {
  hp mean = 0, second = 0;
  for (std::uint32_t w = 0; w < (1u << n); ++w) {
    hp mass = 1;
    for (int j = 0; j < n; ++j) mass *= ((w >> j) & 1u) ? p1 : p0;
    const hp s = -log(mass) / ln_b;
    mean += mass * s;
    second += mass * s * s;
  }
  return {mean, second - mean * mean};
}

// Markov chain on {0,1}: sum over 2^n words of m(w)^q.
hp markov_z(const hp pi[2], const hp P[2][2], const hp& q, int n) {
  hp z = 0;
  for (std::uint32_t w = 0; w < (1u << n); ++w) {
    int prev = w & 1u;
    hp mass = pi[prev];
    for (int j = 1; j < n; ++j) {
      const int s = (w >> j) & 1u;
      mass *= P[prev][s];
      prev = s;
    }
    z += pow(mass, q);
  }
  return z;
}

// 2x2 Perron root of [P_ij^q] by the quadratic formula, log base 2.
hp markov_tau(const hp P[2][2], const hp& q) {
  const hp a = pow(P[0][0], q), b = pow(P[0][1], q), c = pow(P[1][0], q), d = pow(P[1][1], q);
  const hp rho = (a + d) / 2 + sqrt((a - d) * (a - d) / 4 + b * c);
  return log(rho) / log(hp(2));
}

hp bern_tau(const hp& p, const hp& q) { return log(pow(p, q) + pow(1 - p, q)) / log(hp(2)); }

}  // namespace

std::vector<std::pair<std::string, std::string>> zoo_specs() {
  return {
      {"bernoulli_half", "family: bernoulli\nname: bernoulli_half\np: 1/2\n"},
      {"bernoulli_quarter", "family: bernoulli\nname: bernoulli_quarter\np: 1/4\n"},
      {"cantor_natural",
       "family: self_similar\nname: cantor_natural\nprobs: [1/2, 1/2]\nratios: [1/3, 1/3]\n"},
      {"cantor_biased",
       "family: self_similar\nname: cantor_biased\nprobs: [1/4, 3/4]\nratios: [1/3, 1/3]\n"},
      {"markov_two_state",
       "family: markov\nname: markov_two_state\nell: 2\nP: [[0.9, 0.1], [0.5, 0.5]]\n"
       "pi: [5/6, 1/6]\nstationary: true\n"},
  };
}

MeasureModel zoo_model(const std::string& stem) {
  for (const auto& [name, text] : zoo_specs())
    if (name == stem) return parse_model_spec(text, "zoo/" + stem + ".model");
  throw ValidationError("unknown zoo model '" + stem + "'");
}

std::vector<OracleRecord> build_oracles() {
  std::vector<OracleRecord> out;
  auto add = [&](std::string name, std::string method, const hp& v, double tol, std::string note) {
    out.push_back({std::move(name), std::move(method), to_d(v), tol, std::move(note)});
  };
  const hp ln2 = log(hp(2)), ln3 = log(hp(3));

  // Bernoulli p = 1/4
  {
    const hp p = hp(1) / 4, q = 1 - p;
    const hp d = -(p * log(p) + q * log(q)) / ln2;
    add("bernoulli_quarter.d", "high-precision", d, 1e-12, "-(p log2 p + q log2 q)");
    const hp lr = log(q / p) / ln2;
    add("bernoulli_quarter.sigma2_base2", "high-precision", p * q * lr * lr, 1e-12,
        "two-point variance of X = -log2 m-increment");
    add("bernoulli_quarter.sigma2_natural", "high-precision", p * q * lr * lr * ln2, 1e-12,
        "variance per unit ln(1/diameter)");
    add("bernoulli_quarter.tau_2", "high-precision", bern_tau(p, 2), 1e-12, "log2(p^2 + q^2)");
    add("bernoulli_quarter.tau_0", "high-precision", bern_tau(p, 0), 1e-12, "log2 2");
    for (auto [label, qq] : {std::pair{"0.5", 0.5}, {"1", 1.0}, {"m1", -1.0}})
      add(std::string("bernoulli_quarter.chi_") + label, "high-precision",
          bern_tau(p, 1 - hp(qq)) - hp(qq) * d, 1e-12, "tau(1-q) - q d");
    for (int n : {5, 16}) {
      const auto m = enumerate_two_symbol(1 - p, p, n, ln2);
      add("bernoulli_quarter.mean_S" + std::to_string(n), "enumeration", m.mean, 1e-12,
          "2^n words, base 2");
      add("bernoulli_quarter.var_S" + std::to_string(n), "enumeration", m.var, 1e-12,
          "2^n words, base 2");
    }
  }
  // Cantor models, ratios 1/3
  {
    add("cantor.delta", "high-precision", log(hp(2)) / ln3, 1e-12, "log3 2");
    add("cantor_natural.d", "high-precision", log(hp(2)) / ln3, 1e-12, "p_i = r_i^delta");
    const hp p0 = hp(1) / 4, p1 = hp(3) / 4;
    const hp d = -(p0 * log(p0) + p1 * log(p1)) / ln3;
    add("cantor_biased.d", "high-precision", d, 1e-12, "sum p ln p / sum p ln r");
    add("cantor_biased.tau_2", "high-precision", log(p0 * p0 + p1 * p1) / ln3, 1e-12,
        "equal-ratio closed form");
    const hp c0 = log(p0) + d * ln3, c1 = log(p1) + d * ln3;
    add("cantor_biased.sigma2_natural", "high-precision", (p0 * c0 * c0 + p1 * c1 * c1) / ln3,
        1e-12, "sum p (ln p - d ln r)^2 / (-sum p ln r)");
    for (int n : {5, 16}) {
      const auto m = enumerate_two_symbol(p0, p1, n, ln3);
      add("cantor_biased.mean_S" + std::to_string(n), "enumeration", m.mean, 1e-12,
          "2^n words, base 3");
      add("cantor_biased.var_S" + std::to_string(n), "enumeration", m.var, 1e-12,
          "2^n words, base 3");
    }
  }
  // Theta, base-2 convention at log2(1/t) = 65536
  {
    const hp l2 = 65536;
    add("theta_base2.exponent_65536", "high-precision", sqrt(2 * l2 * log(log(l2))), 1e-9,
        "log2 Theta at t = 2^-65536");
  }
  // Markov chain
  {
    const hp P[2][2] = {{hp(9) / 10, hp(1) / 10}, {hp(1) / 2, hp(1) / 2}};
    const hp pi[2] = {hp(5) / 6, hp(1) / 6};
    hp c = 1;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const hp a = P[i][j] / pi[j], b = pi[j] / P[i][j];
        if (a > c) c = a;
        if (b > c) c = b;
      }
    add("markov_two_state.C", "closed-form", c, 1e-12, "max over P_ij of P_ij/pi_j and reciprocal");
    hp h = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) h -= pi[i] * P[i][j] * log(P[i][j]);
    add("markov_two_state.d", "high-precision", h / ln2, 1e-12, "entropy rate / ln 2");
    const hp eps = hp("1e-12");
    const hp t2 = (markov_tau(P, 1 + eps) - 2 * markov_tau(P, 1) + markov_tau(P, 1 - eps)) / (eps * eps);
    add("markov_two_state.sigma2_natural", "high-precision", t2, 1e-6,
        "tau''(1) of the 2x2 Perron root, 50-digit difference");
    for (auto [label, qq] : {std::pair{"m1", -1.0}, {"0.5", 0.5}, {"2", 2.0}}) {
      const hp tq = markov_tau(P, hp(qq));
      add(std::string("markov_two_state.tau_") + label, "closed-form", tq, 1e-12,
          "2x2 Perron root, quadratic formula");
      for (int n : {6, 10, 14})
        add("markov_two_state.dev_" + std::string(label) + "_n" + std::to_string(n), "enumeration",
            log(markov_z(pi, P, hp(qq), n)) / ln2 - n * tq, 1e-10,
            "log2 Z_n - n tau over 2^n words");
    }
  }
  // KS noise floor for N = 1e5 standard normals
  {
    std::mt19937_64 gen(20240601);
    std::normal_distribution<double> normal;
    double worst = 0;
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> z(100000);
      for (auto& x : z) x = normal(gen);
      worst = std::max(worst, ks_normal(z));
    }
    out.push_back({"ks.noise_floor_1e5", "gaussian-approx", worst, 0.0,
                   "max KS over 10 simulated N(0,1) samples of size 1e5"});
  }
  // Gauge fractions, Gaussian approximation of S_n - n d
  {
    const double p = 0.25, q = 0.75;
    const double sigma = std::sqrt(p * q) * std::log2(q / p);
    for (int e : {10, 14, 18}) {
      const double n = std::ldexp(1.0, e);
      const double x = (sigma + 0.3) / sigma * std::sqrt(2 * std::log(std::log(n)));
      out.push_back({"gauge.hausdorff_fraction_2^" + std::to_string(e), "gaussian-approx",
                     0.5 * std::erfc(-x / std::sqrt(2.0)), 0.0, "Phi((sigma+eps)/sigma sqrt(2 ln ln n))"});
      out.push_back({"gauge.packing_fraction_2^" + std::to_string(e), "gaussian-approx",
                     0.5 * std::erfc(x / std::sqrt(2.0)), 0.0, "1 - Phi(same)"});
    }
  }
  return out;
}

const OracleRecord& find_oracle(const std::vector<OracleRecord>& records, const std::string& name) {
  for (const auto& r : records)
    if (r.name == name) return r;
  throw ValidationError("no oracle record named '" + name + "'");
}

std::vector<CrossCheck> cross_check(const std::vector<OracleRecord>& records) {
  const auto bq = zoo_model("bernoulli_quarter");
  const auto cn = zoo_model("cantor_natural");
  const auto cb = zoo_model("cantor_biased");
  const auto mk = zoo_model("markov_two_state");
  const auto& chain = std::get<MarkovShift>(mk.data());
  auto moment = [](const MeasureModel& m, int n, LogBase b, bool var) {
    const auto mo = moments(exact_distribution(m, n, b));
    return static_cast<double>(var ? mo.variance : mo.mean);
  };
  std::map<std::string, std::function<double()>> main{
      {"bernoulli_quarter.d", [&] { return dimension(bq).d; }},
      {"bernoulli_quarter.sigma2_base2", [&] { return sigma2(bq, LogBase::two).value; }},
      {"bernoulli_quarter.sigma2_natural", [&] { return sigma2(bq, LogBase::natural).value; }},
      {"bernoulli_quarter.tau_2", [&] { return tau(bq, 2); }},
      {"bernoulli_quarter.tau_0", [&] { return tau(bq, 0); }},
      {"bernoulli_quarter.chi_0.5", [&] { return chi(bq, 0.5); }},
      {"bernoulli_quarter.chi_1", [&] { return chi(bq, 1); }},
      {"bernoulli_quarter.chi_m1", [&] { return chi(bq, -1); }},
      {"cantor.delta", [&] { return support_dimension(cb); }},
      {"cantor_natural.d", [&] { return dimension(cn).d; }},
      {"cantor_biased.d", [&] { return dimension(cb).d; }},
      {"cantor_biased.tau_2", [&] { return tau(cb, 2); }},
      {"cantor_biased.sigma2_natural", [&] { return sigma2(cb, LogBase::natural).value; }},
      {"theta_base2.exponent_65536",
       [&] { return log_theta(65536 * std::log(2.0), ThetaConvention::base2) / std::log(2.0); }},
      {"markov_two_state.C", [&] { return qb_constant_closed(mk); }},
      {"markov_two_state.d", [&] { return dimension(mk).d; }},
      {"markov_two_state.sigma2_natural", [&] { return sigma2(mk, LogBase::natural).value; }},
  };
  for (int n : {5, 16}) {
    const auto s = std::to_string(n);
    main["bernoulli_quarter.mean_S" + s] = [=, &bq] { return moment(bq, n, LogBase::two, false); };
    main["bernoulli_quarter.var_S" + s] = [=, &bq] { return moment(bq, n, LogBase::two, true); };
    main["cantor_biased.mean_S" + s] = [=, &cb] { return moment(cb, n, LogBase::ell, false); };
    main["cantor_biased.var_S" + s] = [=, &cb] { return moment(cb, n, LogBase::ell, true); };
  }
  for (auto [label, qq] : {std::pair{"m1", -1.0}, {"0.5", 0.5}, {"2", 2.0}}) {
    main[std::string("markov_two_state.tau_") + label] = [&mk, qq] { return tau(mk, qq); };
    for (int n : {6, 10, 14})
      main["markov_two_state.dev_" + std::string(label) + "_n" + std::to_string(n)] =
          [&mk, &chain, qq, n] {
            return log_partition_sum_transfer(chain, qq, n) / std::log(2.0) - n * tau(mk, qq);
          };
  }
  std::vector<CrossCheck> checks;
  for (const auto& r : records) {
    auto it = main.find(r.name);
    if (it == main.end()) continue;
    CrossCheck c{r.name, it->second(), r.value, r.tolerance, false};
    const double scale = std::max(1.0, std::abs(r.value));
    c.pass = std::abs(c.main_value - c.oracle_value) <= r.tolerance * scale;
    checks.push_back(c);
  }
  return checks;
}

std::string oracles_to_json(const std::vector<OracleRecord>& records) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : records)
    j["records"].push_back({{"name", r.name},
                            {"method", r.method},
                            {"value", r.value},
                            {"tolerance", r.tolerance},
                            {"note", r.note}});
  return j.dump(2) + "\n";
}

std::vector<OracleRecord> oracles_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("version", 0) != 1) throw ValidationError("oracle cache: unsupported version");
  std::vector<OracleRecord> out;
  for (const auto& r : j.at("records"))
    out.push_back({r.at("name"), r.at("method"), r.at("value"), r.at("tolerance"), r.at("note")});
  return out;
}

}  // namespace mflab
