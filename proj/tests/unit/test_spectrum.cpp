#include <cmath>

#include "doctest.h"
#include "mflab/errors.hpp"
#include "mflab/report.hpp"
#include "mflab/spectrum.hpp"

using namespace mflab;

namespace {
const std::vector<std::string> kZoo = {"bernoulli_half", "bernoulli_quarter", "cantor_natural",
                                       "cantor_biased", "markov_two_state"};
}

TEST_CASE("closed-form bernoulli") {
  for (double p : {0.1, 0.25, 0.5, 0.9}) {
    CHECK(tau_closed_bernoulli(p, 1.0) == 0.0);
    CHECK(tau_closed_bernoulli(p, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(tau_closed_bernoulli(0.25, 2.0) == doctest::Approx(-0.6780719051126377).epsilon(1e-14));
  const double probs[] = {0.75, 0.25}, ratios[] = {0.5, 0.5};
  for (double q : {-2.0, -0.5, 0.3, 2.0, 3.0})
    CHECK(tau_implicit_selfsimilar(probs, ratios, q) ==
          doctest::Approx(tau_closed_bernoulli(0.25, q)).epsilon(1e-12));
}

TEST_CASE("implicit self-similar") {
  const double p[] = {0.25, 0.75}, r[] = {1.0 / 3, 1.0 / 3};
  CHECK(tau_implicit_selfsimilar(p, r, 1.0) == 0.0);
  CHECK(tau_implicit_selfsimilar(p, r, 0.0) == doctest::Approx(0.6309297535714574).epsilon(1e-13));
  CHECK(tau_implicit_selfsimilar(p, r, 2.0) == doctest::Approx(-0.4278157399964451).epsilon(1e-13));
  // unequal ratios: residual of the Moran equation
  const double p2[] = {0.2, 0.5, 0.3}, r2[] = {0.1, 0.4, 0.25};
  for (double q : {-5.0, -1.0, 0.0, 0.7, 4.0, 20.0}) {
    const double t = tau_implicit_selfsimilar(p2, r2, q);
    double f = -1;
    for (int i = 0; i < 3; ++i) f += std::pow(p2[i], q) * std::pow(r2[i], t);
    CHECK(std::abs(f) <= 1e-13);
  }
}

TEST_CASE("perron markov") {
  const auto mk = zoo_model("markov_two_state");
  CHECK(tau(mk, 1.0) == 0.0);
  CHECK(tau(mk, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
  const double a = 0.81, b = 0.01, c = 0.25, d = 0.25;
  const double rho = (a + d) / 2 + std::sqrt((a - d) * (a - d) / 4 + b * c);
  CHECK(tau(mk, 2.0) == doctest::Approx(std::log2(rho)).epsilon(1e-13));
  // |tau_n - tau| <= |q| log2 C / n at n = 14
  for (double q : {-1.0, 0.5, 2.0})
    CHECK(std::abs(tau_empirical(mk, q, 14) - tau(mk, q)) <= std::abs(q) * std::log2(3.0) / 14);
  // reducible chain names its closed classes
  const auto red = MeasureModel::markov(Alphabet(3), {0.5, 0.5, 0, 0.5, 0.5, 0, 0, 0, 1},
                                        std::vector<double>{0.5, 0.25, 0.25});
  try {
    tau(red, 2.0);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("{0,1}") != std::string::npos);
    CHECK(std::string(e.what()).find("{2}") != std::string::npos);
  }
}

TEST_CASE("empirical spectra") {
  for (const auto& name : kZoo) {
    const auto m = zoo_model(name);
    const LogBase base = m.is_ell_adic() ? LogBase::ell : LogBase::natural;
    CHECK(std::abs(tau_empirical(m, 1.0, 10, base)) <= 1e-12);
    if (m.family() != Family::markov)
      for (double q : {-1.5, 0.0, 0.5, 2.5})
        CHECK(tau_empirical(m, q, 9, base) == doctest::Approx(tau(m, q)).epsilon(1e-10));
  }
  const auto unequal = MeasureModel::self_similar({0.3, 0.7}, {0.2, 0.5});
  for (double q : {-1.0, 0.5, 2.0})
    CHECK(tau_empirical(unequal, q, 8, LogBase::natural) == doctest::Approx(tau(unequal, q)).epsilon(1e-10));
  CHECK_THROWS_AS(tau_empirical(zoo_model("markov_two_state"), 2.0, 30, LogBase::ell, 1 << 20), BudgetError);
  // product models factorize beyond the budget
  CHECK(tau_empirical(zoo_model("bernoulli_quarter"), 2.0, 60) == doctest::Approx(tau(zoo_model("bernoulli_quarter"), 2.0)).epsilon(1e-12));
}

TEST_CASE("base conversions") {
  const auto b = zoo_model("bernoulli_quarter");
  const double s2e = sigma2(b, LogBase::natural).value, s22 = sigma2(b, LogBase::two).value;
  CHECK(s22 * std::log(2.0) == doctest::Approx(s2e).epsilon(1e-12));
  CHECK(tau_in_base(b, 2.0, LogBase::natural) ==
        doctest::Approx(tau_in_base(b, 2.0, LogBase::two) * std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(tau_in_base(zoo_model("cantor_biased"), 2.0, LogBase::two), ValidationError);
}

TEST_CASE("spectrum table invariants") {
  const auto grid = make_q_grid(-2, 3, 0.05);
  CHECK(grid.size() == 101);
  CHECK(grid[60] == 1.0);
  for (const auto& name : kZoo) {
    const auto m = zoo_model(name);
    const auto t = spectrum_table(m, grid, m.is_ell_adic() ? LogBase::ell : LogBase::natural);
    CHECK(t.points[60].second == 0.0);
    for (std::size_t i = 1; i < t.points.size(); ++i) CHECK(t.points[i].second <= t.points[i - 1].second + 1e-12);
    for (std::size_t i = 1; i + 1 < t.points.size(); ++i)
      CHECK(t.points[i].second <= 0.5 * (t.points[i - 1].second + t.points[i + 1].second) + 1e-9);
  }
}

TEST_CASE("dimension and sigma2") {
  CHECK(dimension(zoo_model("bernoulli_half")).d == 1.0);
  CHECK(dimension(zoo_model("bernoulli_quarter")).d == doctest::Approx(0.8112781244591329).epsilon(1e-13));
  CHECK(dimension(zoo_model("cantor_biased")).d == doctest::Approx(0.5118595071429149).epsilon(1e-13));
  for (const auto& name : kZoo) {
    const auto r = dimension(zoo_model(name));
    CHECK(std::abs(r.d - r.d_numeric) <= 1e-8);
    CHECK(r.d <= support_dimension(zoo_model(name)) + 1e-12);
  }
  CHECK(sigma2(zoo_model("bernoulli_half"), LogBase::two).value == 0.0);
  CHECK(sigma2(zoo_model("bernoulli_quarter"), LogBase::two).value == doctest::Approx(0.4710198991297989).epsilon(1e-13));
  CHECK(std::abs(sigma2(zoo_model("bernoulli_quarter"), LogBase::two).value - 0.4710196) < 1e-6);
  CHECK(sigma2(zoo_model("cantor_biased"), LogBase::natural).value == doctest::Approx(0.2059898041).epsilon(1e-9));
  CHECK(sigma2(zoo_model("cantor_natural"), LogBase::natural).value < 1e-12);
  CHECK(sigma2(zoo_model("cantor_biased"), LogBase::natural).value > 0.1);
  const auto mk = sigma2(zoo_model("markov_two_state"), LogBase::natural);
  CHECK_FALSE(mk.flagged);
  CHECK(mk.value == doctest::Approx(0.8774000084681973).epsilon(1e-7));
  CHECK(mk.error < 1e-6);
}

TEST_CASE("chi and its inverse") {
  const auto b = zoo_model("bernoulli_quarter");
  CHECK(chi(b, 0.0) == 0.0);
  CHECK(chi(b, 0.5) == doctest::Approx(0.04434525124692942).epsilon(1e-12));
  const auto flat = chi_profile(zoo_model("bernoulli_half"));
  CHECK(flat.flat);
  CHECK_THROWS_AS(chi_inverse(flat, 0.1), ValidationError);
  const auto p = chi_profile(b);
  CHECK_FALSE(p.flat);
  for (const auto* grid : {&p.positive, &p.negative})
    for (const auto& [q, c] : *grid) {
      CHECK(c >= 0.0);
      CHECK(c >= 2 * chi(b, q / 2) - 1e-12);
    }
  CHECK(chi_inverse(p, 0.0) == 0.0);
  CHECK(chi_inverse(p, chi(b, 1.0)) == 1.0);
  CHECK(chi_inverse(p, chi(b, 0.5)) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(chi_inverse(p, chi(b, -0.3), ChiSide::negative) == doctest::Approx(0.3).epsilon(1e-10));
  CHECK_THROWS_AS(chi_inverse(p, 1.0), ValidationError);
}

TEST_CASE("theta gauge") {
  const auto b = zoo_model("bernoulli_quarter");
  const auto p = chi_profile(b);
  CHECK(theta_gauge(p, (1 + 1e-12) / chi(b, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  const double s = std::sqrt(sigma2(b, LogBase::natural).value);
  for (double t : {1e3, 1e4, 1e5})
    CHECK(std::abs(theta_gauge(p, t) / (s * std::sqrt(t / 2)) - 1) < 0.01);
  double prev = 0;
  for (double t = 8; t < 1e6; t *= 1.7) {
    const double th = theta_gauge(p, t), thm = theta_gauge(p, t, ChiSide::negative);
    CHECK(th >= prev);
    CHECK(thm > 0);
    prev = th;
  }
  CHECK_THROWS_AS(theta_gauge(p, 1.0), ValidationError);
}

TEST_CASE("not-flat check") {
  const auto flat = not_flat_check(chi_profile(zoo_model("bernoulli_half")), 1.0, 12);
  CHECK_FALSE(flat.holds);
  CHECK(flat.flat);
  const auto b = not_flat_check(chi_profile(zoo_model("bernoulli_quarter")), 1.0, 12);
  CHECK(b.holds);
  CHECK(b.C == doctest::Approx(4.2557).epsilon(1e-4));
  CHECK(b.C <= 4.5);
  CHECK(b.ratios.back() == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(b.alpha_tail == doctest::Approx(2.0).epsilon(1e-3));
  const auto neg = not_flat_check(chi_profile(zoo_model("bernoulli_quarter")), 1.0, 12, ChiSide::negative);
  CHECK(neg.holds);
  CHECK(neg.ratios.back() == doctest::Approx(4.0).epsilon(1e-3));
  for (const auto& name : {"cantor_biased", "markov_two_state"}) {
    const auto r = not_flat_check(chi_profile(zoo_model(name)), 1.0, 16);
    CHECK(r.holds);
    CHECK(r.alpha_tail == doctest::Approx(2.0).epsilon(1e-3));
  }
}
