#include <cmath>

#include "doctest.h"
#include "mflab/errors.hpp"
#include "mflab/gauges.hpp"
#include "mflab/report.hpp"

using namespace mflab;

TEST_CASE("theta conventions") {
  const double L = 1000.0;
  const double L2 = L / std::log(2.0);
  CHECK(log_theta(L, ThetaConvention::base2) ==
        doctest::Approx(std::log(2.0) * std::sqrt(2 * L2 * std::log(std::log(L2)))).epsilon(1e-14));
  CHECK(log_theta(L, ThetaConvention::natural) ==
        doctest::Approx(std::sqrt(2 * L * std::log(std::log(L)))).epsilon(1e-14));
  CHECK_THROWS_AS(log_theta(1.0, ThetaConvention::natural), ValidationError);
  const auto dom = theta_domain(ThetaConvention::natural);
  CHECK(dom.log_inv_t_max == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  CHECK(dom.log_inv_t_monotone >= dom.log_inv_t_max);
  CHECK(parse_theta_convention("base_ell") == ThetaConvention::base_ell);
  CHECK_THROWS_AS(parse_theta_convention("base3"), ValidationError);
  CHECK(to_string(parse_gauge_family("lil_packing")) == "lil_packing");
}

TEST_CASE("gauge values") {
  const auto b = zoo_model("bernoulli_quarter");
  auto hs = make_gauge(b, GaugeFamily::lil_hausdorff, ThetaConvention::base2, 0.3);
  CHECK(hs.sigma == doctest::Approx(std::sqrt(0.4710198991297989)).epsilon(1e-12));
  const double L = 2000.0;
  const auto v = gauge_value(hs, L);
  CHECK(v.log_value ==
        doctest::Approx(-hs.d * L + (hs.sigma + 0.3) * log_theta(L, ThetaConvention::base2)).epsilon(1e-13));
  auto pk = make_gauge(b, GaugeFamily::lil_packing, ThetaConvention::base2, 0.3);
  CHECK(gauge_value(pk, L).log_value < v.log_value);
  pk.packing_side = PackingSide::ac;
  CHECK(gauge_value(pk, L).log_value ==
        doctest::Approx(-pk.d * L - (pk.sigma - 0.3) * log_theta(L, ThetaConvention::base2)).epsilon(1e-13));
  const auto far = gauge_value(hs, 1e6);
  CHECK(far.underflow);
  CHECK(std::isfinite(far.log_value));
  auto bad = hs;
  bad.eps = -1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(gauge_value(hs, 1.0), ValidationError);
  const auto th = make_gauge(b, GaugeFamily::theta_a, ThetaConvention::natural, 0.5);
  REQUIRE(th.profile.has_value());
  CHECK(std::isfinite(gauge_value(th, 50.0).log_value));
}

TEST_CASE("gauge fractions") {
  const auto b = zoo_model("bernoulli_quarter");
  const auto hs = make_gauge(b, GaugeFamily::lil_hausdorff, ThetaConvention::base2, 0.3);
  const std::vector<int> levels{64, 256, 1024};
  const auto r1 = mass_gauge_fraction(b, hs, levels, 400, 11, 1);
  const auto r2 = mass_gauge_fraction(b, hs, levels, 400, 11, 2);
  CHECK(r1.fraction == r2.fraction);
  CHECK(r1.hit_ever == r2.hit_ever);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    CHECK(r1.fraction[i] > 0.9);
    CHECK(r1.hit_ever[i] >= r1.fraction[i]);
    if (i) CHECK(r1.hit_ever[i] >= r1.hit_ever[i - 1]);
  }
  const auto pk = make_gauge(b, GaugeFamily::lil_packing, ThetaConvention::base2, 0.3);
  CHECK(mass_gauge_fraction(b, pk, levels, 400, 11).fraction.back() < 0.05);
  // uniform measure is its own d-gauge, so every cylinder is a hit
  const auto half = zoo_model("bernoulli_half");
  auto pw = make_gauge(half, GaugeFamily::power, ThetaConvention::base2, 0.0);
  const auto all = mass_gauge_fraction(half, pw, {16, 32}, 100, 1);
  CHECK(all.fraction == std::vector<double>{1.0, 1.0});
}
