#include <cmath>

#include "doctest.h"
#include "mflab/errors.hpp"
#include "mflab/models.hpp"
#include "mflab/report.hpp"

using namespace mflab;

namespace {
MeasureModel markov_example() { return zoo_model("markov_two_state"); }
}  // namespace

TEST_CASE("cylinder masses") {
  const auto b = MeasureModel::bernoulli(0.25);
  const Alphabet a(2);
  CHECK(cylinder_mass(b, Word(a, {1})) == 0.25);
  CHECK(cylinder_mass(b, Word(a)) == 1.0);
  CHECK(log_cylinder_mass(b, Word(a, {1, 1, 0}), LogBase::two) ==
        doctest::Approx(-4.415037499278844).epsilon(1e-14));
  const auto half = MeasureModel::bernoulli(0.5);
  CHECK(log_cylinder_mass(half, Word(a, {1, 0, 1, 1, 0}), LogBase::two) == -5.0);
  CHECK(cylinder_mass(markov_example(), Word(a, {0, 0, 1})) == doctest::Approx(0.075).epsilon(1e-14));
  const auto m = MeasureModel::multinomial(Alphabet(3), {0.0, 0.5, 0.5});
  CHECK(log_cylinder_mass(m, Word(Alphabet(3), {1, 0, 2})) == kNegInf);
  CHECK(cylinder_mass(m, Word(Alphabet(3), {1, 0, 2})) == 0.0);
}

TEST_CASE("additivity and product structure") {
  for (const auto& model : {MeasureModel::bernoulli(0.25), markov_example(),
                            MeasureModel::multinomial(Alphabet(2, 2), {0.1, 0.2, 0.3, 0.4})}) {
    const Alphabet a = model.alphabet();
    const Word w(a, {1, 0, 1});
    double sum = 0;
    for (int s = 0; s < a.size(); ++s) sum += cylinder_mass(model, word_concat(w, Word(a, {std::uint32_t(s)})));
    CHECK(sum == doctest::Approx(cylinder_mass(model, w)).epsilon(1e-12));
    CHECK(std::exp(log_cylinder_mass(model, w)) == doctest::Approx(cylinder_mass(model, w)).epsilon(1e-12));
  }
  const auto b = MeasureModel::bernoulli(0.25);
  const Word u(Alphabet(2), {1, 1, 0}), v(Alphabet(2), {0, 1});
  CHECK(cylinder_mass(b, word_concat(u, v)) ==
        doctest::Approx(cylinder_mass(b, u) * cylinder_mass(b, v)).epsilon(1e-15));
}

TEST_CASE("cylinder diameters") {
  const auto c = MeasureModel::self_similar({0.5, 0.5}, {1.0 / 3, 1.0 / 3});
  CHECK(cylinder_diameter(c, Word(c.alphabet(), {0, 1, 1, 0})) == doctest::Approx(std::pow(3.0, -4)).epsilon(1e-14));
  CHECK(cylinder_diameter(c, Word(c.alphabet())) == 1.0);
  const auto b = MeasureModel::bernoulli(0.3);
  CHECK(cylinder_diameter(b, Word(Alphabet(2), {0, 1, 1, 0, 1})) == 1.0 / 32);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(MeasureModel::bernoulli(1.0), ValidationError);
  CHECK_THROWS_AS(MeasureModel::bernoulli(0.0), ValidationError);
  CHECK_THROWS_AS(MeasureModel::multinomial(Alphabet(2), {0.5, 0.4}), ValidationError);
  CHECK_THROWS_AS(MeasureModel::self_similar({0.5, 0.5}, {0.5, 1.0}), ValidationError);
  CHECK_THROWS_AS(MeasureModel::markov(Alphabet(2), {0.9, 0.1, 0.5, 0.5}, std::vector<double>{0.5, 0.5}, true),
                  ValidationError);
  // stationary vector computed when absent
  const auto m = MeasureModel::markov(Alphabet(2), {0.9, 0.1, 0.5, 0.5});
  const auto& chain = std::get<MarkovShift>(m.data());
  CHECK(chain.pi[0] == doctest::Approx(5.0 / 6).epsilon(1e-13));
}

TEST_CASE("sampler") {
  const auto b = MeasureModel::bernoulli(0.25);
  CHECK(sample_path(b, 100, 9, 3) == sample_path(b, 100, 9, 3));
  CHECK_FALSE(sample_path(b, 100, 9, 3) == sample_path(b, 100, 9, 4));
  int ones = 0;
  const int N = 1000000;
  for (int i = 0; i < N; ++i) ones += sample_path(b, 1, 11, i)[0];
  CHECK(std::abs(ones / double(N) - 0.25) < 0.002);
  // zero-weight symbols are never emitted
  const auto m = MeasureModel::multinomial(Alphabet(3), {0.5, 0.0, 0.5});
  for (auto s : sample_path(m, 2000, 1).symbols()) CHECK(s != 1u);
}

TEST_CASE("sampler cylinder frequencies match masses at level 3") {
  const auto mk = markov_example();
  const int N = 200000;
  std::vector<int> counts(8, 0);
  PathSampler sampler(mk, 5, 0);
  for (int i = 0; i < N; ++i) {
    const auto w = sample_path(mk, 3, 5, i);
    ++counts[w[0] * 4 + w[1] * 2 + w[2]];
  }
  double chi2 = 0;
  for (int c = 0; c < 8; ++c) {
    const double e = N * cylinder_mass(mk, Word(Alphabet(2), {std::uint32_t(c >> 2), std::uint32_t((c >> 1) & 1), std::uint32_t(c & 1)}));
    chi2 += (counts[c] - e) * (counts[c] - e) / e;
  }
  CHECK(chi2 < 24.3);  // chi-square 7 dof, 0.999 quantile
}

TEST_CASE("support info and homogeneous measure") {
  auto s = support_info(MeasureModel::bernoulli(0.3));
  CHECK(s.g == 2);
  CHECK(s.delta == 1.0);
  s = support_info(MeasureModel::multinomial(Alphabet(2), {1.0, 0.0}));
  CHECK(s.g == 1);
  CHECK(s.delta == 0.0);
  s = support_info(MeasureModel::multinomial(Alphabet(3), {0.5, 0.0, 0.5}));
  CHECK(s.delta == doctest::Approx(0.6309297535714574).epsilon(1e-14));
  CHECK_THROWS_AS(support_info(MeasureModel::self_similar({0.5, 0.5}, {0.3, 0.3})), ValidationError);

  const auto h = homogeneous_measure(MeasureModel::bernoulli(0.25));
  CHECK(std::get<Multinomial>(h.data()).weights == std::vector<double>{0.5, 0.5});
  const auto h2 = homogeneous_measure(MeasureModel::multinomial(Alphabet(3), {0.2, 0.0, 0.8}));
  CHECK(std::get<Multinomial>(h2.data()).weights == std::vector<double>{0.5, 0.0, 0.5});
  CHECK(std::get<Multinomial>(homogeneous_measure(h2).data()).weights ==
        std::get<Multinomial>(h2.data()).weights);
}

TEST_CASE("model spec files") {
  const auto m = parse_model_spec("family: bernoulli\nname: q\np: 1/4  # comment\n");
  CHECK(std::get<BernoulliProduct>(m.data()).p == 0.25);
  CHECK(m.name() == "q");
  const auto round = parse_model_spec(canonical_spec(zoo_model("markov_two_state")));
  CHECK(canonical_spec(round) == canonical_spec(zoo_model("markov_two_state")));
  try {
    parse_model_spec("family: multinomial\nell: 2\nweights: [0.5, 0.4]\n", "bad.model");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.model:3") != std::string::npos);
    CHECK(msg.find("sum to 1") != std::string::npos);
  }
  auto message = [](const char* text) {
    try {
      parse_model_spec(text);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("family: bernoulli\np: 0.3\ncolour: red\n").find("unknown field 'colour'") != std::string::npos);
  CHECK(message("family: bernoulli\np: 0.3\np: 0.4\n").find("duplicate field") != std::string::npos);
  CHECK(message("family: bernoulli\np: 1.5\n").find(":2:") != std::string::npos);
}
