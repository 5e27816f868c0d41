#include "mflab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mflab/errors.hpp"

namespace mflab {
namespace {

constexpr double kSumTolerance = 1e-12;

void check_probability_vector(std::span<const double> v, const std::string& what) {
  double sum = 0.0;
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0) || !std::isfinite(x))
      throw ValidationError(what + ": entries must lie in [0,1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": entries must sum to 1 within 1e-12 (sum = " << sum << ")";
    throw ValidationError(os.str());
  }
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

std::vector<double> build_cdf(std::span<const double> probs) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  int last_active = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
    if (probs[i] > 0.0) last_active = static_cast<int>(i);
  }
  // u < 1 always selects an active symbol: close the cdf at the last active one.
  for (std::size_t i = static_cast<std::size_t>(last_active); i < cdf.size(); ++i) cdf[i] = 2.0;
  return cdf;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::bernoulli: return "bernoulli";
    case Family::multinomial: return "multinomial";
    case Family::self_similar: return "self_similar";
    case Family::markov: return "markov";
  }
  return "?";
}

std::string_view to_string(LogBase base) {
  switch (base) {
    case LogBase::natural: return "natural";
    case LogBase::ell: return "ell";
    case LogBase::two: return "2";
  }
  return "?";
}

LogBase parse_log_base(std::string_view text) {
  if (text == "natural" || text == "e") return LogBase::natural;
  if (text == "ell" || text == "base-ell") return LogBase::ell;
  if (text == "2" || text == "base-2" || text == "two") return LogBase::two;
  throw ValidationError("unknown log base '" + std::string(text) + "' (expected natural|ell|2)");
}

MeasureModel::MeasureModel(Data data, Alphabet alphabet, std::string name)
    : data_(std::move(data)), alphabet_(alphabet), name_(std::move(name)) {
  cache_logs();
}

Family MeasureModel::family() const { return static_cast<Family>(data_.index()); }

MeasureModel MeasureModel::bernoulli(double p, std::string name) {
  if (!(p > 0.0 && p < 1.0))
    throw ValidationError("bernoulli: p must lie in the open interval (0,1)");
  if (name.empty()) name = "bernoulli";
  return MeasureModel(BernoulliProduct{p}, Alphabet(2, 1), std::move(name));
}

MeasureModel MeasureModel::multinomial(Alphabet alphabet, std::vector<double> weights,
                                       std::string name) {
  if (static_cast<int>(weights.size()) != alphabet.size())
    throw ValidationError("multinomial: expected " + std::to_string(alphabet.size()) +
                          " weights (ell^D), got " + std::to_string(weights.size()));
  check_probability_vector(weights, "multinomial weights");
  if (name.empty()) name = "multinomial";
  return MeasureModel(Multinomial{alphabet, std::move(weights)}, alphabet, std::move(name));
}

MeasureModel MeasureModel::self_similar(std::vector<double> probs, std::vector<double> ratios,
                                        double diam_k, std::string name) {
  if (probs.size() < 2) throw ValidationError("self_similar: need at least 2 branches");
  if (probs.size() != ratios.size())
    throw ValidationError("self_similar: probs and ratios must have equal length");
  for (double p : probs)
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("self_similar: probs must lie in (0,1)");
  check_probability_vector(probs, "self_similar probs");
  for (double r : ratios)
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("self_similar: ratios must lie in (0,1)");
  if (!(diam_k > 0.0) || !std::isfinite(diam_k))
    throw ValidationError("self_similar: diam_K must be positive");
  if (name.empty()) name = "self_similar";
  const Alphabet alphabet(static_cast<int>(probs.size()), 1);
  return MeasureModel(SelfSimilarSymbolic{std::move(probs), std::move(ratios), diam_k}, alphabet,
                      std::move(name));
}

MeasureModel MeasureModel::markov(Alphabet alphabet, std::vector<double> transition,
                                  std::optional<std::vector<double>> pi, bool declared_stationary,
                                  std::string name) {
  const int k = alphabet.size();
  if (static_cast<long>(transition.size()) != static_cast<long>(k) * k)
    throw ValidationError("markov: P must be " + std::to_string(k) + "x" + std::to_string(k));
  for (int i = 0; i < k; ++i)
    check_probability_vector(std::span<const double>(transition).subspan(i * k, k),
                             "markov P row " + std::to_string(i));
  MarkovShift chain{alphabet, {}, std::move(transition), false};
  if (pi) {
    if (static_cast<int>(pi->size()) != k)
      throw ValidationError("markov: pi must have " + std::to_string(k) + " entries");
    check_probability_vector(*pi, "markov pi");
    chain.pi = std::move(*pi);
    if (declared_stationary) {
      for (int j = 0; j < k; ++j) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc += chain.pi[i] * chain.at(i, j);
        if (std::abs(acc - chain.pi[j]) > 1e-10)
          throw ValidationError("markov: pi declared stationary but (pi P)[" + std::to_string(j) +
                                "] differs from pi by more than 1e-10");
      }
      chain.pi_is_stationary = true;
    }
  } else {
    chain.pi = stationary_distribution(chain);
    chain.pi_is_stationary = true;
  }
  if (name.empty()) name = "markov";
  return MeasureModel(std::move(chain), alphabet, std::move(name));
}

void MeasureModel::cache_logs() {
  const int k = symbol_count();
  log_weights_.assign(k, 0.0);
  log_ratios_.assign(k, 0.0);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BernoulliProduct>) {
          log_weights_ = {std::log1p(-m.p), std::log(m.p)};
        } else if constexpr (std::is_same_v<T, Multinomial>) {
          for (int i = 0; i < k; ++i) log_weights_[i] = safe_log(m.weights[i]);
        } else if constexpr (std::is_same_v<T, SelfSimilarSymbolic>) {
          for (int i = 0; i < k; ++i) {
            log_weights_[i] = std::log(m.probs[i]);
            log_ratios_[i] = std::log(m.ratios[i]);
          }
          log_diam_k_ = std::log(m.diam_k);
        } else {
          for (int i = 0; i < k; ++i) log_weights_[i] = safe_log(m.pi[i]);
          log_transition_.resize(m.transition.size());
          std::transform(m.transition.begin(), m.transition.end(), log_transition_.begin(),
                         safe_log);
        }
      },
      data_);
  if (is_ell_adic()) {
    const double ln_ell = std::log(static_cast<double>(alphabet_.ell()));
    std::fill(log_ratios_.begin(), log_ratios_.end(), -ln_ell);
    ln_ell_ = ln_ell;
  } else {
    const auto& ratios = std::get<SelfSimilarSymbolic>(data_).ratios;
    if (std::all_of(ratios.begin(), ratios.end(), [&](double r) { return r == ratios.front(); }))
      ln_ell_ = -std::log(ratios.front());
  }
}

double log_cylinder_mass(const MeasureModel& model, const Word& w, LogBase base) {
  if (w.alphabet().size() != model.symbol_count())
    throw ValidationError("log_cylinder_mass: word alphabet does not match the model");
  double acc = 0.0;
  int previous = -1;
  for (auto s : w.symbols()) {
    if (!model.alphabet().contains(s)) throw ValidationError("log_cylinder_mass: bad symbol");
    const double step = model.log_step(previous, s);
    if (step == kNegInf) return kNegInf;
    acc += step;
    previous = static_cast<int>(s);
  }
  if (base == LogBase::natural) return acc;
  if (base == LogBase::ell && !model.ln_ell())
    throw ValidationError("log base 'ell' undefined for IFS with unequal ratios");
  return acc / ln_of_base(base, model.ln_ell().value_or(1.0));
}

double cylinder_mass(const MeasureModel& model, const Word& w) {
  return std::exp(log_cylinder_mass(model, w));
}

double log_cylinder_diameter(const MeasureModel& model, const Word& w) {
  if (w.alphabet().size() != model.symbol_count())
    throw ValidationError("cylinder_diameter: word alphabet does not match the model");
  if (model.is_ell_adic()) return -w.level() * *model.ln_ell();
  double acc = model.log_diam_k();
  for (auto s : w.symbols()) acc += model.log_ratios()[s];
  return acc;
}

double cylinder_diameter(const MeasureModel& model, const Word& w) {
  if (model.is_ell_adic()) return cube_length(w.level(), model.alphabet().ell());
  const auto& ss = std::get<SelfSimilarSymbolic>(model.data());
  double acc = ss.diam_k;
  for (auto s : w.symbols()) acc *= ss.ratios[s];
  return acc;
}

PathSampler::PathSampler(const MeasureModel& model, std::uint64_t seed, std::uint64_t path_index)
    : model_(&model), rng_(seed, path_index) {
  const int k = model.symbol_count();
  std::vector<double> probs(k);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BernoulliProduct>) {
          probs = {1.0 - m.p, m.p};
        } else if constexpr (std::is_same_v<T, Multinomial>) {
          probs = m.weights;
        } else if constexpr (std::is_same_v<T, SelfSimilarSymbolic>) {
          probs = m.probs;
        } else {
          probs = m.pi;
          for (int i = 0; i < k; ++i) {
            auto row = build_cdf(std::span<const double>(m.transition).subspan(i * k, k));
            row_cdfs_.insert(row_cdfs_.end(), row.begin(), row.end());
          }
        }
      },
      model.data());
  initial_cdf_ = build_cdf(probs);
}

std::uint32_t PathSampler::draw(std::span<const double> cdf) {
  const double u = rng_.uniform();
  std::uint32_t i = 0;
  while (!(u < cdf[i])) ++i;
  return i;
}

std::uint32_t PathSampler::next() {
  const int k = model_->symbol_count();
  std::uint32_t s;
  if (previous_ >= 0 && !row_cdfs_.empty())
    s = draw(std::span<const double>(row_cdfs_).subspan(static_cast<std::size_t>(previous_) * k, k));
  else
    s = draw(initial_cdf_);
  previous_ = static_cast<int>(s);
  return s;
}

Word sample_path(const MeasureModel& model, int n, std::uint64_t seed, std::uint64_t path_index) {
  if (n < 1) throw ValidationError("sample_path: level must be >= 1");
  PathSampler sampler(model, seed, path_index);
  std::vector<std::uint32_t> symbols(n);
  for (auto& s : symbols) s = sampler.next();
  return Word(model.alphabet(), std::move(symbols));
}

std::vector<double> stationary_distribution(const MarkovShift& chain) {
  const int k = chain.size();
  std::vector<long double> v(k, 1.0L / k), next(k);
  for (int iter = 0; iter < 100000; ++iter) {
    // lazy chain (I+P)/2 has the same stationary vector and is aperiodic
    for (int j = 0; j < k; ++j) {
      long double acc = 0;
      for (int i = 0; i < k; ++i) acc += v[i] * chain.at(i, j);
      next[j] = 0.5L * (v[j] + acc);
    }
    long double total = 0, diff = 0;
    for (auto x : next) total += x;
    for (int j = 0; j < k; ++j) {
      next[j] /= total;
      diff = std::max(diff, std::abs(next[j] - v[j]));
    }
    v.swap(next);
    if (diff < 1e-14L && iter > 2) break;
  }
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out)
    if (x < 1e-300) x = 0.0;
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (auto& x : out) x /= total;
  return out;
}

SupportInfo support_info(const MeasureModel& model) {
  if (!model.is_ell_adic())
    throw ValidationError(
        "support_info: self-similar models have no ell-adic support; the similarity dimension "
        "solves sum r_i^delta = 1 (spectrum::similarity_dimension)");
  const int k = model.symbol_count();
  std::vector<bool> active(k, false);
  if (model.family() == Family::markov) {
    const auto& chain = std::get<MarkovShift>(model.data());
    std::vector<int> stack;
    for (int i = 0; i < k; ++i)
      if (chain.pi[i] > 0.0) {
        active[i] = true;
        stack.push_back(i);
      }
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < k; ++j)
        if (chain.at(i, j) > 0.0 && !active[j]) {
          active[j] = true;
          stack.push_back(j);
        }
    }
  } else {
    for (int i = 0; i < k; ++i) active[i] = model.log_weights()[i] > kNegInf;
  }
  SupportInfo info;
  for (int i = 0; i < k; ++i)
    if (active[i]) info.active_symbols.push_back(static_cast<std::uint32_t>(i));
  info.g = static_cast<int>(info.active_symbols.size());
  info.delta = std::log(static_cast<double>(info.g)) / *model.ln_ell();
  return info;
}

MeasureModel homogeneous_measure(const MeasureModel& model) {
  const SupportInfo info = support_info(model);
  std::vector<double> w(model.symbol_count(), 0.0);
  for (auto s : info.active_symbols) w[s] = 1.0 / info.g;
  return MeasureModel::multinomial(model.alphabet(), std::move(w), model.name() + "_homogeneous");
}

}  // namespace mflab
