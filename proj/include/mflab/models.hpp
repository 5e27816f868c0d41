#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mflab/logmath.hpp"
#include "mflab/rng.hpp"
#include "mflab/symbolic.hpp"

namespace mflab {

/// Dyadic Bernoulli product on [0,1): digit 1 has probability p.
struct BernoulliProduct {
  double p;
};

/// i.i.d. ell-adic digits on [0,1)^D; zero weights allowed.
struct Multinomial {
  Alphabet alphabet;
  std::vector<double> weights;
};

/// Self-similar measure in symbolic form: cylinder K_w has mass prod p and
/// diameter diam_k * prod r.
struct SelfSimilarSymbolic {
  std::vector<double> probs;
  std::vector<double> ratios;
  double diam_k = 1.0;
};

/// Markov measure on ell-adic codes: m(I_w) = pi[w1] * prod P[w_{j-1}, w_j].
struct MarkovShift {
  Alphabet alphabet;
  std::vector<double> pi;
  std::vector<double> transition;  // row-major k x k
  bool pi_is_stationary = false;

  int size() const { return alphabet.size(); }
  double at(int i, int j) const { return transition[static_cast<std::size_t>(i) * size() + j]; }
};

enum class Family { bernoulli, multinomial, self_similar, markov };
std::string_view to_string(Family family);

/// Validated, immutable measure. Cylinder queries go through the free
/// functions below; per-symbol log factors are cached at construction.
class MeasureModel {
public:
  using Data = std::variant<BernoulliProduct, Multinomial, SelfSimilarSymbolic, MarkovShift>;

  static MeasureModel bernoulli(double p, std::string name = {});
  static MeasureModel multinomial(Alphabet alphabet, std::vector<double> weights,
                                  std::string name = {});
  static MeasureModel self_similar(std::vector<double> probs, std::vector<double> ratios,
                                   double diam_k = 1.0, std::string name = {});
  /// When `pi` is absent the stationary vector of P is used. A supplied pi
  /// flagged `declared_stationary` must satisfy pi P = pi within 1e-10.
  static MeasureModel markov(Alphabet alphabet, std::vector<double> transition,
                             std::optional<std::vector<double>> pi = std::nullopt,
                             bool declared_stationary = false, std::string name = {});

  Family family() const;
  const Data& data() const { return data_; }
  const std::string& name() const { return name_; }
  const Alphabet& alphabet() const { return alphabet_; }
  int symbol_count() const { return alphabet_.size(); }

  bool is_ell_adic() const { return family() != Family::self_similar; }
  bool is_product() const { return family() != Family::markov; }
  /// ln(ell) for ell-adic models, ln(1/r) for equal-ratio IFS, else empty.
  std::optional<double> ln_ell() const { return ln_ell_; }

  /// Product families: ln p_s. Markov: ln pi_s.
  std::span<const double> log_weights() const { return log_weights_; }
  /// ln of the per-symbol contraction (ln r_s, or -ln ell).
  std::span<const double> log_ratios() const { return log_ratios_; }
  double log_diam_k() const { return log_diam_k_; }
  /// Markov only: ln P[i,j], row-major.
  std::span<const double> log_transition() const { return log_transition_; }

  /// Natural-log mass factor of appending `symbol` after `previous`
  /// (previous < 0 for the first symbol).
  double log_step(int previous, std::uint32_t symbol) const {
    if (!log_transition_.empty() && previous >= 0)
      return log_transition_[static_cast<std::size_t>(previous) * symbol_count() + symbol];
    return log_weights_[symbol];
  }

private:
  MeasureModel(Data data, Alphabet alphabet, std::string name);
  void cache_logs();

  Data data_;
  Alphabet alphabet_;
  std::string name_;
  std::optional<double> ln_ell_;
  std::vector<double> log_weights_;
  std::vector<double> log_ratios_;
  std::vector<double> log_transition_;
  double log_diam_k_ = 0.0;
};

/// Active symbols G, g = #G and delta = log_ell g.
struct SupportInfo {
  std::vector<std::uint32_t> active_symbols;
  int g = 0;
  double delta = 0.0;
};

double cylinder_mass(const MeasureModel& model, const Word& w);
/// Sum of per-symbol log factors in the requested base; -inf for null cylinders.
double log_cylinder_mass(const MeasureModel& model, const Word& w,
                         LogBase base = LogBase::natural);
double cylinder_diameter(const MeasureModel& model, const Word& w);
double log_cylinder_diameter(const MeasureModel& model, const Word& w);

/// Streaming sampler for an m-distributed symbol path.
class PathSampler {
public:
  PathSampler(const MeasureModel& model, std::uint64_t seed, std::uint64_t path_index);

  std::uint32_t next();
  int previous() const { return previous_; }

private:
  std::uint32_t draw(std::span<const double> cdf);

  const MeasureModel* model_;
  StreamRng rng_;
  std::vector<double> initial_cdf_;
  std::vector<double> row_cdfs_;  // Markov only
  int previous_ = -1;
};

/// First n symbols of an m-distributed point; deterministic in (seed, path_index).
Word sample_path(const MeasureModel& model, int n, std::uint64_t seed,
                 std::uint64_t path_index = 0);

/// ell-adic families only; throws ValidationError for SelfSimilarSymbolic
/// (use spectrum's similarity_dimension instead).
SupportInfo support_info(const MeasureModel& model);

/// m0: weight 1/g on each active symbol.
MeasureModel homogeneous_measure(const MeasureModel& model);

/// Stationary vector by power iteration on (I+P)/2 (tol 1e-14, 1e5 iterations).
std::vector<double> stationary_distribution(const MarkovShift& chain);

// Model spec files ---------------------------------------------------------

MeasureModel parse_model_spec(std::string_view text, const std::string& source = "<model>");
MeasureModel load_model_file(const std::string& path);
/// Round-trip-safe text form of a model (parseable by parse_model_spec).
std::string canonical_spec(const MeasureModel& model);

}  // namespace mflab
