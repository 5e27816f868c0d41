#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace mflab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Logarithm base used for tau tables, S-processes and iterated logs.
/// `ell` means the grid base of the model (1/r for equal-ratio IFS).
enum class LogBase { natural, ell, two };

std::string_view to_string(LogBase base);
LogBase parse_log_base(std::string_view text);

/// ln of the base; `ln_ell` must be supplied for LogBase::ell.
inline double ln_of_base(LogBase base, double ln_ell) {
  switch (base) {
    case LogBase::natural: return 1.0;
    case LogBase::two: return std::log(2.0);
    case LogBase::ell: return ln_ell;
  }
  return 1.0;
}

// log(sum exp(x_i)), ignoring -inf terms. Empty or all -inf -> -inf.
template <typename T>
T log_sum_exp(std::span<const T> xs) {
  T hi = -std::numeric_limits<T>::infinity();
  for (T x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  T sum = 0;
  for (T x : xs) {
    if (x != -std::numeric_limits<T>::infinity()) sum += std::exp(x - hi);
  }
  return hi + std::log(sum);
}

/// Streaming log-sum-exp with running rescale.
template <typename T>
class LogSumAccumulator {
public:
  void add(T x) {
    if (x == -std::numeric_limits<T>::infinity()) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1;
      max_ = x;
    }
  }
  T value() const {
    return sum_ == 0 ? -std::numeric_limits<T>::infinity() : max_ + std::log(sum_);
  }

private:
  T max_ = -std::numeric_limits<T>::infinity();
  T sum_ = 0;
};

/// Neumaier compensated summation.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace mflab
