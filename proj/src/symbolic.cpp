#include "mflab/symbolic.hpp"

#include <cmath>

#include "mflab/errors.hpp"

namespace mflab {

Alphabet::Alphabet(int ell, int dim) : ell_(ell), dim_(dim), size_(1) {
  if (ell < 2) throw ValidationError("alphabet: ell must be >= 2, got " + std::to_string(ell));
  if (dim < 1) throw ValidationError("alphabet: D must be >= 1, got " + std::to_string(dim));
  for (int j = 0; j < dim; ++j) {
    if (size_ > (1 << 24) / ell) throw ValidationError("alphabet: ell^D too large");
    size_ *= ell;
  }
}

Word::Word(Alphabet alphabet, std::vector<std::uint32_t> symbols)
    : alphabet_(alphabet), symbols_(std::move(symbols)) {
  for (auto s : symbols_) {
    if (!alphabet_.contains(s))
      throw ValidationError("word: symbol " + std::to_string(s) + " outside alphabet of size " +
                            std::to_string(alphabet_.size()));
  }
}

Word Word::prefix(int n) const {
  if (n < 0 || n > level()) throw ValidationError("word: prefix length out of range");
  return Word(alphabet_, std::vector<std::uint32_t>(symbols_.begin(), symbols_.begin() + n));
}

bool Word::has_prefix(const Word& other) const {
  if (other.alphabet_ != alphabet_ || other.level() > level()) return false;
  for (int i = 0; i < other.level(); ++i)
    if (symbols_[i] != other.symbols_[i]) return false;
  return true;
}

void Word::push_back(std::uint32_t symbol) {
  if (!alphabet_.contains(symbol))
    throw ValidationError("word: symbol " + std::to_string(symbol) + " outside alphabet");
  symbols_.push_back(symbol);
}

Word word_concat(const Word& u, const Word& v) {
  if (u.alphabet() != v.alphabet()) throw ValidationError("word_concat: alphabet mismatch");
  std::vector<std::uint32_t> out(u.symbols().begin(), u.symbols().end());
  out.insert(out.end(), v.symbols().begin(), v.symbols().end());
  return Word(u.alphabet(), std::move(out));
}

Word cube_of_point(std::span<const double> x, int n, const Alphabet& alphabet) {
  if (static_cast<int>(x.size()) != alphabet.dim())
    throw ValidationError("cube_of_point: point has " + std::to_string(x.size()) +
                          " coordinates, alphabet D=" + std::to_string(alphabet.dim()));
  if (n < 0) throw ValidationError("cube_of_point: negative level");
  std::vector<long double> frac(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] >= 0.0 && x[j] < 1.0))
      throw ValidationError("cube_of_point: coordinate " + std::to_string(x[j]) +
                            " outside [0,1)");
    frac[j] = x[j];
  }
  const int ell = alphabet.ell();
  std::vector<std::uint32_t> symbols;
  symbols.reserve(n);
  for (int level = 0; level < n; ++level) {
    std::uint32_t symbol = 0, place = 1;
    for (auto& f : frac) {
      f *= ell;
      auto digit = static_cast<std::uint32_t>(std::floor(f));
      if (digit >= static_cast<std::uint32_t>(ell)) digit = ell - 1;
      f -= digit;
      symbol += digit * place;
      place *= ell;
    }
    symbols.push_back(symbol);
  }
  return Word(alphabet, std::move(symbols));
}

double cube_length(int n, int ell) {
  if (n < 0) throw ValidationError("cube_length: negative level");
  return std::pow(static_cast<double>(ell), -n);
}

std::string to_string(const Word& w) {
  std::string out;
  const bool compact = w.alphabet().size() <= 10;
  for (int i = 0; i < w.level(); ++i) {
    if (!compact && i > 0) out += '.';
    out += std::to_string(w[i]);
  }
  return out;
}

}  // namespace mflab
