#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mflab {

/// Symbols coding the ell-adic subcubes of [0,1)^D: k = ell^D symbols.
class Alphabet {
public:
  Alphabet(int ell, int dim = 1);

  int ell() const { return ell_; }
  int dim() const { return dim_; }
  int size() const { return size_; }
  bool contains(std::uint32_t symbol) const { return symbol < static_cast<std::uint32_t>(size_); }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
  int ell_;
  int dim_;
  int size_;
};

/// Finite word over an alphabet; the empty word codes the unit cube.
class Word {
public:
  explicit Word(Alphabet alphabet) : alphabet_(alphabet) {}
  Word(Alphabet alphabet, std::vector<std::uint32_t> symbols);
  Word(Alphabet alphabet, std::initializer_list<std::uint32_t> symbols)
      : Word(alphabet, std::vector<std::uint32_t>(symbols)) {}

  const Alphabet& alphabet() const { return alphabet_; }
  int level() const { return static_cast<int>(symbols_.size()); }
  bool empty() const { return symbols_.empty(); }
  std::uint32_t operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const std::uint32_t> symbols() const { return symbols_; }

  Word prefix(int n) const;
  bool has_prefix(const Word& other) const;
  void push_back(std::uint32_t symbol);

  friend bool operator==(const Word&, const Word&) = default;

private:
  Alphabet alphabet_;
  std::vector<std::uint32_t> symbols_;
};

/// u followed by v. Throws ValidationError when the alphabets differ.
Word word_concat(const Word& u, const Word& v);

/// Code of the generation-n half-open cube containing x. Coordinate digits
/// are packed row-major: symbol = sum_j digit_j * ell^j.
Word cube_of_point(std::span<const double> x, int n, const Alphabet& alphabet);

/// ell^-n.
double cube_length(int n, int ell);

/// "0110" when k <= 10, dot-separated otherwise ("3.1.12").
std::string to_string(const Word& w);

}  // namespace mflab
