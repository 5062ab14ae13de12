#pragma once

#include <cstdint>
#include <map>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qfslice/moebius.hpp"

namespace qfslice {

/// Rational slope p/q in lowest terms, q >= 0, with 1/0 standing for infinity.
/// Indexes the simple closed curves on the punctured torus.
class FareySlope {
public:
  static constexpr std::int64_t kMaxMagnitude = 1'000'000'000;

  /// Validates lowest terms and range; throws std::invalid_argument otherwise.
  FareySlope(std::int64_t p, std::int64_t q);

  /// Normalizes sign and divides out the gcd; (0,0) is rejected.
  static FareySlope reduced(std::int64_t p, std::int64_t q);

  /// Parses "p/q" (or a bare integer "p" meaning p/1).
  static FareySlope parse(std::string_view text);

  static FareySlope infinity() { return {1, 0}; }

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }
  bool is_infinity() const { return q_ == 0; }
  std::string to_string() const;

  friend bool operator==(const FareySlope&, const FareySlope&) = default;
  /// Orders by value on the extended real line, with 1/0 largest.
  friend bool operator<(const FareySlope& l, const FareySlope& r);

private:
  std::int64_t p_;
  std::int64_t q_;
};

enum class Letter : std::uint8_t { a, b, a_inv, b_inv };

constexpr Letter inverse_letter(Letter l) {
  switch (l) {
  case Letter::a: return Letter::a_inv;
  case Letter::b: return Letter::b_inv;
  case Letter::a_inv: return Letter::a;
  case Letter::b_inv: return Letter::b;
  }
  return l;
}

/// Freely reduced word in the marked generators alpha (a) and beta (b).
/// Printed with capitals for inverses: "AAb" is alpha^-1 alpha^-1 beta.
class GeneratorWord {
public:
  GeneratorWord() = default;
  /// Reduces the letters freely.
  explicit GeneratorWord(std::vector<Letter> letters);
  static GeneratorWord parse(std::string_view text);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::string to_string() const;

  /// Concatenation followed by free reduction.
  friend GeneratorWord operator*(const GeneratorWord& l, const GeneratorWord& r);
  friend bool operator==(const GeneratorWord&, const GeneratorWord&) = default;

private:
  std::vector<Letter> letters_;
};

/// Farey parents (left, right) of a slope with 0 < p/q < infinity:
/// left < right, left.p * right.q - left.q * right.p = -1, and the mediant
/// of the two is the slope itself. Throws std::invalid_argument for 0/1,
/// 1/0 and negative slopes.
std::pair<FareySlope, FareySlope> farey_parents(FareySlope s);

inline constexpr std::size_t kMaxWordLength = std::size_t{1} << 22;

/// The special word W_{p/q}: W_{0/1} = b, W_{1/0} = A and
/// W_{mediant} = W_{right} W_{left} for Farey neighbours. Negative slopes
/// are reached by the Dehn twist b -> a^n b from p/q + n >= 0.
GeneratorWord special_word(FareySlope s);

/// Memoized special_word, safe to share between threads.
class WordCache {
public:
  GeneratorWord get(FareySlope s);
  std::size_t size() const;

private:
  struct Key {
    std::int64_t p, q;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  mutable std::shared_mutex mutex_;
  std::map<Key, GeneratorWord> words_;
};

MoebiusMatrix evaluate_word(const GeneratorWord& w, const MoebiusMatrix& A, const MoebiusMatrix& B);

/// Tr A^n B from the recursion T_n = trA T_{n-1} - T_{n-2} seeded by
/// T_0 = trB and T_1 = trAB. Negative n runs the recursion backwards.
Complex trace_AnB(int n, Complex trA, Complex trB, Complex trAB);

} // namespace qfslice
