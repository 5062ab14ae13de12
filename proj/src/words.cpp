#include "qfslice/words.hpp"

#include <charconv>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace qfslice {

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

GeneratorWord repeat(const GeneratorWord& w, std::int64_t k) {
  std::vector<Letter> out;
  out.reserve(w.size() * static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) {
    out.insert(out.end(), w.letters().begin(), w.letters().end());
  }
  return GeneratorWord(std::move(out));
}

void check_length(std::size_t n) {
  if (n > kMaxWordLength) {
    throw std::length_error("special word exceeds " + std::to_string(kMaxWordLength) + " letters");
  }
}

} // namespace

FareySlope::FareySlope(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
  if (q < 0) throw std::invalid_argument("slope denominator must be >= 0");
  if (q == 0 && p != 1) throw std::invalid_argument("the only slope with q = 0 is 1/0");
  if (q > kMaxMagnitude || p > kMaxMagnitude || p < -kMaxMagnitude) {
    throw std::invalid_argument("slope entries exceed 1e9");
  }
  if (std::gcd(p, q) != 1) throw std::invalid_argument("slope not in lowest terms");
}

FareySlope FareySlope::reduced(std::int64_t p, std::int64_t q) {
  if (p == 0 && q == 0) throw std::invalid_argument("0/0 is not a slope");
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p, q);
  return {p / g, q / g};
}

FareySlope FareySlope::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return {parse_int(text), 1};
  return {parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))};
}

std::string FareySlope::to_string() const { return std::to_string(p_) + "/" + std::to_string(q_); }

bool operator<(const FareySlope& l, const FareySlope& r) {
  // p1/q1 < p2/q2 with q >= 0; 1/0 compares as +infinity.
  return static_cast<__int128>(l.p_) * r.q_ < static_cast<__int128>(r.p_) * l.q_;
}

GeneratorWord::GeneratorWord(std::vector<Letter> letters) {
  letters_.reserve(letters.size());
  for (Letter l : letters) {
    if (!letters_.empty() && letters_.back() == inverse_letter(l)) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

GeneratorWord GeneratorWord::parse(std::string_view text) {
  std::vector<Letter> out;
  for (char ch : text) {
    switch (ch) {
    case 'a': out.push_back(Letter::a); break;
    case 'b': out.push_back(Letter::b); break;
    case 'A': out.push_back(Letter::a_inv); break;
    case 'B': out.push_back(Letter::b_inv); break;
    case ' ': break;
    default: throw std::invalid_argument(std::string("unknown letter '") + ch + "'");
    }
  }
  return GeneratorWord(std::move(out));
}

std::string GeneratorWord::to_string() const {
  static constexpr char kGlyph[] = {'a', 'b', 'A', 'B'};
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(kGlyph[static_cast<int>(l)]);
  return s;
}

GeneratorWord operator*(const GeneratorWord& l, const GeneratorWord& r) {
  std::vector<Letter> out = l.letters_;
  out.insert(out.end(), r.letters_.begin(), r.letters_.end());
  return GeneratorWord(std::move(out));
}

std::pair<FareySlope, FareySlope> farey_parents(FareySlope s) {
  const std::int64_t p = s.p();
  const std::int64_t q = s.q();
  if (q == 0 || p == 0) throw std::invalid_argument("base slopes 0/1 and 1/0 have no Farey parents");
  if (p < 0) throw std::invalid_argument("farey_parents expects a positive slope");

  // Left parent a/b has p*b - q*a = 1 with 1 <= b <= q, i.e. b = p^-1 mod q.
  std::int64_t old_r = p % q, r = q, old_s = 1, t = 0;
  while (r != 0) {
    const std::int64_t quot = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - quot * r};
    std::tie(old_s, t) = std::pair{t, old_s - quot * t};
  }
  std::int64_t b = ((old_s % q) + q) % q;
  if (b == 0) b = q;
  const std::int64_t a = static_cast<std::int64_t>((static_cast<__int128>(p) * b - 1) / q);
  return {FareySlope(a, b), FareySlope(p - a, q - b)};
}

GeneratorWord special_word(FareySlope s) {
  const GeneratorWord beta({Letter::b});
  const GeneratorWord alpha_inv({Letter::a_inv});
  if (s == FareySlope(0, 1)) return beta;
  if (s.is_infinity()) return alpha_inv;

  if (s.p() < 0) {
    // Twist b -> a^n b maps the word of (p + n q)/q onto the word of p/q.
    const std::int64_t n = (-s.p() + s.q() - 1) / s.q();
    const GeneratorWord base = special_word(FareySlope(s.p() + n * s.q(), s.q()));
    check_length(base.size() * static_cast<std::size_t>(n + 1));
    std::vector<Letter> out;
    for (Letter l : base.letters()) {
      if (l == Letter::b) {
        out.insert(out.end(), static_cast<std::size_t>(n), Letter::a);
        out.push_back(Letter::b);
      } else if (l == Letter::b_inv) {
        out.push_back(Letter::b_inv);
        out.insert(out.end(), static_cast<std::size_t>(n), Letter::a_inv);
      } else {
        out.push_back(l);
      }
    }
    return GeneratorWord(std::move(out));
  }

  check_length(static_cast<std::size_t>(s.p() + s.q()));

  // Stern-Brocot descent, taking each run of same-side moves in one step:
  // k moves on the left give L <- R^k L, on the right R <- R L^k.
  const std::int64_t p = s.p(), q = s.q();
  std::int64_t a = 0, b = 1, c = 1, d = 0; // L = a/b, R = c/d
  GeneratorWord wl = beta, wr = alpha_inv;
  for (;;) {
    if (a + c == p && b + d == q) return wr * wl;
    const __int128 num = static_cast<__int128>(p) * b - static_cast<__int128>(a) * q; // > 0
    const __int128 den = static_cast<__int128>(c) * q - static_cast<__int128>(p) * d; // > 0
    if (num > den) {
      const auto k = static_cast<std::int64_t>((num - 1) / den);
      wl = repeat(wr, k) * wl;
      a += k * c;
      b += k * d;
    } else {
      const auto k = static_cast<std::int64_t>((den - 1) / num);
      wr = wr * repeat(wl, k);
      c += k * a;
      d += k * b;
    }
  }
}

GeneratorWord WordCache::get(FareySlope s) {
  const Key key{s.p(), s.q()};
  {
    std::shared_lock lock(mutex_);
    if (auto it = words_.find(key); it != words_.end()) return it->second;
  }
  GeneratorWord w = special_word(s);
  std::unique_lock lock(mutex_);
  return words_.try_emplace(key, std::move(w)).first->second;
}

std::size_t WordCache::size() const {
  std::shared_lock lock(mutex_);
  return words_.size();
}

MoebiusMatrix evaluate_word(const GeneratorWord& w, const MoebiusMatrix& A, const MoebiusMatrix& B) {
  const MoebiusMatrix gens[] = {A, B, inverse(A), inverse(B)};
  MoebiusMatrix acc = MoebiusMatrix::identity();
  for (Letter l : w.letters()) acc = mul(acc, gens[static_cast<int>(l)]);
  return acc;
}

Complex trace_AnB(int n, Complex trA, Complex trB, Complex trAB) {
  if (n == 0) return trB;
  if (n == 1) return trAB;
  Complex prev = trB, cur = trAB;
  if (n > 1) {
    for (int k = 2; k <= n; ++k) {
      const Complex next = trA * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  // Backwards: T_{k-1} = trA T_k - T_{k+1}.
  Complex hi = trAB, lo = trB;
  for (int k = 0; k > n; --k) {
    const Complex below = trA * lo - hi;
    hi = lo;
    lo = below;
  }
  return lo;
}

} // namespace qfslice
