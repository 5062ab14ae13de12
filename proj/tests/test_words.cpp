#include "doctest.h"
#include "oracles.hpp"

#include <thread>

#include "qfslice/groups.hpp"
#include "qfslice/words.hpp"

using namespace qfslice;

namespace {

oracle::Mat to_oracle(const MoebiusMatrix& m) { return {m.a, m.b, m.c, m.d}; }

MarkedPair sample_pair() { return cfn_generators({{1.1, 0.0}, {0.7, 1.3}}); }

} // namespace

TEST_SUITE("words") {

TEST_CASE("slope validation") {
  CHECK_NOTHROW(FareySlope(3, 5));
  CHECK_NOTHROW(FareySlope(-3, 5));
  CHECK_THROWS_AS(FareySlope(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(FareySlope(1, -2), std::invalid_argument);
  CHECK_THROWS_AS(FareySlope(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(FareySlope(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(FareySlope(2'000'000'000, 1), std::invalid_argument);
  CHECK(FareySlope::reduced(6, 4) == FareySlope(3, 2));
  CHECK(FareySlope::infinity().is_infinity());
}

TEST_CASE("slope parsing and ordering") {
  CHECK(FareySlope::parse("3/5") == FareySlope(3, 5));
  CHECK(FareySlope::parse("7") == FareySlope(7, 1));
  CHECK(FareySlope::parse("-2/3") == FareySlope(-2, 3));
  CHECK_THROWS_AS(FareySlope::parse("x/2"), std::invalid_argument);
  CHECK(FareySlope::parse("3/5").to_string() == "3/5");
  CHECK(FareySlope(1, 2) < FareySlope(2, 3));
  CHECK(FareySlope(2, 3) < FareySlope::infinity());
  CHECK(FareySlope(-1, 1) < FareySlope(0, 1));
}

TEST_CASE("farey_parents examples") {
  auto check = [](FareySlope s, FareySlope l, FareySlope r) {
    const auto [pl, pr] = farey_parents(s);
    CHECK(pl == l);
    CHECK(pr == r);
  };
  check({1, 1}, {0, 1}, {1, 0});
  check({2, 1}, {1, 1}, {1, 0});
  check({3, 5}, {1, 2}, {2, 3});
  CHECK_THROWS_AS(farey_parents({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(farey_parents(FareySlope::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(farey_parents({-1, 2}), std::invalid_argument);
}

TEST_CASE("farey_parents are unimodular neighbours and match the descent oracle") {
  for (std::int64_t q = 1; q <= 40; ++q) {
    for (std::int64_t p = 1; p <= 3 * q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const auto [l, r] = farey_parents({p, q});
      CHECK(l.p() * r.q() - l.q() * r.p() == -1);
      CHECK(l < r);
      CHECK(l.p() + r.p() == p);
      CHECK(l.q() + r.q() == q);
      const auto [ol, orr] = oracle::farey_parents(p, q);
      CHECK(l == FareySlope(ol.first, ol.second));
      CHECK(r == FareySlope(orr.first, orr.second));
    }
  }
}

TEST_CASE("special_word examples") {
  CHECK(special_word({0, 1}).to_string() == "b");
  CHECK(special_word(FareySlope::infinity()).to_string() == "A");
  CHECK(special_word({2, 1}).to_string() == "AAb");
  CHECK(special_word({1, 2}).to_string() == "Abb");
  CHECK(special_word({1, 1}).to_string() == "Ab");
}

TEST_CASE("special_word matches the one-step descent oracle and has length p + q") {
  for (std::int64_t q = 1; q <= 20; ++q) {
    for (std::int64_t p = 0; p <= 4 * q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const auto w = special_word({p, q});
      CHECK(w.to_string() == oracle::special_word(p, q));
      if (p >= 1) CHECK(w.size() == static_cast<std::size_t>(p + q));
    }
  }
  CHECK(special_word({1000, 1}).to_string() == oracle::special_word(1000, 1));
  CHECK(special_word({377, 610}).to_string() == oracle::special_word(377, 610));
}

TEST_CASE("special words obey the mediant rule") {
  for (std::int64_t q = 2; q <= 15; ++q) {
    for (std::int64_t p = 1; p < 3 * q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const auto [l, r] = farey_parents({p, q});
      CHECK(special_word({p, q}) == special_word(r) * special_word(l));
    }
  }
}

TEST_CASE("negative slopes come from the twist substitution") {
  const auto g = sample_pair();
  const auto a = to_oracle(g.A), b = to_oracle(g.B);
  for (std::int64_t q = 1; q <= 8; ++q) {
    for (std::int64_t p = -3 * q; p < 0; ++p) {
      if (std::gcd(-p, q) != 1) continue;
      const auto w = special_word({p, q});
      CHECK(w == GeneratorWord(w.letters())); // already reduced
      const std::int64_t n = (-p + q - 1) / q;
      // W_{p/q}(A, B) = W_{(p+nq)/q}(A, A^n B)
      const auto twisted_b = oracle::mul(oracle::pow(a, static_cast<int>(n)), b);
      const auto want = oracle::eval(oracle::special_word(p + n * q, q), a, twisted_b);
      const auto got = evaluate_word(w, g.A, g.B);
      CHECK(oracle::rel_err(got.trace(), oracle::tr(want)) < 1e-9);
    }
  }
}

TEST_CASE("words are freely reduced") {
  CHECK(GeneratorWord::parse("aAb").to_string() == "b");
  CHECK(GeneratorWord::parse("abBA").empty());
  CHECK((GeneratorWord::parse("ab") * GeneratorWord::parse("Ba")).to_string() == "aa");
  CHECK_THROWS_AS(GeneratorWord::parse("abc"), std::invalid_argument);
}

TEST_CASE("evaluate_word examples") {
  const auto g = sample_pair();
  const auto id = evaluate_word(GeneratorWord{}, g.A, g.B);
  CHECK(std::abs(id.a - 1.0) + std::abs(id.b) + std::abs(id.c) + std::abs(id.d - 1.0) < 1e-15);
  const auto w = evaluate_word(GeneratorWord::parse("Ab"), g.A, g.B);
  const auto want = oracle::mul(oracle::inv(to_oracle(g.A)), to_oracle(g.B));
  CHECK(oracle::rel_err(w.trace(), oracle::tr(want)) < 1e-12);
}

TEST_CASE("special words on CFN generators match naive products for q <= 20") {
  const auto g = sample_pair();
  const auto a = to_oracle(g.A), b = to_oracle(g.B);
  for (std::int64_t q = 1; q <= 20; ++q) {
    for (std::int64_t p = 0; p <= 2 * q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const auto w = special_word({p, q});
      const auto got = evaluate_word(w, g.A, g.B).trace();
      const auto want = oracle::tr(oracle::eval(w.to_string(), a, b));
      CHECK(oracle::rel_err(got, want) < 1e-8);
    }
  }
}

TEST_CASE("trace_AnB seeds and small values") {
  CHECK(trace_AnB(0, 3.0, 4.0, 5.0) == Complex(4.0));
  CHECK(trace_AnB(1, 3.0, 4.0, 5.0) == Complex(5.0));
  CHECK(trace_AnB(2, 3.0, 3.0, 3.0) == Complex(6.0));
  CHECK(trace_AnB(3, 3.0, 3.0, 3.0) == Complex(15.0));
  CHECK(trace_AnB(4, 3.0, 3.0, 3.0) == Complex(39.0));
  const Complex ratio = trace_AnB(41, 3.0, 3.0, 3.0) / trace_AnB(40, 3.0, 3.0, 3.0);
  CHECK(std::abs(ratio - (3.0 + std::sqrt(5.0)) / 2.0) < 1e-12);
}

TEST_CASE("trace_AnB matches matrix powers in both directions") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lam(0.2, 4.0), tw(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = cfn_generators({{lam(rng), 0.0}, {tw(rng), tw(rng)}});
    const auto a = to_oracle(g.A), b = to_oracle(g.B);
    for (int n = -10; n <= 30; ++n) {
      const auto want = oracle::tr(oracle::mul(oracle::pow(a, n), b));
      CHECK(oracle::rel_err(trace_AnB(n, g.trA(), g.trB(), g.trAB()), want) < 1e-8);
    }
  }
}

TEST_CASE("W_{n/1} traces follow the recursion with A^-1 in place of A") {
  const auto g = sample_pair();
  const Complex tr_ainv_b = evaluate_word(GeneratorWord::parse("Ab"), g.A, g.B).trace();
  for (int n = 0; n <= 10; ++n) {
    const auto got = evaluate_word(special_word({n, 1}), g.A, g.B).trace();
    CHECK(oracle::rel_err(got, trace_AnB(n, g.trA(), g.trB(), tr_ainv_b)) < 1e-8);
  }
}

TEST_CASE("word length cap") {
  CHECK_THROWS_AS(special_word({999'999'999, 1}), std::length_error);
}

TEST_CASE("WordCache memoizes and is safe to share") {
  WordCache cache;
  CHECK(cache.get({5, 3}) == special_word({5, 3}));
  CHECK(cache.size() == 1);
  CHECK(cache.get({5, 3}) == special_word({5, 3}));
  CHECK(cache.size() == 1);

  std::vector<std::thread> workers;
  std::vector<int> ok(4, 1);
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&, t] {
      for (std::int64_t q = 1; q <= 12; ++q) {
        for (std::int64_t p = 1; p <= q; ++p) {
          if (std::gcd(p, q) != 1) continue;
          if (!(cache.get({p, q}) == special_word({p, q}))) ok[t] = 0;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  for (int v : ok) CHECK(v == 1);
}

}
