#include "doctest.h"

#include <random>
#include <set>

#include "cofin/core.hpp"

using namespace cofin;

TEST_CASE("apply_partial and invert") {
  PartialInjection p{{0, 1}};
  CHECK(apply_partial(p, 0) == 1);
  CHECK_FALSE(apply_partial(p, 5));
  CHECK(apply_partial(invert(p), 1) == 0);

  CHECK(invert(PartialInjection{}).empty());
  CHECK(invert(PartialInjection{{0, 1}, {2, 3}}) == PartialInjection{{1, 0}, {3, 2}});
  CHECK(invert(PartialInjection{{5, 5}}) == PartialInjection{{5, 5}});

  PartialInjection q{{0, 1}, {2, 3}, {7, 4}};
  CHECK(invert(invert(q)) == q);
}

TEST_CASE("partial injection refuses conflicting pairs") {
  PartialInjection p{{0, 1}};
  CHECK_THROWS_AS(p.add(0, 2), InvalidArgument);
  CHECK_THROWS_AS(p.add(3, 1), InvalidArgument);
  p.add(0, 1);  // idempotent
  CHECK(p.size() == 1);
}

// walk the diagonals, no formula
static NatPair pair_by_enumeration(Nat c) {
  Nat k = 0;
  for (Nat s = 0;; ++s)
    for (Nat b = 0; b <= s; ++b, ++k)
      if (k == c) return {s - b, b};
}

TEST_CASE("Cantor pairing") {
  CHECK(pair(0, 0) == 0);
  CHECK(pair(1, 2) == 8);
  CHECK(unpair(8) == NatPair{1, 2});
  for (Nat c = 0; c < 3000; ++c) CHECK(unpair(c) == pair_by_enumeration(c));
}

TEST_CASE("pair/unpair roundtrip below 2^16") {
  // The full 2^32 grid is minutes of CPU.  unpair only does real work when it
  // picks the diagonal, so every diagonal edge for a+b < 2^17 is checked
  // exhaustively, plus a strided sweep of the grid interior.
  const Nat N = 1u << 16;
  std::size_t bad = 0;
  for (Nat s = 0; s + 1 < 2 * N; ++s) {
    Nat t = s * (s + 1) / 2;
    if (unpair(t) != NatPair{s, 0}) ++bad;
    if (unpair(t + s) != NatPair{0, s}) ++bad;
    if (s > 0 && unpair(t - 1) != NatPair{0, s - 1}) ++bad;
  }
  for (Nat a = 0; a < N; ++a) {
    for (Nat b = a % 97; b < N; b += 97)
      if (unpair(pair(a, b)) != NatPair{a, b}) ++bad;
    if (unpair(pair(a, N - 1)) != NatPair{a, N - 1}) ++bad;
    if (unpair(pair(N - 1, a)) != NatPair{N - 1, a}) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("fixed_points") {
  Window w10(10);
  std::vector<NatPair> id;
  for (Nat n = 0; n < 10; ++n) id.emplace_back(n, n);
  CHECK(fixed_points(Function::table(id), w10).size() == 10);
  CHECK(fixed_points(PartialInjection{{0, 1}, {1, 0}}, w10).empty());
  CHECK(fixed_points(Function::base_h(), Window(6)).empty());
}

TEST_CASE("base_h formula") {
  CHECK(base_h(0) == 1);
  CHECK(base_h(4) == 2);
  CHECK(base_h(3) == 5);
  for (Nat n = 0; n < 1000; ++n) CHECK(base_h_inverse(base_h(n)) == n);
}

TEST_CASE("window validation") { CHECK_THROWS_AS(Window(5, 5), InvalidArgument); }

TEST_CASE("evaluable functions: forward/inverse consistency") {
  Window win(200);
  std::vector<Function> fs = {
      Function::identity(),
      Function::base_h(),
      Function::patch({{0, 1}, {5, 9}}),
      Function::affine(1, 3),
      Function::affine(2, 0),
      Function::rule({{2, 0, 1, 1}, {2, 1, 1, -1}}),  // swap 2k <-> 2k+1
      Function::rule({{1, 0, 1, 2}}, {{0, 1}, {1, 0}}),
      Function::table({{0, 4}, {1, 2}, {2, 0}}),
  };
  for (auto& f : fs) {
    CHECK(f.injective());
    for (Nat n = 0; n < win.size; ++n) {
      auto m = f.apply(n, win);
      if (m) CHECK(f.inverse(*m, win) == n);
    }
  }
  auto sw = Function::rule({{2, 0, 1, 1}, {2, 1, 1, -1}});
  CHECK(sw.apply(4) == 5);
  CHECK(sw.apply(5) == 4);
  CHECK(sw.inverse(4) == 5);
  CHECK(Function::affine(1, 3).inverse(2) == std::nullopt);
  CHECK_THROWS_AS(Function::patch_map({{0, 1}}), InvalidArgument);
}

TEST_CASE("window semantics: results leaving [0,W) are undefined") {
  Window win(10);
  CHECK_FALSE(Function::affine(1, 1).apply(9, win));
  CHECK(Function::affine(1, 1).apply(8, win) == 9);
  CHECK_FALSE(Function::base_h().apply(9, win));
}

TEST_CASE("random partial injections stay injective") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    PartialInjection p;
    for (int k = 0; k < 30; ++k) {
      Nat a = rng() % 40, b = rng() % 40;
      if (p.can_add(a, b)) p.add(a, b);
    }
    std::set<Nat> vals;
    for (auto [a, b] : p.pairs()) {
      CHECK(vals.insert(b).second);
      CHECK(p.apply_inverse(b) == a);
    }
  }
}
