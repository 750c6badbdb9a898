#include "doctest.h"

#include <algorithm>
#include <random>

#include "cofin/slaloms.hpp"

using namespace cofin;

namespace {

bool has(const FinSet& s, Nat v) { return s.find(v) != s.end(); }

// direct scan: every m that works, the least one reported
std::optional<Nat> brute_m(const Slalom& s, const Function& f, Nat W) {
  for (Nat m = 0; m < W; ++m) {
    bool ok = true;
    for (Nat n = m; n < W && ok; ++n) ok = has(s.at(n), *f.apply(n));
    if (ok) return m;
  }
  return std::nullopt;
}

// clause-by-clause over a dense [0, W)
bool brute_leq(const LOCCondition& q, const LOCCondition& p, Nat W) {
  if (q.sigma.size() < p.sigma.size()) return false;
  for (std::size_t i = 0; i < p.sigma.size(); ++i)
    if (q.sigma[i] != p.sigma[i]) return false;
  for (Nat j = 0; j < W; ++j) {
    for (Nat v : p.phi_at(j)) {
      if (!has(q.phi_at(j), v)) return false;
      if (j >= p.sigma.size() && j < q.sigma.size() && !has(q.sigma[j], v)) return false;
    }
  }
  return true;
}

// a bounded-width S from the dense family: |S(i)| = i below l, ≤ min(n, l) beyond
Slalom random_bw(std::mt19937_64& rng, Nat W, std::size_t l, Nat values) {
  std::map<Nat, FinSet> phi;
  for (Nat n = 0; n < W; ++n) {
    std::size_t want = n <= l ? n : rng() % (l + 1);
    FinSet s;
    while (s.size() < want) s.insert(rng() % values);
    if (!s.empty()) phi[n] = s;
  }
  return Slalom(phi);
}

// shrink S pointwise to get some S′ with S ≤ S′
Slalom weaken(const Slalom& s, std::mt19937_64& rng, std::size_t keep_below) {
  std::map<Nat, FinSet> phi;
  for (auto& [n, set] : s.entries()) {
    FinSet t;
    for (Nat v : set)
      if (n < keep_below || rng() % 3) t.insert(v);
    if (!t.empty()) phi[n] = t;
  }
  return Slalom(phi);
}

}  // namespace

TEST_CASE("localizes") {
  Window win(32);
  std::map<Nat, FinSet> zeros;
  for (Nat n = 1; n < 32; ++n) zeros[n] = {0};
  auto r = localizes(Slalom(zeros), Function::constant(0), win);
  CHECK(r.holds);
  CHECK(r.m == 1);
  auto none = localizes(Slalom(), Function::affine(1, 1), win);
  CHECK_FALSE(none.holds);
  CHECK_FALSE(none.m);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    std::map<Nat, FinSet> phi;
    for (Nat n = 1; n < 32; ++n)
      for (Nat k = 0; k < n && k < 3; ++k) phi[n].insert(rng() % 4);
    Slalom s(phi);
    CHECK_FALSE(s.width_violation(win));
    auto f = Function::rule({{2, rng() % 2, 0, static_cast<std::int64_t>(rng() % 4)},
                             {2, 0, 0, static_cast<std::int64_t>(rng() % 4)},
                             {2, 1, 0, static_cast<std::int64_t>(rng() % 4)}});
    CHECK(localizes(s, f, win).m == brute_m(s, f, 32));
  }
}

TEST_CASE("loc order") {
  Window win(16);
  LOCCondition p;
  p.sigma = {{}, {3}, {1, 2}};
  p.phi = {{3, {4}}, {5, {0, 9}}, {9, {7}}};
  CHECK(p.valid(win));
  CHECK(loc_leq(p, p, win));

  auto q = localize_move(p, Function::constant(5), win);
  CHECK(q.valid(win));
  CHECK(q.sigma.size() == 4);
  CHECK(q.sigma[3] == FinSet{4});
  CHECK(loc_leq(q, p, win));
  CHECK_FALSE(loc_leq(p, q, win));

  auto drop = q;
  drop.phi[5].erase(9);
  CHECK_FALSE(loc_leq(drop, p, win));
  auto skipped = p;  // σ grows without absorbing φ(3)
  skipped.sigma.push_back({});
  CHECK_FALSE(loc_leq(skipped, p, win));
  auto changed = q;
  changed.sigma[1] = {2};
  CHECK_FALSE(loc_leq(changed, p, win));

  // random pairs against the clause-by-clause check
  std::mt19937_64 rng(11);
  auto rand_cond = [&](std::size_t lh) {
    LOCCondition c;
    for (std::size_t i = 0; i < lh; ++i) {
      FinSet s;
      for (std::size_t k = 0; k < i && k < 2; ++k) s.insert(rng() % 3);
      c.sigma.push_back(s);
    }
    for (Nat n = 0; n < 16; ++n)
      for (std::size_t k = 0; k < lh && k < 2; ++k)
        if (rng() % 2) c.phi[n].insert(rng() % 3);
    return c;
  };
  int agree = 0, trues = 0;
  for (int t = 0; t < 2000; ++t) {
    auto a = rand_cond(rng() % 4);
    auto b = t % 2 ? localize_move(a, Function::constant(rng() % 3), win) : rand_cond(rng() % 5);
    bool got = loc_leq(b, a, win);
    agree += got == brute_leq(b, a, 16);
    trues += got;
  }
  CHECK(agree == 2000);
  CHECK(trues >= 1000);
}

TEST_CASE("greedy localizer") {
  Window win(256);
  std::vector<Function> consts = {Function::constant(0), Function::constant(1), Function::constant(2)};
  auto r = greedy_localizer(consts, 3, win);
  const FinSet want = {0, 1, 2};
  for (Nat n = 3; n < 256; ++n) CHECK(std::includes(r.slalom.at(n).begin(), r.slalom.at(n).end(), want.begin(), want.end()));

  auto empty = greedy_localizer({}, 5, win);
  CHECK(empty.slalom.entries().empty());
  CHECK(empty.conditions.back().sigma.size() == 5);

  std::vector<Function> ten(10, Function::identity());
  CHECK_THROWS_AS(greedy_localizer(ten, 3, win), CapacityExceeded);
  CHECK_THROWS_AS(greedy_localizer(consts, 256, win), WindowExhausted);

  std::mt19937_64 rng(5);
  std::vector<Function> reals = {Function::identity(), Function::affine(2, 1), Function::base_h()};
  for (int i = 0; i < 12; ++i)
    reals.push_back(Function::rule({{3, 0, 1, static_cast<std::int64_t>(rng() % 9)},
                                    {3, 1, 2, static_cast<std::int64_t>(rng() % 9)},
                                    {3, 2, 0, static_cast<std::int64_t>(rng() % 9)}}));
  auto g = greedy_localizer(reals, 40, win);
  CHECK_FALSE(g.slalom.width_violation(win));
  CHECK(g.trace.records.size() == 40);
  CHECK(g.conditions.size() == 41);
  for (std::size_t s = 0; s < 40; ++s) {
    CHECK(g.conditions[s + 1].valid(win));
    CHECK(loc_leq(g.conditions[s + 1], g.conditions[s], win));
    CHECK(brute_leq(g.conditions[s + 1], g.conditions[s], 256));
  }
  for (std::size_t i = 0; i < reals.size(); ++i) {
    auto m = brute_m(g.slalom, reals[i], 256);
    REQUIRE(m);
    CHECK(localizes(g.slalom, reals[i], win).m == m);
    CHECK(*m <= g.ingested_at[i]);
  }
}

TEST_CASE("bounded-width embedding") {
  Window win(24);
  std::mt19937_64 rng(3);
  int forward = 0, backward = 0;
  for (int t = 0; t < 400; ++t) {
    std::size_t l = 1 + rng() % 4;
    auto s = random_bw(rng, 24, l, 6);
    auto fs = bw_to_loc(s, win);
    CHECK(fs.valid(win));
    CHECK(fs.sigma.size() == l);
    // a weaker companion agrees with S below l, so it stays in the dense family
    auto other = t % 2 ? weaken(s, rng, l) : random_bw(rng, 24, 1 + rng() % 4, 6);
    bool bw = bw_leq(s, other, win);
    bool loc = loc_leq(fs, bw_to_loc(other, win), win);
    CHECK(bw == loc);
    forward += bw;
    backward += !bw;
  }
  CHECK(forward > 50);
  CHECK(backward > 50);
}
