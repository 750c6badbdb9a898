#include "doctest.h"

#include <random>
#include <set>

#include "cofin/guessing.hpp"
#include "cofin/verify/oracles.hpp"

using namespace cofin;

namespace {

// some pair of S serves p, judged by the oracle on full fixed-point counts
bool oracle_serves(const std::vector<NatPair>& S, const PartialInjection& p, const std::vector<Word>& words,
                   const GroupContext& ctx, const Window& win) {
  for (auto [a, b] : S) {
    if (p.contains(a, b)) return true;
    if (p.in_domain(a) || p.in_range(b)) continue;
    PartialInjection q = p;
    q.add(a, b);
    bool ok = true;
    for (auto& w : words) ok = ok && oracle::very_good_extension({p}, {q}, w, ctx, win);
    if (ok) return true;
  }
  return false;
}

std::size_t count_injections(Nat sub, std::size_t k) {
  std::size_t n = 0;
  for_each_small_injection(sub, k, [&](const PartialInjection&) { return ++n, true; });
  return n;
}

}  // namespace

TEST_CASE("valid_guess_ap") {
  std::vector<Function> fam = {Function::identity()};
  auto e = cyclic_enumeration(1);
  Window win(64);
  CHECK(valid_guess_ap({{5, 6}}, fam, e, 0, win));
  CHECK_FALSE(valid_guess_ap({{5, 5}}, fam, e, 0, win));
  CHECK_FALSE(valid_guess_ap({{1, 2}, {1, 3}, {4, 5}}, fam, e, 1, win));
  CHECK_FALSE(valid_guess_ap({{1, 2}, {3, 4}}, fam, e, 0, win));  // wrong length
  Guess seven;
  for (Nat i = 0; i < 7; ++i) seven.push_back({i, i + 1});
  CHECK(valid_guess_ap(seven, fam, e, 1, win));
  seven[3].second = 9;
  seven[4].second = 9;
  CHECK_FALSE(valid_guess_ap(seven, fam, e, 1, win));
}

TEST_CASE("small injections enumeration") {
  CHECK(count_injections(3, 0) == 1);
  CHECK(count_injections(3, 1) == 10);
  CHECK(count_injections(3, 2) == 1 + 9 + 18);
  CHECK(count_injections(12, 2) == 1 + 144 + 144 * 121 / 2);
}

TEST_CASE("guess_step_ap") {
  Window win(4096);
  std::vector<Function> fam = {Function::identity(), Function::affine(1, 1), Function::affine(2, 0)};
  auto e = cyclic_enumeration(fam.size());

  // no valid guesses: plumbing only
  auto plain = guess_step_ap(fam, [](Nat) { return Guess{}; }, 30, win);
  CHECK(plain.valid == 0);
  for (Nat n = 0; n < 30; ++n) {
    CHECK(plain.p.in_domain(n));
    CHECK(plain.p.in_range(n));
  }

  // guesses read off a target permutation are all valid
  auto q = Function::rule({{2, 0, 1, 1}, {2, 1, 1, -1}});
  auto from_q = [&](Nat s) { return guess_from_target(q, fam, e, s, win).value_or(Guess{}); };
  auto r = guess_step_ap(fam, from_q, 40, win);
  CHECK(r.valid == 40);
  std::size_t common = 0;
  for (auto [a, b] : r.p.pairs()) common += q.apply(a) == b;
  CHECK(common >= r.valid);

  // random guesses, some valid
  std::mt19937_64 rng(3);
  auto noisy = [&](Nat s) {
    Guess g;
    std::set<Nat> ks, os;
    while (g.size() < 6 * s + 1) {
      Nat k = rng() % 300, o = rng() % 300;
      if (ks.count(k) || os.count(o)) continue;
      ks.insert(k), os.insert(o);
      g.push_back({k, o});
    }
    return g;
  };
  for (auto& res : {r, guess_step_ap(fam, noisy, 40, win)}) {
    for (std::size_t s = 0; s < res.size_at_entry.size(); ++s) CHECK(res.size_at_entry[s] <= 3 * s);
    // the usable pair sits within the first 2|p|+1 entries of the guess
    for (auto& rec : res.trace.records)
      if (rec.step == "P3") CHECK(rec.info.at("index") <= 2 * rec.info.at("size_at_entry"));
    // members agree with p only on pairs added before they enter the enumeration
    for (auto& rec : res.trace.records) {
      if (!rec.adds) continue;
      for (std::size_t m = 0; m < fam.size(); ++m)
        if (fam[m].apply(rec.a) == rec.b) CHECK(rec.stage < m);
    }
    CHECK(res.trace.replay()[0] == res.p);
  }
}

TEST_CASE("witness_set") {
  Window win(64);
  GroupContext none;
  std::vector<Word> xw = {Word::parse("x", none, win)};
  auto s1 = witness_set(none, Function::affine(1, 1), xw, 1, win);
  CHECK(s1.S == std::vector<NatPair>{{0, 1}, {1, 2}, {2, 3}});
  CHECK(s1.S.size() <= s1.bound);
  CHECK_THROWS_AS(witness_set(none, Function::identity(), xw, 1, win), SearchExhausted);
  CHECK(witness_set(none, Function::affine(1, 1), xw, 0, win).S.size() == 1);

  GroupContext ctx;
  ctx.add("g", Function::rule({{2, 0, 1, 1}, {2, 1, 1, -1}}));
  std::vector<Word> words = {Word::parse("x", ctx, win), Word::parse("g x", ctx, win),
                             Word::parse("x^-1 g x", ctx, win), Word::parse("x x", ctx, win)};
  auto f = Function::rule({{3, 0, 1, 1}, {3, 1, 1, 1}, {3, 2, 1, -2}});  // 3-cycles
  for (std::size_t k = 0; k <= 2; ++k) {
    auto ws = witness_set(ctx, f, words, k, win);
    CHECK(ws.S.size() <= ws.bound);
    for (auto [a, b] : ws.S) CHECK(f.apply(a) == b);
    std::size_t checked = 0, failed = 0;
    for_each_small_injection(12, k, [&](const PartialInjection& p) {
      ++checked;
      failed += !oracle_serves(ws.S, p, words, ctx, win);
      return true;
    });
    CHECK(failed == 0);
    CHECK(checked == ws.exhaustive_checked);
    // no pair of S lies on a fixed-point path of some w(f)
    PartialInjection fw;
    for (Nat a = 0; a < win.size; ++a)
      if (auto b = f.apply(a); b && *b < win.size) fw.add(a, *b);
    for (auto& w : words)
      for (Nat l = 0; l < win.size; ++l) {
        if (oracle::eval(w.letters(), {fw}, ctx, l, win) != l) continue;
        Nat z = l;
        for (auto& x : w.letters()) {
          Nat nz = *oracle::eval({x}, {fw}, ctx, z, win);
          if (x.is_var())
            for (auto s : ws.S) CHECK_FALSE((x.sign > 0 ? NatPair{z, nz} : NatPair{nz, z}) == s);
          z = nz;
        }
      }
  }
}

TEST_CASE("valid_guess_ag") {
  Window win(64);
  GroupContext ctx;
  ctx.add("g", Function::rule({{2, 0, 1, 1}, {2, 1, 1, -1}}));
  std::vector<Word> words = {Word::parse("x", ctx, win), Word::parse("x^-1 g x", ctx, win)};
  auto f = Function::affine(1, 5);
  auto ws = witness_set(ctx, f, words, 0, win);
  auto v0 = valid_guess_ag(ws.S, ctx, words, 0, win);
  CHECK(v0.valid);
  CHECK(v0.exact);
  CHECK(std::string(v0.label()) == "exact");
  CHECK_FALSE(valid_guess_ag({{1, 6}, {2, 6}}, ctx, words, 0, win).valid);
  CHECK_FALSE(valid_guess_ag({{1, 1}}, ctx, words, 0, win).valid);  // x picks up a fixed point

  VerifyOptions opt;
  opt.sub_window = 5;
  opt.sample_budget = 300;
  auto big = witness_set(ctx, f, words, 3, win, opt);
  auto v1 = valid_guess_ag(big.S, ctx, words, 1, win, opt);
  CHECK(v1.valid);
  CHECK_FALSE(v1.exact);
  CHECK(v1.checked == opt.sample_budget);
}
