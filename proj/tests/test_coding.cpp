#include "doctest.h"

#include <random>

#include "cofin/coding.hpp"
#include "cofin/verify/oracles.hpp"

using namespace cofin;

namespace {

GroupContext h_ctx() {
  auto ctx = GroupContext::with_base_h("h");
  ctx.add("s", Function::rule({{2, 0, 1, 1}, {2, 1, 1, -1}}));
  return ctx;
}

// second projections of w(g) iterated straight off the oracle evaluator
std::vector<int> brute_decode(const Word& w, const PartialInjection& g, const GroupContext& ctx, const Window& win,
                              Nat m, int mode, std::size_t count) {
  std::vector<int> out;
  auto f = [&](Nat n) { return oracle::eval(w.letters(), {g}, ctx, n, win); };
  MaybeNat v = m;
  if (mode == 1) v = f(m);
  for (std::size_t i = 0; i < count && v; ++i) {
    out.push_back(static_cast<int>(unpair(*v).second));
    if (mode == 0)
      v = f(*v);
    else if (win.contains(base_h(*v)))
      v = f(base_h(*v));
    else
      v.reset();
  }
  return out;
}

}  // namespace

TEST_CASE("base_h and gamma") {
  CHECK(base_h(0) == 1);
  CHECK(base_h(4) == 2);
  CHECK(base_h(3) == 5);
  auto ctx = h_ctx();
  Window win(64);
  auto W = [&](const char* t) { return Word::parse(t, ctx, win); };
  CHECK(gamma(W("x"), ctx, win) == 0);
  CHECK(gamma(W("s^-1 x s"), ctx, win) == 1);
  CHECK(gamma(W("x x"), ctx, win) == 0);
  CHECK(gamma(W("x^-1 h x"), ctx, win) == 1);
  // the ends x and h⁻¹ are not mutually inverse
  CHECK(gamma(W("h^-1 x^-1 h x"), ctx, win) == 0);
}

TEST_CASE("decode_cfg") {
  Window win(1 << 12);
  auto id = [](Nat n) -> MaybeNat { return n; };
  CHECK(decode_cfg(id, pair(5, 1), 0, 0, win) == 1);
  CHECK(decode_cfg(id, pair(5, 0), 0, 3, win) == 0);
  auto bad = [](Nat) -> MaybeNat { return pair(3, 7); };
  CHECK_THROWS_AS(decode_cfg(bad, 0, 0, 1, win), MalformedCode);
  auto none = [](Nat) -> MaybeNat { return std::nullopt; };
  CHECK_THROWS_AS(decode_cfg(none, 0, 1, 0, win), MalformedCode);
  CHECK_THROWS_AS(decode_cfg(id, 0, 2, 0, win), InvalidArgument);
}

TEST_CASE("encode_cfg roundtrip") {
  auto ctx = h_ctx();
  Window win(1 << 12);
  auto W = [&](const char* t) { return Word::parse(t, ctx, win); };
  {
    auto r = encode_cfg(ctx, {}, {1, 0, 1}, {W("x")}, 6, win);
    REQUIRE(r.words[0].encoded == 3);
    CHECK(r.words[0].gamma == 0);
    CHECK(decode_cfg_bits(word_image(W("x"), r.g, ctx, win), r.words[0].m, 0, 3, win) == std::vector<int>{1, 0, 1});
    CHECK(r.avoid.empty());
  }
  std::mt19937_64 rng(41);
  std::vector<Word> sched = {W("x"), W("s^-1 x s"), W("x^-1 h x"), W("x s x"), W("h^-1 x^-1 h x"), W("x x h")};
  std::vector<Function> targets = {Function::affine(1, 7), Function::affine(3, 1)};
  for (int rep = 0; rep < 4; ++rep) {
    std::vector<int> z(6 + rng() % 6);
    for (auto& b : z) b = static_cast<int>(rng() % 2);
    auto r = encode_cfg(ctx, targets, z, sched, 40, win);
    bool saw0 = false, saw1 = false;
    for (std::size_t j = 0; j < sched.size(); ++j) {
      auto& cw = r.words[j];
      REQUIRE(cw.encoded == z.size());
      saw0 |= cw.gamma == 0;
      saw1 |= cw.gamma == 1;
      auto img = word_image(sched[j], r.g, ctx, win);
      CHECK(decode_cfg_bits(img, cw.m, cw.gamma, z.size(), win) == z);
      CHECK(brute_decode(sched[j], r.g, ctx, win, cw.m, cw.gamma, z.size()) == z);
    }
    CHECK(saw0);
    CHECK(saw1);
    // every climax value carries its bit
    for (auto& rec : r.trace.records)
      if (rec.step == "climax") CHECK(static_cast<std::int64_t>(unpair(rec.info.at("value")).second) == rec.info.at("bit"));
    for (std::size_t j = 0; j < targets.size(); ++j) {
      bool hit = false;
      for (auto [a, b] : r.g.pairs()) hit |= targets[j].apply(a) == b;
      CHECK(hit);
    }
    CHECK(r.trace.replay()[0] == r.g);
    for (Nat n = 0; n < 40; ++n) {
      CHECK(r.g.in_domain(n));
      CHECK(r.g.in_range(n));
    }
  }
}

TEST_CASE("encode_cfg discipline") {
  auto ctx = h_ctx();
  Window win(384);
  auto W = [&](const char* t) { return Word::parse(t, ctx, win); };
  std::vector<Word> sched = {W("x"), W("s^-1 x s"), W("x^-1 h x")};
  auto r = encode_cfg(ctx, {Function::affine(1, 3)}, {0, 1, 1, 0}, sched, 12, win);
  std::set<Nat> A;
  std::vector<PartialInjection> p(1);
  for (auto& rec : r.trace.records) {
    if (rec.step == "start") {
      A.insert(rec.b);
      continue;
    }
    std::vector<PartialInjection> q = p;
    q[0].add(rec.a, rec.b);
    if (rec.step == "domain" || rec.step == "range" || rec.step == "hit") {
      CHECK_FALSE(A.count(rec.a));
      CHECK_FALSE(A.count(rec.b));
      for (std::size_t j = 0; j <= rec.stage && j < sched.size(); ++j)
        CHECK(oracle::good_extension(p, q, sched[j], ctx, win));
    } else {
      A.erase(rec.info.at("released"));
      if (rec.info.at("frontier") >= 0) A.insert(static_cast<Nat>(rec.info.at("frontier")));
    }
    p = std::move(q);
  }
  CHECK(A == r.avoid);
  for (Nat n = 0; n < 12; ++n)
    if (!r.avoid.count(n)) CHECK(r.g.in_domain(n));

  // too few stages: partial, no error
  auto part = encode_cfg(ctx, {}, {1, 1, 0, 1, 0, 0, 1, 1}, sched, 4, win);
  CHECK(part.words[0].encoded < 8);
  CHECK(part.words[2].started);
  auto img = word_image(sched[0], part.g, ctx, win);
  auto got = decode_cfg_bits(img, part.words[0].m, 0, part.words[0].encoded, win);
  CHECK(std::equal(got.begin(), got.end(), std::vector<int>{1, 1, 0, 1, 0, 0, 1, 1}.begin()));

  CHECK_THROWS_AS(encode_cfg(GroupContext(), {}, {1}, {W("x")}, 2, win), InvalidArgument);
}
