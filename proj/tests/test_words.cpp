#include "doctest.h"

#include <random>

#include "cofin/words.hpp"

using namespace cofin;

namespace {

GroupContext two_gens() {
  GroupContext ctx;
  ctx.add("g0", Function::base_h());
  ctx.add("g1", Function::rule({{2, 0, 1, 1}, {2, 1, 1, -1}}));  // 2k <-> 2k+1
  return ctx;
}

// evaluate an unreduced application-order letter list, the slow way
MaybeNat raw_eval(const std::vector<Letter>& seq, const std::vector<PartialInjection>& as, const GroupContext& ctx,
                  Nat n, const Window& win) {
  MaybeNat cur = n;
  for (auto& l : seq) {
    if (!cur) break;
    if (l.is_var()) {
      if (l.var >= as.size()) return std::nullopt;
      cur = l.sign > 0 ? as[l.var].apply(*cur) : as[l.var].apply_inverse(*cur);
    } else {
      for (auto [g, e] : l.elem.factors)
        for (int k = 0; k < std::abs(e) && cur; ++k)
          cur = e > 0 ? ctx.generator(g).apply(*cur, win) : ctx.generator(g).inverse(*cur, win);
    }
  }
  return cur;
}

}  // namespace

TEST_CASE("reduce examples") {
  GroupContext ctx = two_gens();
  Window win(32);
  CHECK(Word::reduce({Letter::x(), Letter::x(0, -1)}, ctx, win).empty());
  // [g, g⁻¹, x] written; application order is reversed
  CHECK(Word::reduce_written({Letter::gen(0), Letter::gen(0, -1), Letter::x()}, ctx, win) ==
        Word::parse("x", ctx, win));
  auto w = Word::reduce_written({Letter::gen(0), Letter::x(), Letter::x(), Letter::gen(1)}, ctx, win);
  CHECK(w.size() == 4);
  CHECK(w == Word::parse("g0 x^2 g1", ctx, win));
  // g1 is an involution: g1 g1 vanishes
  CHECK(Word::parse("g1 g1 x", ctx, win) == Word::parse("x", ctx, win));
}

TEST_CASE("length and letter_at") {
  GroupContext ctx = two_gens();
  Window win(32);
  auto w = Word::parse("g0 x^2 g1", ctx, win);
  CHECK(length(w) == 4);
  CHECK(length(Word()) == 0);
  CHECK(length(Word::parse("x^-3", ctx, win)) == 3);
  CHECK(letter_at(w, 0) == Letter::gen(1));
  CHECK(letter_at(w, 1) == Letter::x());
  CHECK(letter_at(w, 3) == Letter::gen(0));
  CHECK(initial_segment(w, 2) == Word::parse("x g1", ctx, win));
  CHECK_THROWS_AS(letter_at(w, 4), std::out_of_range);
  CHECK_THROWS_AS(initial_segment(w, 5), std::out_of_range);
}

TEST_CASE("text round trip") {
  GroupContext ctx = two_gens();
  Window win(32);
  for (const char* t : {"g0 x^2 g1", "g0^-1 x g0", "x0 x1^-1 x0^3", "x^-2 g1 x"}) {
    auto w = Word::parse(t, ctx, win);
    CHECK(Word::parse(w.str(ctx), ctx, win) == w);
  }
  auto c = Word::parse("[x0,x1]", ctx, win);
  CHECK(c == Word::parse("x0^-1 x1^-1 x0 x1", ctx, win));
  CHECK_THROWS_AS(Word::parse("q x", ctx, win), ParseError);
  CHECK_THROWS_AS(Word::parse("x^", ctx, win), ParseError);
}

TEST_CASE("conjugate decompositions") {
  GroupContext ctx = two_gens();
  Window win(32);
  auto x = Word::parse("x", ctx, win);
  auto d = conjugate_decompositions(x, ctx, win);
  REQUIRE(d.size() == 1);
  CHECK(d[0].first.empty());
  CHECK(d[0].second == x);

  auto w = Word::parse("g0^-1 x g0", ctx, win);
  d = conjugate_decompositions(w, ctx, win);
  REQUIRE(d.size() == 2);
  CHECK(d[1].first == Word::parse("g0", ctx, win));
  CHECK(d[1].second == x);

  CHECK(conjugate_decompositions(Word::parse("x^2", ctx, win), ctx, win).size() == 1);
  // h⁻¹x⁻¹hx: first letter h⁻¹, last letter x — not mutually inverse
  CHECK(conjugate_decompositions(Word::parse("g0^-1 x^-1 g0 x", ctx, win), ctx, win).size() == 1);
  CHECK(shortest_conjugate_subword(Word::parse("x^-1 g0 x", ctx, win), ctx, win) == Word::parse("g0", ctx, win));
}

TEST_CASE("evaluation paths") {
  GroupContext ctx = two_gens();
  Window win(32);
  PartialInjection p{{0, 1}};
  auto x2 = Word::parse("x^2", ctx, win);
  auto path = evaluation_path(x2, Assignment(p), ctx, 0, win);
  CHECK(path.points == std::vector<Nat>{0, 1});
  REQUIRE(path.used.size() == 1);
  CHECK(path.used[0] == UsedPair{0, 0, 1, +1});
  CHECK_FALSE(evaluate(x2, Assignment(p), ctx, 0, win));
  CHECK(evaluate(Word::parse("x", ctx, win), Assignment(p), ctx, 0, win) == 1);
  CHECK(evaluation_path(Word(), Assignment(p), ctx, 7, win).points == std::vector<Nat>{7});
  auto g = Word::parse("g1", ctx, win);
  CHECK(evaluation_path(g, Assignment(p), ctx, 6, win).points == std::vector<Nat>{6, 7});
  CHECK(evaluate(Word::parse("g0^-1 g0", ctx, win), Assignment(p), ctx, 5, win) == 5);
  // inverse letters record the pair as stored
  auto xi = evaluation_path(Word::parse("x^-1", ctx, win), Assignment(p), ctx, 1, win);
  REQUIRE(xi.used.size() == 1);
  CHECK(xi.used[0] == UsedPair{0, 0, 1, -1});
}

TEST_CASE("properties on random words") {
  GroupContext ctx = two_gens();
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 400; ++rep) {
    Window win(8 + rng() % 25);
    std::size_t len = rng() % 7;
    std::vector<Letter> seq;
    for (std::size_t i = 0; i < len; ++i) {
      switch (rng() % 4) {
        case 0: seq.push_back(Letter::gen(rng() % 2, (rng() % 2) ? 1 : -1)); break;
        default: seq.push_back(Letter::x(rng() % 2, (rng() % 2) ? 1 : -1));
      }
    }
    std::vector<PartialInjection> as(2);
    for (auto& p : as)
      for (int k = 0, n = rng() % 6; k < n; ++k) {
        Nat a = rng() % win.size, b = rng() % win.size;
        if (p.can_add(a, b)) p.add(a, b);
      }
    Word w = Word::reduce(seq, ctx, win);
    CHECK(Word::reduce(w.letters(), ctx, win) == w);  // idempotent

    // reduced form invariants
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const auto &l = w.letters()[i], &r = w.letters()[i + 1];
      CHECK_FALSE((l.is_group() && r.is_group()));
      CHECK_FALSE((l.is_var() && r.is_var() && l.var == r.var && l.sign == -r.sign));
    }

    for (Nat n = 0; n < win.size; ++n) {
      auto raw = raw_eval(seq, as, ctx, n, win);
      auto red = evaluate(w, Assignment(as), ctx, n, win);
      if (raw && red) CHECK(*raw == *red);
      auto path = evaluation_path(w, Assignment(as), ctx, n, win);
      for (std::size_t i = 0; i < path.points.size(); ++i)
        CHECK(evaluate(w.initial_segment(i), Assignment(as), ctx, n, win) == path.points[i]);
      if (red) CHECK(evaluate_inverse(w, Assignment(as), ctx, *red, win) == n);
    }

    if (!w.empty()) {
      for (auto& [u, z] : conjugate_decompositions(w, ctx, win)) CHECK(w.size() == 2 * u.size() + z.size());
      auto z = shortest_conjugate_subword(w, ctx, win);
      CHECK(shortest_conjugate_subword(z, ctx, win) == z);
    }
  }
}
