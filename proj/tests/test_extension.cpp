#include "doctest.h"

#include <random>

#include "cofin/extension.hpp"
#include "cofin/verify/oracles.hpp"

using namespace cofin;

namespace {

Word W(const char* s, const GroupContext& ctx, const Window& win) { return Word::parse(s, ctx, win); }

using Tuple = std::vector<PartialInjection>;

}  // namespace

TEST_CASE("is_good_extension examples") {
  GroupContext ctx;
  Window win(20);
  auto x = W("x", ctx, win);
  PartialInjection p{{3, 4}, {4, 7}};
  CHECK(is_good_extension(p, p, W("x^2", ctx, win), ctx, win));
  CHECK_FALSE(is_good_extension(PartialInjection{}, PartialInjection{{0, 0}}, x, ctx, win));
  CHECK(is_good_extension(PartialInjection{}, PartialInjection{{0, 1}}, x, ctx, win));
  CHECK_THROWS_AS(is_good_extension(Tuple{PartialInjection{}}, Tuple{PartialInjection{}}, W("x1", ctx, win), ctx, win),
                  ArityMismatch);
}

TEST_CASE("conjugated fixed points are witnessed") {
  // w = g⁻¹xg with g = base_h: a new fixed point l of w(q) comes from a fixed
  // point k = g(l) of x — witnessed only if x(p) already fixed k
  GroupContext ctx = GroupContext::with_base_h("g");
  Window win(20);
  auto w = W("g^-1 x g", ctx, win);
  PartialInjection p{{5, 5}};
  // q adds nothing touching 5: fixed point of w at h⁻¹(5) = 3 was already there
  CHECK(is_good_extension(p, PartialInjection{{5, 5}, {9, 2}}, w, ctx, win));
  // adding (7,7) creates w fixed point h⁻¹(7)=5 with x(p)(7) undefined
  CHECK_FALSE(is_good_extension(p, PartialInjection{{5, 5}, {7, 7}}, w, ctx, win));
}

TEST_CASE("is_very_good_extension examples") {
  GroupContext ctx;
  Window win(20);
  PartialInjection p{{1, 0}};
  CHECK(is_very_good_extension(p, p, W("x", ctx, win), ctx, win));
  CHECK_FALSE(is_very_good_extension(PartialInjection{}, PartialInjection{{0, 0}}, W("x", ctx, win), ctx, win));
  CHECK(is_very_good_extension(p, PartialInjection{{1, 0}, {0, 2}}, W("x^2", ctx, win), ctx, win));
}

TEST_CASE("finder examples") {
  GroupContext ctx;
  Window win(40);
  std::set<Nat> none;
  auto x = W("x", ctx, win);
  CHECK(find_domain_extension(Tuple{PartialInjection{}}, 0, 0, {x}, ctx, win, none) == 1);
  CHECK(find_domain_extension(Tuple{PartialInjection{{1, 0}}}, 0, 0, {W("x^2", ctx, win)}, ctx, win, none) == 2);
  std::set<Nat> all;
  for (Nat n = 0; n <= 10; ++n) all.insert(n);
  CHECK_THROWS_AS(find_domain_extension(Tuple{PartialInjection{}}, 0, 0, {x}, ctx, win, all, 10), SearchExhausted);

  CHECK(find_range_extension(Tuple{PartialInjection{}}, 0, 0, {x}, ctx, win, none) == 1);
  CHECK(find_range_extension(Tuple{PartialInjection{}}, 0, 5, {x}, ctx, win, none) == 0);
  CHECK_THROWS_AS(find_range_extension(Tuple{PartialInjection{}}, 0, 0, {x}, ctx, win, all, 10), SearchExhausted);

  CHECK(find_hitting_extension(PartialInjection{}, Function::affine(1, 1), {x}, ctx, win, none) == 0);
  CHECK_THROWS_AS(find_hitting_extension(PartialInjection{}, Function::identity(), {x}, ctx, win, none),
                  SearchExhausted);
  CHECK(find_hitting_extension(PartialInjection{{0, 1}}, Function::affine(1, 1), {x}, ctx, win, none) == 1);
}

TEST_CASE("single-pair fast path agrees with the full predicate and the oracle") {
  GroupContext ctx = GroupContext::with_base_h("h");
  std::mt19937_64 rng(5);
  const char* letters[] = {"x", "x^-1", "h", "h^-1", "x1", "x1^-1"};
  for (int rep = 0; rep < 300; ++rep) {
    Window win(24);
    std::string text;
    for (int i = 0, n = 1 + rng() % 5; i < n; ++i) text += std::string(letters[rng() % 6]) + " ";
    Word w = Word::parse(text, ctx, win);
    if (!w.has_var()) continue;
    Tuple p(2);
    for (auto& c : p)
      for (int k = 0, n = rng() % 5; k < n; ++k) {
        Nat a = rng() % win.size, b = rng() % win.size;
        if (c.can_add(a, b)) c.add(a, b);
      }
    std::size_t var = rng() % 2;
    Nat a = rng() % win.size, b = rng() % win.size;
    if (!p[var].can_add(a, b) || p[var].contains(a, b)) continue;
    Tuple q = p;
    q[var].add(a, b);
    WordSet single;
    single.add(w, ctx, win);
    bool full = is_good_extension(p, q, w, ctx, win);
    CHECK(full == oracle::good_extension(p, q, w, ctx, win));
    // is_good_pair closes under subwords, so compare against the conjunction
    bool all_sub = true;
    for (auto& sw : variable_subwords(w)) all_sub = all_sub && is_good_extension(p, q, sw, ctx, win);
    CHECK(is_good_pair(Assignment(p), var, a, b, single, ctx, win) == all_sub);

    auto nf = new_fixed_points(w, Assignment(p), var, a, b, ctx, win);
    std::set<Nat> direct;
    for (Nat l = 0; l < win.size; ++l)
      if (evaluate(w, Assignment(q), ctx, l, win) == l && !evaluate(w, Assignment(p), ctx, l, win)) direct.insert(l);
    CHECK(std::set<Nat>(nf.begin(), nf.end()) == direct);
    CHECK(is_very_good_extension(p, q, w, ctx, win) == oracle::very_good_extension(p, q, w, ctx, win));
  }
}

TEST_CASE("build_cofinitary_generator examples") {
  Window win(64);
  GroupContext triv;
  BuildSchedule s;
  s.stages = 3;
  s.window = win;
  auto r = build_cofinitary_generator(triv, s);
  for (Nat n = 0; n < 3; ++n) {
    CHECK(r.g.in_domain(n));
    CHECK(r.g.in_range(n));
  }
  // replay reproduces g
  CHECK(r.trace.replay()[0] == r.g);

  GroupContext ctx = GroupContext::with_base_h("h");
  BuildSchedule s2;
  s2.words = {W("x", ctx, win)};
  s2.targets = {Function::affine(1, 1)};
  s2.stages = 5;
  s2.window = win;
  auto r2 = build_cofinitary_generator(ctx, s2);
  std::size_t agree = 0;
  for (auto [a, b] : r2.g.pairs()) agree += (b == a + 1);
  CHECK(agree >= 5);
  CHECK(fixed_points(r2.g, win).empty());

  BuildSchedule s3 = s2;
  s3.search_bound = 0;
  s3.forbidden = {};
  CHECK_THROWS_AS(build_cofinitary_generator(ctx, s3), SearchExhausted);
}

TEST_CASE("fixed_point_profile") {
  Window win(128);
  GroupContext ctx = GroupContext::with_base_h("h");
  BuildSchedule s;
  s.words = {W("x^2", ctx, win), W("h^-1 x h", ctx, win), W("x h x^-1", ctx, win)};
  s.targets = {Function::affine(1, 3)};
  s.stages = 10;
  s.window = win;
  auto r = build_cofinitary_generator(ctx, s);
  for (auto& w : s.words) {
    auto prof = fixed_point_profile(w, r.trace, ctx, win);
    CHECK(prof.per_stage.back() == prof.shortest_at_entry);
  }
  // entering at stage 0 over the empty map
  auto p0 = fixed_point_profile(s.words[0], r.trace, ctx, win);
  CHECK(p0.entry_stage == 0);
  CHECK(p0.shortest_at_entry == 0);
  CHECK(p0.per_stage.back() == 0);
}

TEST_CASE("freeness at window scale for two fresh generators") {
  // two generators built by the same engine, each good for words in both
  Window win(96);
  GroupContext ctx;
  Tuple g(2);
  std::vector<Word> sched;
  const char* ws[] = {"x0", "x1", "x0 x1", "x0 x1^-1", "x0^2", "x1^2", "x0 x1 x0", "x1 x0 x1", "[x0,x1]"};
  WordSet active;
  for (auto t : ws) active.add(Word::parse(t, ctx, win), ctx, win);
  for (int stage = 0; stage < 14; ++stage)
    for (std::size_t v = 0; v < 2; ++v) {
      Nat a = 0;
      while (g[v].in_domain(a)) ++a;
      g[v].add(a, find_domain_extension(g, v, a, active, ctx, win));
      Nat b = 0;
      while (g[v].in_range(b)) ++b;
      g[v].add(find_range_extension(g, v, b, active, ctx, win), b);
    }
  // every reduced non-empty word of length ≤ 4 in x0, x1 moves some point
  std::vector<Letter> alphabet = {Letter::x(0, 1), Letter::x(0, -1), Letter::x(1, 1), Letter::x(1, -1)};
  std::vector<std::vector<Letter>> frontier = {{}};
  std::size_t checked = 0;
  for (int len = 1; len <= 4; ++len) {
    std::vector<std::vector<Letter>> next;
    for (auto& f : frontier)
      for (auto& l : alphabet) {
        if (!f.empty() && f.back() == l.inverse()) continue;
        auto g2 = f;
        g2.push_back(l);
        next.push_back(g2);
      }
    for (auto& seq : next) {
      Word w = Word::from_reduced(seq);
      bool moves = false;
      for (Nat n = 0; n < win.size && !moves; ++n) {
        auto v = evaluate(w, Assignment(g), ctx, n, win);
        moves = v && *v != n;
      }
      CHECK_MESSAGE(moves, w.str(ctx));
      ++checked;
    }
    frontier = std::move(next);
  }
  CHECK(checked == 4 + 12 + 36 + 108);
}
