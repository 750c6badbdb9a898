#include "cofin/extension.hpp"

#include <algorithm>
#include <string>

namespace cofin {

std::vector<Word> variable_subwords(const Word& w) {
  std::vector<Word> out;
  std::size_t L = w.size();
  for (std::size_t len = L; len >= 1; --len) {
    for (std::size_t from = 0; from + len <= L; ++from) {
      Word f = w.factor(from, from + len);
      if (!f.has_var()) continue;
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(std::move(f));
    }
  }
  return out;
}

WordSet::WordSet(std::span<const Word> ws, const GroupContext& ctx, const Window& win) {
  for (auto& w : ws) add(w, ctx, win);
}

void WordSet::add(const Word& w, const GroupContext& ctx, const Window& win) {
  for (auto& f : variable_subwords(w)) {
    bool seen = std::any_of(items_.begin(), items_.end(), [&](const Item& it) { return it.w == f; });
    if (!seen) items_.push_back({f, conjugate_depth(f, ctx, win)});
  }
}

bool fixed_point_witnessed(const Word& w, std::size_t depth, const Assignment& p, const Assignment& q, Nat l,
                           const GroupContext& ctx, const Window& win) {
  const auto& ls = w.letters();
  std::size_t L = ls.size();
  for (std::size_t t = 1; t <= depth; ++t) {
    auto k = run_letters(ls, 0, t, q, ctx, l, win);
    if (!k) continue;
    if (run_letters(ls, t, L - t, p, ctx, *k, win) == k) return true;
  }
  return false;
}

namespace {

void check_arity(std::span<const PartialInjection> p, std::span<const PartialInjection> q, const Word& w) {
  if (p.size() != q.size())
    throw ArityMismatch("good-extension", "p has " + std::to_string(p.size()) + " components, q has " +
                                              std::to_string(q.size()));
  if (w.arity() > p.size())
    throw ArityMismatch("good-extension", "word uses variable x" + std::to_string(w.arity() - 1) +
                                              " but the tuple has " + std::to_string(p.size()) + " components");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!p[i].subset_of(q[i])) throw InvalidArgument("good-extension", "p is not contained in q");
}

}  // namespace

bool is_good_extension(std::span<const PartialInjection> p, std::span<const PartialInjection> q, const Word& w,
                       const GroupContext& ctx, const Window& win) {
  check_arity(p, q, w);
  Assignment ap(p), aq(q);
  std::size_t depth = conjugate_depth(w, ctx, win);
  for (Nat l = 0; l < win.size; ++l) {
    if (evaluate(w, aq, ctx, l, win) != l) continue;
    if (evaluate(w, ap, ctx, l, win)) continue;
    if (!fixed_point_witnessed(w, depth, ap, aq, l, ctx, win)) return false;
  }
  return true;
}

bool is_good_extension(const PartialInjection& p, const PartialInjection& q, const Word& w, const GroupContext& ctx,
                       const Window& win) {
  return is_good_extension(std::span<const PartialInjection>(&p, 1), std::span<const PartialInjection>(&q, 1), w,
                           ctx, win);
}

bool is_very_good_extension(std::span<const PartialInjection> p, std::span<const PartialInjection> q,
                            const Word& w, const GroupContext& ctx, const Window& win) {
  check_arity(p, q, w);
  Assignment ap(p), aq(q);
  for (Nat l = 0; l < win.size; ++l)
    if (evaluate(w, aq, ctx, l, win) == l && evaluate(w, ap, ctx, l, win) != l) return false;
  return true;
}

bool is_very_good_extension(const PartialInjection& p, const PartialInjection& q, const Word& w,
                            const GroupContext& ctx, const Window& win) {
  return is_very_good_extension(std::span<const PartialInjection>(&p, 1),
                                std::span<const PartialInjection>(&q, 1), w, ctx, win);
}

std::vector<Nat> new_fixed_points(const Word& w, const Assignment& p, std::size_t var, Nat a, Nat b,
                                  const GroupContext& ctx, const Window& win) {
  Assignment q = p.with_extra(var, a, b);
  const auto& ls = w.letters();
  std::size_t L = ls.size();
  std::vector<Nat> out;
  for (std::size_t i = 0; i < L; ++i) {
    const Letter& x = ls[i];
    if (!x.is_var() || x.var != var) continue;
    // the step at i crosses the new pair
    Nat before = x.sign > 0 ? a : b;
    Nat after = x.sign > 0 ? b : a;
    auto end = run_letters(ls, i + 1, L, q, ctx, after, win);
    if (!end) continue;
    auto start = run_letters_inverse(ls, 0, i, q, ctx, before, win);
    if (!start || *start != *end || !win.contains(*start)) continue;
    if (std::find(out.begin(), out.end(), *start) == out.end()) out.push_back(*start);
  }
  return out;
}

PairVerdict judge_pair(const Assignment& p, std::size_t var, Nat a, Nat b, const WordSet& words,
                       const GroupContext& ctx, const Window& win) {
  PairVerdict v;
  Assignment q = p.with_extra(var, a, b);
  for (auto& it : words.items()) {
    for (Nat l : new_fixed_points(it.w, p, var, a, b, ctx, win)) {
      v.very_good = false;
      if (fixed_point_witnessed(it.w, it.depth, p, q, l, ctx, win)) continue;
      v.good = false;
      if (v.self_caused) {
        auto path = evaluation_path(it.w, q, ctx, l, win);
        for (auto& u : path.used)
          if (!(u.var == var && u.a == a && u.b == b)) v.self_caused = false;
      }
    }
  }
  return v;
}

bool is_good_pair(const Assignment& p, std::size_t var, Nat a, Nat b, const WordSet& words, const GroupContext& ctx,
                  const Window& win) {
  Assignment q = p.with_extra(var, a, b);
  for (auto& it : words.items())
    for (Nat l : new_fixed_points(it.w, p, var, a, b, ctx, win))
      if (!fixed_point_witnessed(it.w, it.depth, p, q, l, ctx, win)) return false;
  return true;
}

namespace {

bool accept(const Assignment& p, std::size_t var, Nat a, Nat b, const WordSet& words, const GroupContext& ctx,
            const Window& win, const SearchOptions& opt) {
  if (!opt.stats && !opt.very_good) return is_good_pair(p, var, a, b, words, ctx, win);
  PairVerdict v = judge_pair(p, var, a, b, words, ctx, win);
  bool ok = opt.very_good ? v.very_good : v.good;
  if (!ok && opt.stats) {
    ++opt.stats->bad;
    if (v.self_caused) ++opt.stats->self_caused;
  }
  return ok;
}

bool skip(Nat c, const SearchOptions& opt) {
  if (opt.forbidden && opt.forbidden->count(c)) return true;
  if (opt.admissible && !opt.admissible(c)) return true;
  return false;
}

std::string ctx_string(std::size_t var, const char* what, Nat v, Nat bound) {
  return "var=" + std::to_string(var) + " " + what + "=" + std::to_string(v) + " bound=" + std::to_string(bound);
}

const PartialInjection& component(std::span<const PartialInjection> p, std::size_t var) {
  static const PartialInjection empty;
  return var < p.size() ? p[var] : empty;
}

}  // namespace

Nat find_domain_extension(std::span<const PartialInjection> p, std::size_t var, Nat a, const WordSet& words,
                          const GroupContext& ctx, const Window& win, const SearchOptions& opt) {
  const PartialInjection& pv = component(p, var);
  if (pv.in_domain(a)) throw InvalidArgument("domain-extension", "a already in dom(p)");
  Nat bound = opt.bound.value_or(win.size - 1);
  Assignment ap(p);
  for (Nat b = 0; b <= bound; ++b) {
    if (skip(b, opt)) continue;
    if (pv.in_range(b)) {
      if (opt.stats) ++opt.stats->occupied;
      continue;
    }
    if (accept(ap, var, a, b, words, ctx, win, opt)) return b;
  }
  throw SearchExhausted("domain-extension", ctx_string(var, "a", a, bound));
}

Nat find_range_extension(std::span<const PartialInjection> p, std::size_t var, Nat b, const WordSet& words,
                         const GroupContext& ctx, const Window& win, const SearchOptions& opt) {
  const PartialInjection& pv = component(p, var);
  if (pv.in_range(b)) throw InvalidArgument("range-extension", "b already in ran(p)");
  Nat bound = opt.bound.value_or(win.size - 1);
  Assignment ap(p);
  for (Nat a = 0; a <= bound; ++a) {
    if (skip(a, opt)) continue;
    if (pv.in_domain(a)) {
      if (opt.stats) ++opt.stats->occupied;
      continue;
    }
    if (accept(ap, var, a, b, words, ctx, win, opt)) return a;
  }
  throw SearchExhausted("range-extension", ctx_string(var, "b", b, bound));
}

Nat find_hitting_extension(std::span<const PartialInjection> p, std::size_t var, const PartialFn& f,
                           const WordSet& words, const GroupContext& ctx, const Window& win,
                           const SearchOptions& opt) {
  const PartialInjection& pv = component(p, var);
  Nat bound = opt.bound.value_or(win.size - 1);
  Assignment ap(p);
  for (Nat n = 0; n <= bound; ++n) {
    if (skip(n, opt)) continue;
    auto v = f(n);
    if (!v || skip(*v, opt)) continue;
    if (pv.in_domain(n) || pv.in_range(*v)) {
      if (opt.stats) ++opt.stats->occupied;
      continue;
    }
    if (accept(ap, var, n, *v, words, ctx, win, opt)) return n;
  }
  throw SearchExhausted("hitting-extension", "var=" + std::to_string(var) + " bound=" + std::to_string(bound));
}

Nat find_domain_extension(const std::vector<PartialInjection>& p, std::size_t var, Nat a,
                          const std::vector<Word>& words, const GroupContext& ctx, const Window& win,
                          const std::set<Nat>& forbidden, std::optional<Nat> search_bound) {
  SearchOptions opt;
  opt.forbidden = &forbidden;
  opt.bound = search_bound;
  return find_domain_extension(p, var, a, WordSet(words, ctx, win), ctx, win, opt);
}

Nat find_range_extension(const std::vector<PartialInjection>& p, std::size_t var, Nat b,
                         const std::vector<Word>& words, const GroupContext& ctx, const Window& win,
                         const std::set<Nat>& forbidden, std::optional<Nat> search_bound) {
  SearchOptions opt;
  opt.forbidden = &forbidden;
  opt.bound = search_bound;
  return find_range_extension(p, var, b, WordSet(words, ctx, win), ctx, win, opt);
}

Nat find_hitting_extension(const PartialInjection& p, const Function& f, const std::vector<Word>& words,
                           const GroupContext& ctx, const Window& win, const std::set<Nat>& forbidden,
                           std::optional<Nat> search_bound) {
  SearchOptions opt;
  opt.forbidden = &forbidden;
  opt.bound = search_bound;
  return find_hitting_extension(std::span<const PartialInjection>(&p, 1), 0, [&f](Nat n) { return f.apply(n); },
                                WordSet(words, ctx, win), ctx, win, opt);
}

std::vector<std::size_t> fixed_point_counts(const std::vector<Word>& ws, std::span<const PartialInjection> g,
                                            const GroupContext& ctx, const Window& win) {
  std::vector<std::size_t> out;
  out.reserve(ws.size());
  Assignment as(g);
  for (auto& w : ws) out.push_back(fixed_points(w, as, ctx, win).size());
  return out;
}

namespace {

Nat least_missing(const std::function<bool(Nat)>& taken) {
  Nat n = 0;
  while (taken(n)) ++n;
  return n;
}

}  // namespace

BuildResult build_cofinitary_generator(const GroupContext& ctx, const BuildSchedule& sch) {
  const Window& win = sch.window;
  std::vector<PartialInjection> g(1);
  Trace tr;
  for (auto& w : sch.words) tr.word_ids.push_back(w.str(ctx));

  WordSet active;
  SearchOptions opt;
  opt.forbidden = &sch.forbidden;
  opt.bound = sch.search_bound;

  auto record = [&](std::size_t s, const char* step, Nat a, Nat b) {
    g[0].add(a, b);
    TraceRecord r;
    r.stage = s;
    r.step = step;
    r.var = 0;
    r.a = a;
    r.b = b;
    r.fp = fixed_point_counts(sch.words, g, ctx, win);
    tr.records.push_back(std::move(r));
  };

  for (std::size_t s = 0; s < sch.stages; ++s) {
    if (s < sch.words.size()) active.add(sch.words[s], ctx, win);
    try {
      Nat a = least_missing([&](Nat n) { return g[0].in_domain(n) || sch.forbidden.count(n); });
      Nat b = find_domain_extension(g, 0, a, active, ctx, win, opt);
      record(s, "domain", a, b);

      b = least_missing([&](Nat n) { return g[0].in_range(n) || sch.forbidden.count(n); });
      a = find_range_extension(g, 0, b, active, ctx, win, opt);
      record(s, "range", a, b);

      for (std::size_t j = 0; j <= s && j < sch.targets.size(); ++j) {
        const Function& f = sch.targets[j];
        Nat n = find_hitting_extension(g, 0, [&f](Nat k) { return f.apply(k); }, active, ctx, win, opt);
        record(s, "hit", n, *f.apply(n));
        tr.records.back().info["target"] = static_cast<std::int64_t>(j);
      }
    } catch (const SearchExhausted& e) {
      throw SearchExhausted("stage " + std::to_string(s) + " " + e.phase(), e.context());
    }
  }
  return {g[0], std::move(tr)};
}

FixedPointProfile fixed_point_profile(const Word& w, const Trace& trace, const GroupContext& ctx, const Window& win,
                                      std::optional<std::size_t> entry_stage) {
  FixedPointProfile prof;
  if (entry_stage) {
    prof.entry_stage = *entry_stage;
  } else {
    auto id = w.str(ctx);
    auto it = std::find(trace.word_ids.begin(), trace.word_ids.end(), id);
    if (it == trace.word_ids.end()) throw InvalidArgument("fixed-point-profile", "word '" + id + "' not scheduled");
    prof.entry_stage = static_cast<std::size_t>(it - trace.word_ids.begin());
  }
  std::size_t stages = trace.stage_count();
  for (std::size_t s = 0; s < stages; ++s) {
    auto g = trace.state_before_stage(s + 1);
    prof.per_stage.push_back(fixed_points(w, Assignment(g), ctx, win).size());
  }
  prof.shortest = shortest_conjugate_subword(w, ctx, win);
  auto gt = trace.state_before_stage(prof.entry_stage);
  prof.shortest_at_entry = fixed_points(prof.shortest, Assignment(gt), ctx, win).size();
  return prof;
}

}  // namespace cofin
