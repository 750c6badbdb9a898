#include "cofin/embedding.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <variant>

namespace cofin {

// ---- presentations ----

Presentation Presentation::free(std::size_t n) {
  std::vector<Factor> fs;
  for (std::size_t i = 0; i < n; ++i) fs.push_back({{i}, {0}});
  auto p = free_product(fs);
  p.kind_ = "free";
  return p;
}

Presentation Presentation::abelian(std::vector<Nat> orders) {
  Factor f;
  for (std::size_t i = 0; i < orders.size(); ++i) f.gens.push_back(i);
  f.orders = std::move(orders);
  auto p = free_product({f});
  p.kind_ = "abelian";
  return p;
}

Presentation Presentation::free_product(std::vector<Factor> factors) {
  Presentation p;
  p.kind_ = "free-product";
  p.supported_ = true;
  for (auto& f : factors) {
    if (f.gens.size() != f.orders.size()) throw InvalidArgument("presentation", "factor gens/orders mismatch");
    for (auto g : f.gens) p.n_ = std::max(p.n_, g + 1);
  }
  p.factor_of_.assign(p.n_, SIZE_MAX);
  p.slot_of_.assign(p.n_, 0);
  for (std::size_t fi = 0; fi < factors.size(); ++fi)
    for (std::size_t s = 0; s < factors[fi].gens.size(); ++s) {
      auto g = factors[fi].gens[s];
      if (p.factor_of_[g] != SIZE_MAX) throw InvalidArgument("presentation", "generator in two factors");
      p.factor_of_[g] = fi;
      p.slot_of_[g] = s;
    }
  for (std::size_t g = 0; g < p.n_; ++g)
    if (p.factor_of_[g] == SIZE_MAX) throw InvalidArgument("presentation", "generator without a factor");
  p.factors_ = std::move(factors);
  // relators: orders and commutators inside each factor
  for (auto& f : p.factors_) {
    for (std::size_t s = 0; s < f.gens.size(); ++s) {
      if (f.orders[s] == 0) continue;
      std::vector<Letter> seq(f.orders[s], Letter::x(f.gens[s], 1));
      p.relators_.push_back(Word::from_reduced(seq));
    }
    for (std::size_t a = 0; a < f.gens.size(); ++a)
      for (std::size_t b = a + 1; b < f.gens.size(); ++b) {
        // [x_a, x_b] = x_a⁻¹ x_b⁻¹ x_a x_b, application order reversed
        std::size_t xa = f.gens[a], xb = f.gens[b];
        p.relators_.push_back(
            Word::from_reduced({Letter::x(xb, 1), Letter::x(xa, 1), Letter::x(xb, -1), Letter::x(xa, -1)}));
      }
  }
  return p;
}

Presentation Presentation::unsupported(std::size_t n, std::vector<Word> relators) {
  Presentation p;
  p.n_ = n;
  p.relators_ = std::move(relators);
  p.kind_ = "unsupported";
  return p;
}

std::size_t Presentation::max_relator_length() const {
  std::size_t m = 0;
  for (auto& r : relators_) m = std::max(m, r.size());
  return m;
}

void Presentation::require() const {
  if (!supported_) throw UnsupportedPresentation("presentation", "no normal form for " + kind_);
}

std::optional<Nat> Presentation::order() const {
  Nat total = 1;
  for (auto& f : factors_)
    for (auto o : f.orders) {
      if (o == 0) return std::nullopt;
      total *= o;
    }
  if (factors_.size() > 1) {
    // a free product of two nontrivial factors is infinite
    std::size_t nontrivial = 0;
    for (auto& f : factors_) {
      Nat t = 1;
      for (auto o : f.orders) t *= o;
      nontrivial += t > 1;
    }
    if (nontrivial > 1) return std::nullopt;
  }
  return total;
}

HElem Presentation::then(const HElem& elem, std::size_t var, int sign) const {
  require();
  if (var >= n_) throw ArityMismatch("presentation", "variable x" + std::to_string(var));
  HElem r = elem;
  auto fi = factor_of_[var];
  auto& f = factors_[fi];
  if (r.syl.empty() || r.syl.back().first != fi) r.syl.push_back({fi, std::vector<std::int64_t>(f.gens.size(), 0)});
  auto& ex = r.syl.back().second;
  auto s = slot_of_[var];
  ex[s] += sign;
  if (auto o = static_cast<std::int64_t>(f.orders[s]); o > 0) ex[s] = ((ex[s] % o) + o) % o;
  if (std::all_of(ex.begin(), ex.end(), [](std::int64_t e) { return e == 0; })) r.syl.pop_back();
  return r;
}

HElem Presentation::normal_form(std::span<const Letter> letters) const {
  require();
  HElem e;
  for (auto& l : letters) {
    if (!l.is_var()) throw InvalidArgument("presentation", "group letter in a variable word");
    e = then(e, l.var, l.sign);
  }
  return e;
}

HElem Presentation::normal_form(const Word& w) const { return normal_form(std::span<const Letter>(w.letters())); }

bool RelationReport::pass() const {
  for (auto& e : entries)
    if (!e.violations.empty()) return false;
  return true;
}

RelationReport check_relations(std::span<const PartialInjection> p, const Presentation& pres, const Window& win) {
  RelationReport rep;
  GroupContext none;
  Assignment as(p);
  for (auto& r : pres.relators()) {
    RelationReport::Entry e;
    e.relator = r.str(none);
    for (Nat n = 0; n < win.size; ++n) {
      auto v = evaluate(r, as, none, n, win);
      if (!v) continue;
      ++e.defined;
      if (*v != n) e.violations.push_back(n);
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

// ---- closure ----

namespace {

std::size_t default_depth(const Presentation& pres) { return 2 * pres.max_relator_length(); }

std::vector<Nat> support(std::span<const PartialInjection> p) {
  std::set<Nat> s;
  for (auto& c : p)
    for (auto [a, b] : c.pairs()) {
      s.insert(a);
      s.insert(b);
    }
  return {s.begin(), s.end()};
}

// all states (point, H-value of the walked word) reachable from (start, e)
std::set<std::pair<Nat, HElem>> explore(std::span<const PartialInjection> p, const Presentation& pres, Nat start,
                                        std::size_t depth) {
  std::set<std::pair<Nat, HElem>> seen{{start, HElem{}}};
  std::vector<std::pair<Nat, HElem>> frontier{{start, HElem{}}};
  for (std::size_t layer = 0; !frontier.empty(); ++layer) {
    std::vector<std::pair<Nat, HElem>> next;
    for (auto& [pt, el] : frontier)
      for (std::size_t j = 0; j < p.size(); ++j)
        for (int sign : {1, -1}) {
          auto c = sign > 0 ? p[j].apply(pt) : p[j].apply_inverse(pt);
          if (!c) continue;
          std::pair<Nat, HElem> st{*c, pres.then(el, j, sign)};
          if (seen.insert(st).second) next.push_back(std::move(st));
        }
    if (!next.empty() && layer + 1 > depth)
      throw ClosureBoundExceeded("apply-relations",
                                 "depth " + std::to_string(depth) + " from " + std::to_string(start));
    frontier = std::move(next);
  }
  return seen;
}

// free presentations: the closure adds nothing and the reach of a word is its value
bool no_relators(const Presentation& pres) { return pres.relators().empty(); }

}  // namespace

bool in_poset(std::span<const PartialInjection> p, const Presentation& pres, std::optional<std::size_t> depth) {
  if (!pres.supported()) throw UnsupportedPresentation("poset", pres.kind());
  if (no_relators(pres)) return true;
  for (Nat b : support(p))
    for (auto& [a, el] : explore(p, pres, b, depth.value_or(default_depth(pres))))
      if (el.identity() && a != b) return false;
  return true;
}

Tuple apply_relations(std::span<const PartialInjection> p, const Presentation& pres, const std::set<std::size_t>& A,
                      std::optional<std::size_t> depth) {
  if (!pres.supported()) throw UnsupportedPresentation("apply-relations", pres.kind());
  Tuple q(p.begin(), p.end());
  if (q.size() < pres.generators()) q.resize(pres.generators());
  if (no_relators(pres)) return q;
  std::vector<HElem> inv(q.size());
  std::vector<bool> active(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    inv[i] = pres.then(HElem{}, i, -1);
    active[i] = !q[i].empty() || A.count(i);
  }
  for (Nat b : support(p))
    for (auto& [a, el] : explore(p, pres, b, depth.value_or(default_depth(pres))))
      for (std::size_t i = 0; i < q.size(); ++i)
        if (active[i] && el == inv[i] && !q[i].contains(a, b)) q[i].add(a, b);
  return q;
}

// ---- (G,H)-goodness ----

namespace {

using Item = std::variant<GroupElem, HElem>;

MaybeNat run_span(std::span<const Letter> ls, const Assignment& as, const GroupContext& ctx, Nat n, const Window& win) {
  MaybeNat cur = n;
  for (auto& l : ls) {
    if (!cur) break;
    cur = apply_letter(l, as, ctx, *cur, win);
  }
  return cur;
}

struct MixedForm {
  std::vector<Item> items;
};

void push_letter(MixedForm& f, const Letter& l, const Presentation& pres, const GroupContext& ctx, const Window& win) {
  auto& it = f.items;
  if (l.is_group()) {
    if (!it.empty() && std::holds_alternative<GroupElem>(it.back())) {
      auto merged = l.elem.after(std::get<GroupElem>(it.back()));
      if (ctx.is_window_identity(merged, win))
        it.pop_back();
      else
        it.back() = merged;
    } else {
      it.push_back(l.elem);
    }
  } else {
    if (!it.empty() && std::holds_alternative<HElem>(it.back())) {
      auto merged = pres.then(std::get<HElem>(it.back()), l.var, l.sign);
      if (merged.identity())
        it.pop_back();
      else
        it.back() = merged;
    } else {
      it.push_back(pres.then(HElem{}, l.var, l.sign));
    }
  }
}

MixedForm mixed_form(std::span<const Letter> letters, const Presentation& pres, const GroupContext& ctx,
                     const Window& win) {
  MixedForm f;
  for (auto& l : letters) push_letter(f, l, pres, ctx, win);
  return f;
}

bool same(const MixedForm& a, const MixedForm& b, const GroupContext& ctx, const Window& win) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (a.items[i].index() != b.items[i].index()) return false;
    if (auto* g = std::get_if<GroupElem>(&a.items[i])) {
      if (!ctx.window_equal(*g, std::get<GroupElem>(b.items[i]), win)) return false;
    } else if (std::get<HElem>(a.items[i]) != std::get<HElem>(b.items[i])) {
      return false;
    }
  }
  return true;
}

// points reachable from `from` by some word with the same mixed form as z
std::set<Nat> reach_equivalent(std::span<const Letter> z, std::span<const PartialInjection> p, const Presentation& pres,
                               const GroupContext& ctx, const Window& win, Nat from) {
  std::set<Nat> cur{from};
  std::size_t i = 0;
  Assignment as(p);
  while (i < z.size() && !cur.empty()) {
    std::set<Nat> next;
    if (z[i].is_group()) {
      for (Nat c : cur)
        if (auto v = ctx.apply(z[i].elem, c, win)) next.insert(*v);
      ++i;
    } else {
      std::size_t j = i;
      while (j < z.size() && z[j].is_var()) ++j;
      auto run = z.subspan(i, j - i);
      if (no_relators(pres)) {
        for (Nat c : cur)
          if (auto v = run_span(run, as, ctx, c, win)) next.insert(*v);
      } else {
        auto target = pres.normal_form(run);
        for (Nat c : cur)
          for (auto& [a, el] : explore(p, pres, c, default_depth(pres)))
            if (el == target && win.contains(a)) next.insert(a);
      }
      i = j;
    }
    cur = std::move(next);
  }
  return cur;
}

bool gh_witnessed(const Word& w, std::span<const PartialInjection> p, std::span<const PartialInjection> q,
                  const Presentation& pres, const GroupContext& ctx, const Window& win, Nat l) {
  const auto& L = w.letters();
  const std::size_t n = L.size();
  std::span<const Letter> all(L);
  Assignment aq(q);
  for (std::size_t t = 0; t < n; ++t) {
    auto u2 = all.subspan(0, t);
    auto m = run_span(u2, aq, ctx, l, win);
    if (!m) break;
    auto f2 = mixed_form(u2, pres, ctx, win);
    for (std::size_t s = 0; t + s < n; ++s) {
      // u1⁻¹ = the top s letters, so u1 is their inverse
      std::vector<Letter> u1;
      for (std::size_t k = 0; k < s; ++k) u1.push_back(L[n - 1 - k].inverse());
      if (!same(mixed_form(u1, pres, ctx, win), f2, ctx, win)) continue;
      auto z = all.subspan(t, n - s - t);
      if (reach_equivalent(z, p, pres, ctx, win, *m).count(*m)) return true;
    }
  }
  return false;
}

}  // namespace

bool is_gh_good_extension(std::span<const PartialInjection> p, std::span<const PartialInjection> q, const Word& w,
                          const Presentation& pres, const GroupContext& ctx, const Window& win) {
  if (!pres.supported()) throw UnsupportedPresentation("gh-good", pres.kind());
  for (std::size_t i = 0; i < p.size(); ++i)
    if (i >= q.size() || !p[i].subset_of(q[i])) throw InvalidArgument("gh-good", "p is not contained in q");
  Assignment ap(p), aq(q);
  for (auto& sw : variable_subwords(w))
    for (Nat l = 0; l < win.size; ++l) {
      if (evaluate(sw, aq, ctx, l, win) != l) continue;
      if (evaluate(sw, ap, ctx, l, win) == l) continue;  // z = w, z' = w, u empty
      if (!gh_witnessed(sw, p, q, pres, ctx, win, l)) return false;
    }
  return true;
}

namespace {

std::vector<Word> all_reduced_words(const Presentation& pres, const GroupContext& ctx, std::size_t max_len) {
  std::vector<Letter> alphabet;
  for (std::size_t i = 0; i < pres.generators(); ++i) {
    alphabet.push_back(Letter::x(i, 1));
    alphabet.push_back(Letter::x(i, -1));
  }
  for (std::size_t g = 0; g < ctx.size(); ++g) {
    alphabet.push_back(Letter::gen(g, 1));
    alphabet.push_back(Letter::gen(g, -1));
  }
  std::vector<Word> out;
  std::vector<std::vector<Letter>> layer = {{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<Letter>> next;
    for (auto& s : layer)
      for (auto& a : alphabet) {
        if (!s.empty()) {
          if (s.back() == a.inverse()) continue;
          if (s.back().is_group() && a.is_group()) continue;
        }
        auto t = s;
        t.push_back(a);
        next.push_back(t);
      }
    for (auto& s : next) out.push_back(Word::from_reduced(s));
    layer = std::move(next);
  }
  return out;
}

// canonical spelling of a variable run: exponents in (−o/2, o/2], factor gens in order
std::vector<Letter> canonical_run(const HElem& e, const Presentation& pres, std::size_t n) {
  // rebuild per generator; Presentation hides the factors, so probe by generator
  std::vector<Letter> out;
  (void)n;
  for (auto& [fi, ex] : e.syl) {
    // collect the generators of this factor in slot order
    std::vector<std::size_t> gens;
    for (std::size_t g = 0; g < pres.generators(); ++g) {
      auto probe = pres.then(HElem{}, g, 1);
      if (!probe.syl.empty() && probe.syl[0].first == fi) gens.push_back(g);
    }
    for (std::size_t s = 0; s < ex.size(); ++s) {
      std::int64_t e2 = ex[s];
      // order of the slot: smallest k > 0 with g^k = e, or 0
      std::int64_t ord = 0;
      HElem acc;
      for (std::int64_t k = 1; k <= 64; ++k) {
        acc = pres.then(acc, gens[s], 1);
        if (acc.identity()) {
          ord = k;
          break;
        }
      }
      if (ord > 0 && e2 > ord / 2) e2 -= ord;
      for (std::int64_t k = 0; k < std::abs(e2); ++k) out.push_back(Letter::x(gens[s], e2 > 0 ? 1 : -1));
    }
  }
  return out;
}

}  // namespace

bool is_gh_good_extension(std::span<const PartialInjection> p, std::span<const PartialInjection> q,
                          const Presentation& pres, const GroupContext& ctx, const Window& win,
                          std::size_t word_bound) {
  for (auto& w : all_reduced_words(pres, ctx, word_bound))
    if (w.has_var() && !is_gh_good_extension(p, q, w, pres, ctx, win)) return false;
  return true;
}

std::vector<Word> embedding_schedule(const Presentation& pres, const GroupContext& ctx, const Window& win,
                                     std::size_t max_len) {
  (void)win;
  std::vector<Word> out;
  for (auto& w : all_reduced_words(pres, ctx, max_len)) {
    if (!w.has_var()) continue;
    auto& L = w.letters();
    bool ok = true;
    for (std::size_t i = 0; i < L.size() && ok;) {
      if (L[i].is_group()) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < L.size() && L[j].is_var()) ++j;
      std::vector<Letter> run(L.begin() + i, L.begin() + j);
      auto e = pres.normal_form(run);
      // application order: the canonical spelling must match the run letter for letter
      ok = !e.identity() && canonical_run(e, pres, run.size()) == run;
      i = j;
    }
    if (ok) out.push_back(w);
  }
  return out;
}

// ---- density ----

MeetResult meet_DR(std::span<const PartialInjection> p, std::size_t i, Nat k, Side side, const Presentation& pres,
                   const GroupContext& ctx, const Window& win, const WordSet& words) {
  if (i >= pres.generators()) throw ArityMismatch("meet", "component " + std::to_string(i));
  MeetResult res;
  res.q = apply_relations(p, pres, {i});
  auto met = [&](const Tuple& t) { return side == Side::domain ? t[i].in_domain(k) : t[i].in_range(k); };
  if (met(res.q)) return res;
  Nat mx = k;
  for (auto& c : res.q)
    if (auto m = c.max_point()) mx = std::max(mx, *m);
  res.max_before = mx;
  Assignment as(res.q);
  for (Nat l = mx + 1; l < win.size; ++l) {
    Nat a = side == Side::domain ? k : l, b = side == Side::domain ? l : k;
    if (!is_good_pair(as, i, a, b, words, ctx, win)) continue;
    Tuple r = res.q;
    r[i].add(a, b);
    if (!in_poset(r, pres)) continue;
    res.l = l;
    res.q = apply_relations(r, pres, {i});
    return res;
  }
  throw SearchExhausted("meet", std::string(side == Side::domain ? "D" : "R") + "_{" + std::to_string(i) + "," +
                                    std::to_string(k) + "} above " + std::to_string(mx));
}

MeetResult meet_DR(std::span<const PartialInjection> p, std::size_t i, Nat k, Side side, const Presentation& pres,
                   const GroupContext& ctx, const Window& win) {
  auto sched = embedding_schedule(pres, ctx, win, 3);
  WordSet ws(sched, ctx, win);
  return meet_DR(p, i, k, side, pres, ctx, win, ws);
}

EmbeddingResult build_embedding(const Presentation& pres, const GroupContext& ctx, std::size_t stages,
                                const Window& win, const EmbeddingOptions& opt) {
  if (!pres.supported()) throw UnsupportedPresentation("embed", pres.kind());
  EmbeddingResult res;
  res.schedule = embedding_schedule(pres, ctx, win, opt.schedule_length);
  WordSet words(res.schedule, ctx, win);
  for (auto& w : res.schedule) res.trace.word_ids.push_back(w.str(ctx));
  const std::size_t n = pres.generators();
  res.trace.arity = n;
  Tuple cur(n);
  for (std::size_t k = 0; k < stages; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (Side side : {Side::domain, Side::range}) {
        if (k >= win.size) throw WindowExhausted("embed", "stage " + std::to_string(k));
        auto m = meet_DR(cur, i, k, side, pres, ctx, win, words);
        std::vector<TraceRecord> recs;
        if (m.l) {
          TraceRecord r;
          r.stage = k;
          r.step = side == Side::domain ? "D" : "R";
          r.var = i;
          r.a = side == Side::domain ? k : *m.l;
          r.b = side == Side::domain ? *m.l : k;
          r.info["l"] = static_cast<std::int64_t>(*m.l);
          r.info["max_before"] = static_cast<std::int64_t>(m.max_before);
          recs.push_back(r);
        }
        for (std::size_t j = 0; j < n; ++j)
          for (auto [a, b] : m.q[j].pairs()) {
            if (cur[j].contains(a, b)) continue;
            if (m.l && j == i && a == recs[0].a && b == recs[0].b) continue;
            TraceRecord r;
            r.stage = k;
            r.step = "close";
            r.var = j;
            r.a = a;
            r.b = b;
            recs.push_back(r);
          }
        cur = std::move(m.q);
        if (recs.empty()) continue;
        recs.back().fp = fixed_point_counts(res.schedule, cur, ctx, win);
        for (auto& r : recs) res.trace.records.push_back(std::move(r));
      }
  res.components = std::move(cur);
  return res;
}

}  // namespace cofin
