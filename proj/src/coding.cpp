#include "cofin/coding.hpp"

#include <algorithm>

namespace cofin {

int gamma(const Word& w, const GroupContext& ctx, const Window& win) {
  return conjugate_depth(w, ctx, win) > 0 ? 1 : 0;
}

PartialFn word_image(const Word& w, const PartialInjection& g, const GroupContext& ctx, const Window& win) {
  return [w, g, &ctx, win](Nat n) -> MaybeNat {
    auto v = evaluate(w, Assignment(g), ctx, n, win);
    if (v && !win.contains(*v)) return std::nullopt;
    return v;
  };
}

int decode_cfg(const PartialFn& f, Nat m, int epsilon, Nat n, const Window& win) {
  if (epsilon != 0 && epsilon != 1) throw InvalidArgument("decode-cfg", "mode must be 0 or 1");
  auto step = [&](Nat v, const char* what) {
    auto r = f(v);
    if (!r || !win.contains(*r)) throw MalformedCode("decode-cfg", std::string(what) + " undefined at " + std::to_string(v));
    return *r;
  };
  Nat v = m;
  if (epsilon == 0) {
    for (Nat i = 0; i < n; ++i) v = step(v, "f");
  } else {
    v = step(v, "f");
    for (Nat i = 0; i < n; ++i) {
      Nat t = base_h(v);
      if (!win.contains(t)) throw MalformedCode("decode-cfg", "h leaves the window at " + std::to_string(v));
      v = step(t, "f");
    }
  }
  auto [k, b] = unpair(v);
  (void)k;
  if (b > 1) throw MalformedCode("decode-cfg", "second projection " + std::to_string(b) + " is not a bit");
  return static_cast<int>(b);
}

std::vector<int> decode_cfg_bits(const PartialFn& f, Nat m, int epsilon, std::size_t count, const Window& win) {
  std::vector<int> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(decode_cfg(f, m, epsilon, i, win));
  return out;
}

namespace {

struct Encoder {
  const GroupContext& ctx;
  const Window& win;
  PartialInjection g;
  std::set<Nat> A;
  WordSet words;
  Trace trace;

  std::span<const PartialInjection> span() const { return {&g, 1}; }

  // the letters [from, to) must be group letters
  MaybeNat run_group(const Word& w, std::size_t from, std::size_t to, Nat n) const {
    MaybeNat cur = n;
    for (std::size_t i = from; i < to && cur; ++i) cur = ctx.apply(w.letters()[i].elem, *cur, win);
    return cur;
  }

  static std::size_t next_var(const Word& w, std::size_t from) {
    auto& L = w.letters();
    while (from < L.size() && !L[from].is_var()) ++from;
    return from;
  }

  // the point can carry the variable letter `sign` without it being defined yet
  // (pa, pb) is the pair about to be added
  bool open_for(Nat p, int sign, Nat pa, Nat pb) const {
    if (!win.contains(p) || A.count(p)) return false;
    return sign > 0 ? !g.in_domain(p) && p != pa : !g.in_range(p) && p != pb;
  }

  void record(std::size_t stage, const std::string& step, Nat a, Nat b, std::map<std::string, std::int64_t> info = {}) {
    TraceRecord r;
    r.stage = stage;
    r.step = step;
    r.a = a;
    r.b = b;
    r.info = std::move(info);
    trace.records.push_back(std::move(r));
  }
};

std::int64_t i64(Nat n) { return static_cast<std::int64_t>(n); }

}  // namespace

CfgResult encode_cfg(const GroupContext& ctx, const std::vector<Function>& targets, const std::vector<int>& bits,
                     const std::vector<Word>& schedule, std::size_t stages, const Window& win) {
  bool has_h = false;
  for (std::size_t i = 0; i < ctx.size(); ++i) has_h |= ctx.generator(i).kind() == Function::Kind::base_h;
  if (!has_h) throw InvalidArgument("encode-cfg", "the group context must contain base_h");
  for (int b : bits)
    if (b != 0 && b != 1) throw InvalidArgument("encode-cfg", "bits must be 0 or 1");
  for (auto& w : schedule) {
    if (!w.has_var()) throw InvalidArgument("encode-cfg", "schedule word without a variable: " + w.str(ctx));
    if (w.arity() > 1) throw ArityMismatch("encode-cfg", "only x occurs in coding words");
  }

  Encoder e{ctx, win, {}, {}, {}, {}};
  CfgResult res;
  for (auto& w : schedule) {
    e.trace.word_ids.push_back(w.str(ctx));
    res.words.push_back({w, gamma(w, ctx, win), 0, 0, false, 0});
  }
  res.cursors.resize(schedule.size());
  auto not_in_A = [&](Nat n) { return !e.A.count(n) && win.contains(n); };

  for (std::size_t s = 0; s < stages; ++s) {
    if (s < schedule.size()) e.words.add(schedule[s], ctx, win);

    // Extend Domain
    {
      Nat a = 0;
      while (e.g.in_domain(a) || e.A.count(a)) ++a;
      if (!win.contains(a)) throw WindowExhausted("encode-cfg/domain", "stage " + std::to_string(s));
      SearchOptions opt;
      opt.forbidden = &e.A;
      Nat b = find_domain_extension(e.span(), 0, a, e.words, ctx, win, opt);
      e.g.add(a, b);
      e.record(s, "domain", a, b);
    }
    // Extend Range
    {
      Nat b = 0;
      while (e.g.in_range(b) || e.A.count(b)) ++b;
      if (!win.contains(b)) throw WindowExhausted("encode-cfg/range", "stage " + std::to_string(s));
      SearchOptions opt;
      opt.forbidden = &e.A;
      Nat a = find_range_extension(e.span(), 0, b, e.words, ctx, win, opt);
      e.g.add(a, b);
      e.record(s, "range", a, b);
    }
    // Hit f_j, j ≤ s
    for (std::size_t j = 0; j <= s && j < targets.size(); ++j) {
      SearchOptions opt;
      opt.admissible = not_in_A;
      const Function& f = targets[j];
      Nat a = find_hitting_extension(e.span(), 0, [&](Nat n) { return f.apply(n); }, e.words, ctx, win, opt);
      e.g.add(a, *f.apply(a));
      e.record(s, "hit", a, *f.apply(a), {{"target", i64(j)}});
    }
    // Coding: one variable letter per active word
    for (std::size_t j = 0; j < s && j < schedule.size(); ++j) {
      auto& cw = res.words[j];
      auto& cur = res.cursors[j];
      if (!cw.started || cur.l >= bits.size()) continue;
      const Word& w = cw.w;
      const auto& L = w.letters();
      // walk w from the location until a variable letter is undefined
      Nat pt = cur.m;
      std::size_t idx = 0;
      for (; idx < L.size(); ++idx) {
        auto nx = apply_letter(L[idx], Assignment(e.g), ctx, pt, win);
        if (!nx) break;
        pt = *nx;
      }
      if (idx == L.size() || !L[idx].is_var() || !e.A.count(pt))
        throw SearchExhausted("encode-cfg/coding", "lost the evaluation path of " + w.str(ctx));
      const Nat a = pt;
      const int delta = L[idx].sign;
      const std::size_t nv = Encoder::next_var(w, idx + 1);
      const bool climax = nv == L.size();
      const std::size_t first = Encoder::next_var(w, 0);

      std::optional<Nat> chosen, frontier, value, next_loc;
      for (Nat b = 0; b < win.size && !chosen; ++b) {
        if (e.A.count(b)) continue;
        if (delta > 0 ? e.g.in_range(b) : e.g.in_domain(b)) continue;
        if (delta > 0 ? !e.g.can_add(a, b) : !e.g.can_add(b, a)) continue;
        const Nat pa = delta > 0 ? a : b, pb = delta > 0 ? b : a;
        std::optional<Nat> fr, v, loc;
        if (!climax) {
          fr = e.run_group(w, idx + 1, nv, b);
          if (!fr || !e.open_for(*fr, L[nv].sign, pa, pb)) continue;
        } else {
          v = e.run_group(w, idx + 1, L.size(), b);
          if (!v || !win.contains(*v) || unpair(*v).second != static_cast<Nat>(bits[cur.l])) continue;
          if (cur.l + 1 < bits.size()) {
            loc = cw.gamma == 0 ? *v : base_h(*v);
            if (!win.contains(*loc)) continue;
            fr = e.run_group(w, 0, first, *loc);
            if (!fr || !e.open_for(*fr, L[first].sign, pa, pb)) continue;
          }
        }
        if (!is_good_pair(Assignment(e.g), 0, pa, pb, e.words, ctx, win)) continue;
        chosen = b;
        frontier = fr;
        value = v;
        next_loc = loc;
      }
      if (!chosen)
        throw SearchExhausted("encode-cfg/coding", w.str(ctx) + " at " + std::to_string(a) + ", bit " +
                                                       std::to_string(cur.l));
      Nat b = *chosen;
      Nat pa = delta > 0 ? a : b, pb = delta > 0 ? b : a;
      e.g.add(pa, pb);
      e.A.erase(a);
      if (frontier) e.A.insert(*frontier);
      std::map<std::string, std::int64_t> info{
          {"word", i64(j)}, {"letter", i64(idx)}, {"released", i64(a)}, {"frontier", frontier ? i64(*frontier) : -1}};
      if (climax) {
        info["bit_index"] = i64(cur.l);
        info["bit"] = bits[cur.l];
        info["value"] = i64(*value);
        if (cur.l == 0) cw.m = cw.gamma == 0 ? *value : cw.start;
        ++cur.l;
        cw.encoded = cur.l;
        if (next_loc) cur.m = *next_loc;
        info["next"] = next_loc ? i64(*next_loc) : -1;
      }
      e.record(s, climax ? "climax" : "code", pa, pb, std::move(info));
    }
    // Extending Coding: start w_s
    if (s < schedule.size() && !bits.empty()) {
      auto& cw = res.words[s];
      const Word& w = cw.w;
      std::size_t first = Encoder::next_var(w, 0);
      std::optional<Nat> loc;
      Nat fr = 0;
      for (Nat a = 0; a < win.size && !loc; ++a) {
        auto p = e.run_group(w, 0, first, a);
        if (!p || !win.contains(*p) || e.A.count(*p) || e.g.in_domain(*p) || e.g.in_range(*p)) continue;
        loc = a;
        fr = *p;
      }
      if (!loc) throw WindowExhausted("encode-cfg/start", w.str(ctx));
      e.A.insert(fr);
      cw.start = *loc;
      cw.started = true;
      res.cursors[s] = {*loc, 0, cw.gamma};
      TraceRecord r;
      r.stage = s;
      r.step = "start";
      r.adds = false;
      r.a = *loc;
      r.b = fr;
      r.info = {{"word", i64(s)}, {"gamma", cw.gamma}};
      e.trace.records.push_back(std::move(r));
    }
  }
  res.g = std::move(e.g);
  res.trace = std::move(e.trace);
  res.avoid = std::move(e.A);
  return res;
}

}  // namespace cofin
