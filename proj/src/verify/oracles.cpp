#include "cofin/verify/oracles.hpp"

#include <functional>
#include <set>

namespace cofin::oracle {

namespace {

MaybeNat gen_step(const Function& f, int sign, Nat n, const Window& win) {
  if (n >= win.size) return std::nullopt;
  auto v = sign > 0 ? f.apply(n) : f.inverse(n);
  if (!v || *v >= win.size) return std::nullopt;
  return v;
}

MaybeNat letter(const Letter& l, const std::vector<PartialInjection>& as, const GroupContext& ctx, Nat n,
                const Window& win) {
  if (l.is_var()) {
    if (l.var >= as.size()) return std::nullopt;
    return l.sign > 0 ? as[l.var].apply(n) : as[l.var].apply_inverse(n);
  }
  MaybeNat cur = n;
  for (auto [g, e] : l.elem.factors)
    for (int k = 0; k < (e < 0 ? -e : e) && cur; ++k) cur = gen_step(ctx.generator(g), e, *cur, win);
  return cur;
}

// the two letters cancel: same variable opposite sign, or group letters whose
// composition is the identity wherever defined on the window
bool cancel(const Letter& left, const Letter& right, const GroupContext& ctx, const Window& win) {
  if (left.kind != right.kind) return false;
  if (left.is_var()) return left.var == right.var && left.sign == -right.sign;
  bool any = false;
  for (Nat n = 0; n < win.size; ++n) {
    auto m = letter(right, {}, ctx, n, win);
    if (!m) continue;
    auto back = letter(left, {}, ctx, *m, win);
    if (!back) continue;
    if (*back != n) return false;
    any = true;
  }
  return any;
}

}  // namespace

MaybeNat eval(const std::vector<Letter>& seq, const std::vector<PartialInjection>& as, const GroupContext& ctx, Nat n,
              const Window& win) {
  MaybeNat cur = n;
  for (auto& l : seq) {
    if (!cur) return cur;
    cur = letter(l, as, ctx, *cur, win);
  }
  return cur;
}

bool good_extension(const std::vector<PartialInjection>& p, const std::vector<PartialInjection>& q, const Word& w,
                    const GroupContext& ctx, const Window& win) {
  const auto& ls = w.letters();
  std::size_t L = ls.size();
  for (Nat l = 0; l < win.size; ++l) {
    auto vq = eval(ls, q, ctx, l, win);
    if (!vq || *vq != l) continue;
    if (eval(ls, p, ctx, l, win)) continue;
    bool witnessed = false;
    for (std::size_t t = 1; 2 * t < L && !witnessed; ++t) {
      bool peel = true;
      for (std::size_t i = 0; i < t; ++i) peel = peel && cancel(ls[L - 1 - i], ls[i], ctx, win);
      if (!peel) continue;
      std::vector<Letter> u(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(t));
      std::vector<Letter> z(ls.begin() + static_cast<std::ptrdiff_t>(t),
                            ls.begin() + static_cast<std::ptrdiff_t>(L - t));
      for (Nat k = 0; k < win.size && !witnessed; ++k) {
        if (eval(u, q, ctx, l, win) != k) continue;
        if (eval(z, p, ctx, k, win) == k) witnessed = true;
      }
    }
    if (!witnessed) return false;
  }
  return true;
}

bool very_good_extension(const std::vector<PartialInjection>& p, const std::vector<PartialInjection>& q,
                         const Word& w, const GroupContext& ctx, const Window& win) {
  for (Nat l = 0; l < win.size; ++l) {
    if (eval(w.letters(), q, ctx, l, win) != l) continue;
    if (eval(w.letters(), p, ctx, l, win) != l) return false;
  }
  return true;
}

std::size_t fixed_point_count(const Word& w, const std::vector<PartialInjection>& as, const GroupContext& ctx,
                              const Window& win) {
  std::size_t c = 0;
  for (Nat l = 0; l < win.size; ++l)
    if (eval(w.letters(), as, ctx, l, win) == l) ++c;
  return c;
}

}  // namespace cofin::oracle

namespace cofin::oracle {

bool abelian_in_poset(const std::vector<PartialInjection>& p, const std::vector<Nat>& orders, std::size_t depth) {
  std::vector<std::int64_t> e(orders.size());
  auto trivial = [&] {
    for (std::size_t i = 0; i < e.size(); ++i) {
      auto o = static_cast<std::int64_t>(orders[i]);
      if (o == 0 ? e[i] != 0 : ((e[i] % o) + o) % o != 0) return false;
    }
    return true;
  };
  std::set<Nat> pts;
  for (auto& c : p)
    for (auto [a, b] : c.pairs()) pts.insert(a), pts.insert(b);
  std::function<bool(Nat, Nat, std::size_t)> walk = [&](Nat start, Nat at, std::size_t len) {
    if (trivial() && at != start) return false;
    if (len == depth) return true;
    for (std::size_t i = 0; i < p.size() && i < e.size(); ++i)
      for (int s : {1, -1}) {
        auto nx = s > 0 ? p[i].apply(at) : p[i].apply_inverse(at);
        if (!nx) continue;
        e[i] += s;
        bool ok = walk(start, *nx, len + 1);
        e[i] -= s;
        if (!ok) return false;
      }
    return true;
  };
  for (Nat b : pts)
    if (!walk(b, b, 0)) return false;
  return true;
}

bool serves(const std::vector<NatPair>& S, const PartialInjection& p, const std::vector<Word>& words,
            const GroupContext& ctx, const Window& win) {
  for (auto [a, b] : S) {
    if (p.contains(a, b)) return true;
    if (p.in_domain(a) || p.in_range(b)) continue;
    PartialInjection q = p;
    q.add(a, b);
    bool ok = true;
    for (auto& w : words) ok = ok && very_good_extension({p}, {q}, w, ctx, win);
    if (ok) return true;
  }
  return false;
}

}  // namespace cofin::oracle
