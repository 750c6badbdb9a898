#include "cofin/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace cofin {

__extension__ typedef __int128 i128;

Nat pair(Nat a, Nat b) {
  Nat s = a + b;
  return s * (s + 1) / 2 + b;
}

NatPair unpair(Nat c) {
  // largest w with w(w+1)/2 <= c; float guess then fix up
  auto w = static_cast<Nat>((std::sqrt(8.0L * static_cast<long double>(c) + 1.0L) - 1.0L) / 2.0L);
  while (w * (w + 1) / 2 > c) --w;
  while ((w + 1) * (w + 2) / 2 <= c) ++w;
  Nat b = c - w * (w + 1) / 2;
  return {w - b, b};
}

// ---- PartialInjection ----

PartialInjection::PartialInjection(std::initializer_list<NatPair> pairs) {
  for (auto [a, b] : pairs) add(a, b);
}

PartialInjection::PartialInjection(const std::vector<NatPair>& pairs) {
  for (auto [a, b] : pairs) add(a, b);
}

MaybeNat PartialInjection::apply(Nat n) const {
  auto it = fwd_.find(n);
  if (it == fwd_.end()) return std::nullopt;
  return it->second;
}

MaybeNat PartialInjection::apply_inverse(Nat n) const {
  auto it = bwd_.find(n);
  if (it == bwd_.end()) return std::nullopt;
  return it->second;
}

bool PartialInjection::can_add(Nat a, Nat b) const {
  auto f = fwd_.find(a);
  if (f != fwd_.end()) return f->second == b;
  return bwd_.count(b) == 0;
}

void PartialInjection::add(Nat a, Nat b) {
  if (!can_add(a, b))
    throw InvalidArgument("partial-injection",
                          "pair (" + std::to_string(a) + "," + std::to_string(b) + ") breaks injectivity");
  fwd_[a] = b;
  bwd_[b] = a;
}

void PartialInjection::erase_domain(Nat a) {
  auto it = fwd_.find(a);
  if (it == fwd_.end()) return;
  bwd_.erase(it->second);
  fwd_.erase(it);
}

std::vector<NatPair> PartialInjection::pairs() const {
  std::vector<NatPair> out(fwd_.begin(), fwd_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Nat> PartialInjection::domain() const {
  std::vector<Nat> out;
  out.reserve(fwd_.size());
  for (auto& kv : fwd_) out.push_back(kv.first);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Nat> PartialInjection::range() const {
  std::vector<Nat> out;
  out.reserve(bwd_.size());
  for (auto& kv : bwd_) out.push_back(kv.first);
  std::sort(out.begin(), out.end());
  return out;
}

MaybeNat PartialInjection::max_point() const {
  MaybeNat m;
  for (auto& [a, b] : fwd_) {
    Nat x = std::max(a, b);
    if (!m || x > *m) m = x;
  }
  return m;
}

bool PartialInjection::contains(Nat a, Nat b) const {
  auto it = fwd_.find(a);
  return it != fwd_.end() && it->second == b;
}

bool PartialInjection::subset_of(const PartialInjection& other) const {
  for (auto& [a, b] : fwd_)
    if (!other.contains(a, b)) return false;
  return true;
}

PartialInjection PartialInjection::inverse() const {
  PartialInjection r;
  r.fwd_ = bwd_;
  r.bwd_ = fwd_;
  return r;
}

MaybeNat apply_partial(const PartialInjection& p, Nat n) { return p.apply(n); }
PartialInjection invert(const PartialInjection& p) { return p.inverse(); }

// ---- base_h ----

Nat base_h(Nat n) {
  if (n == 0) return 1;
  return (n % 2 == 0) ? n - 2 : n + 2;
}

Nat base_h_inverse(Nat n) {
  if (n == 1) return 0;
  return (n % 2 == 1) ? n - 2 : n + 2;
}

// ---- Function ----

Function::Function() { clauses_.push_back(AffineClause{}); }

void Function::index_entries() {
  fwd_.clear();
  bwd_.clear();
  injective_ = true;
  for (auto [a, b] : entries_) {
    if (fwd_.count(a))
      throw InvalidArgument("function-spec", "duplicate domain point " + std::to_string(a));
    fwd_[a] = b;
    if (bwd_.count(b))
      injective_ = false;
    else
      bwd_[b] = a;
  }
}

Function Function::table(const std::vector<NatPair>& entries) {
  Function f;
  f.kind_ = Kind::table;
  f.clauses_.clear();
  f.entries_ = entries;
  std::sort(f.entries_.begin(), f.entries_.end());
  f.index_entries();
  return f;
}

Function Function::patch(const std::vector<NatPair>& swaps) {
  std::vector<NatPair> mapping;
  std::set<Nat> seen;
  for (auto [a, b] : swaps) {
    if (seen.count(a) || seen.count(b))
      throw InvalidArgument("function-spec", "patch swaps must be disjoint");
    seen.insert(a);
    seen.insert(b);
    mapping.emplace_back(a, b);
    if (a != b) mapping.emplace_back(b, a);
  }
  return patch_map(mapping);
}

Function Function::patch_map(const std::vector<NatPair>& mapping) {
  Function f;
  f.kind_ = Kind::patch;
  f.clauses_.clear();
  f.entries_ = mapping;
  std::sort(f.entries_.begin(), f.entries_.end());
  f.index_entries();
  std::set<Nat> dom, ran;
  for (auto [a, b] : f.entries_) {
    dom.insert(a);
    ran.insert(b);
  }
  if (!f.injective_ || dom != ran)
    throw InvalidArgument("function-spec", "patch must permute its support");
  return f;
}

Function Function::rule(std::vector<AffineClause> clauses, const std::vector<NatPair>& overrides) {
  Function f;
  f.kind_ = Kind::rule;
  for (auto& c : clauses)
    if (c.modulus == 0 || c.residue >= c.modulus)
      throw InvalidArgument("function-spec", "bad clause modulus/residue");
  f.clauses_ = std::move(clauses);
  f.entries_ = overrides;
  std::sort(f.entries_.begin(), f.entries_.end());
  f.index_entries();
  for (auto& c : f.clauses_)
    if (c.mul == 0) f.injective_ = false;
  return f;
}

Function Function::base_h() {
  Function f;
  f.kind_ = Kind::base_h;
  f.clauses_.clear();
  return f;
}

Function Function::affine(std::int64_t mul, std::int64_t add) {
  return rule({AffineClause{1, 0, mul, add}});
}

Function Function::tabulate(const std::function<MaybeNat(Nat)>& g, Nat w) {
  std::vector<NatPair> e;
  for (Nat n = 0; n < w; ++n)
    if (auto v = g(n)) e.emplace_back(n, *v);
  return table(e);
}

MaybeNat Function::rule_apply(Nat n) const {
  for (auto& c : clauses_) {
    if (n % c.modulus != c.residue) continue;
    // i128 so that mul·n cannot wrap for any window we use
    i128 v = static_cast<i128>(c.mul) * static_cast<i128>(n) + c.add;
    if (v < 0) return std::nullopt;
    return static_cast<Nat>(v);
  }
  return std::nullopt;
}

MaybeNat Function::rule_inverse(Nat m) const {
  MaybeNat best;
  for (auto& c : clauses_) {
    MaybeNat cand;
    if (c.mul == 0) {
      if (static_cast<i128>(c.add) != static_cast<i128>(m)) continue;
      // least n in the residue class that is not overridden
      for (Nat n = c.residue;; n += c.modulus) {
        if (!fwd_.count(n)) {
          cand = n;
          break;
        }
      }
    } else {
      i128 num = static_cast<i128>(m) - c.add;
      if (num % c.mul != 0) continue;
      i128 n = num / c.mul;
      if (n < 0) continue;
      cand = static_cast<Nat>(n);
    }
    if (!cand || fwd_.count(*cand)) continue;
    if (rule_apply(*cand) != m) continue;  // an earlier clause may own that residue
    if (!best || *cand < *best) best = cand;
  }
  return best;
}

MaybeNat Function::apply(Nat n) const {
  switch (kind_) {
    case Kind::base_h:
      return cofin::base_h(n);
    case Kind::table: {
      auto it = fwd_.find(n);
      if (it == fwd_.end()) return std::nullopt;
      return it->second;
    }
    case Kind::patch: {
      auto it = fwd_.find(n);
      return it == fwd_.end() ? n : it->second;
    }
    case Kind::rule: {
      auto it = fwd_.find(n);
      if (it != fwd_.end()) return it->second;
      return rule_apply(n);
    }
  }
  return std::nullopt;
}

MaybeNat Function::inverse(Nat m) const {
  switch (kind_) {
    case Kind::base_h:
      return base_h_inverse(m);
    case Kind::table: {
      auto it = bwd_.find(m);
      if (it == bwd_.end()) return std::nullopt;
      return it->second;
    }
    case Kind::patch: {
      auto it = bwd_.find(m);
      return it == bwd_.end() ? m : it->second;
    }
    case Kind::rule: {
      MaybeNat best;
      if (auto it = bwd_.find(m); it != bwd_.end()) best = it->second;
      if (auto r = rule_inverse(m); r && (!best || *r < *best)) best = r;
      return best;
    }
  }
  return std::nullopt;
}

MaybeNat Function::apply(Nat n, const Window& win) const {
  if (!win.contains(n)) return std::nullopt;
  auto v = apply(n);
  if (!v || !win.contains(*v)) return std::nullopt;
  return v;
}

MaybeNat Function::inverse(Nat n, const Window& win) const {
  if (!win.contains(n)) return std::nullopt;
  auto v = inverse(n);
  if (!v || !win.contains(*v)) return std::nullopt;
  return v;
}

std::vector<Nat> fixed_points(const PartialInjection& p, const Window& win) {
  std::vector<Nat> out;
  for (auto [a, b] : p.pairs())
    if (a == b && win.contains(a)) out.push_back(a);
  return out;
}

std::vector<Nat> fixed_points(const Function& f, const Window& win) {
  std::vector<Nat> out;
  for (Nat n = 0; n < win.size; ++n)
    if (f.apply(n) == n) out.push_back(n);
  return out;
}

}  // namespace cofin
