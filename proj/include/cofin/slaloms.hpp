#pragma once

#include <optional>
#include <set>
#include <vector>

#include "cofin/core.hpp"
#include "cofin/trace.hpp"

namespace cofin {

using FinSet = std::set<Nat>;

// φ on [0, W), stored sparsely; |φ(n)| ≤ n
class Slalom {
 public:
  Slalom() = default;
  explicit Slalom(std::map<Nat, FinSet> phi) : phi_(std::move(phi)) {}

  const FinSet& at(Nat n) const;
  void insert(Nat n, Nat v) { phi_[n].insert(v); }
  const std::map<Nat, FinSet>& entries() const { return phi_; }
  // first n < W with |φ(n)| > n
  std::optional<Nat> width_violation(const Window& win) const;

 private:
  std::map<Nat, FinSet> phi_;
};

struct LocalizeResult {
  bool holds = false;
  std::optional<Nat> m;  // least m with f(n) ∈ φ(n) on [m, W)
};

LocalizeResult localizes(const Slalom& s, const Function& f, const Window& win);

// (σ, φ): |σ(i)| ≤ i, |φ(i)| ≤ lh(σ)
struct LOCCondition {
  std::vector<FinSet> sigma;
  std::map<Nat, FinSet> phi;

  const FinSet& phi_at(Nat n) const;
  bool valid(const Window& win) const;
};

// q ≤ p: q = (τ, ψ) extends p = (σ, φ)
bool loc_leq(const LOCCondition& q, const LOCCondition& p, const Window& win);

// the density move for f: (σ ⌢ φ(lh σ), φ ∪ {f})
LOCCondition localize_move(const LOCCondition& p, const Function& f, const Window& win);

// σ on [0, lh σ), φ beyond
Slalom slalom_of(const LOCCondition& p, const Window& win);

struct LocalizerResult {
  Slalom slalom;
  Trace trace;                         // one bookkeeping record per move: a = real, b = lh σ after
  std::vector<LOCCondition> conditions;  // p_0 = (⟨⟩, ∅), then one per stage
  std::vector<Nat> ingested_at;          // lh σ right after the real's first move
};

LocalizerResult greedy_localizer(const std::vector<Function>& reals, std::size_t stages, const Window& win);

// the bounded-width variant: S ≤ S′ iff S′(n) ⊆ S(n) for all n
bool bw_leq(const Slalom& s, const Slalom& s2, const Window& win);
// F(S) = (S↾l, S), l the least bound on all |S(n)|
LOCCondition bw_to_loc(const Slalom& s, const Window& win);

}  // namespace cofin
