#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cofin/errors.hpp"

namespace cofin {

using Nat = std::uint64_t;
using MaybeNat = std::optional<Nat>;
using NatPair = std::pair<Nat, Nat>;

// Universe bound plus the cutoff that stands in for "finite".
struct Window {
  Nat size = 64;
  Nat threshold = 0;

  Window() = default;
  Window(Nat w, Nat t = 0) : size(w), threshold(t) {
    if (t >= w) throw InvalidArgument("window", "threshold must be < W");
  }
  bool contains(Nat n) const { return n < size; }
};

// Cantor pairing.
Nat pair(Nat a, Nat b);
NatPair unpair(Nat c);

// Finite injective partial map.  Hash maps both ways; sorted views on demand.
class PartialInjection {
 public:
  PartialInjection() = default;
  PartialInjection(std::initializer_list<NatPair> pairs);
  explicit PartialInjection(const std::vector<NatPair>& pairs);

  MaybeNat apply(Nat n) const;
  MaybeNat apply_inverse(Nat n) const;
  bool in_domain(Nat n) const { return fwd_.count(n) != 0; }
  bool in_range(Nat n) const { return bwd_.count(n) != 0; }

  bool can_add(Nat a, Nat b) const;
  // throws InvalidArgument when (a,b) breaks functionality/injectivity;
  // re-adding an existing pair is a no-op
  void add(Nat a, Nat b);
  void erase_domain(Nat a);

  std::size_t size() const { return fwd_.size(); }
  bool empty() const { return fwd_.empty(); }
  std::vector<NatPair> pairs() const;  // sorted by domain point
  std::vector<Nat> domain() const;
  std::vector<Nat> range() const;
  MaybeNat max_point() const;
  bool contains(Nat a, Nat b) const;
  bool subset_of(const PartialInjection& other) const;

  PartialInjection inverse() const;

  bool operator==(const PartialInjection& o) const { return fwd_ == o.fwd_; }
  bool operator!=(const PartialInjection& o) const { return !(*this == o); }

 private:
  std::unordered_map<Nat, Nat> fwd_;
  std::unordered_map<Nat, Nat> bwd_;
};

MaybeNat apply_partial(const PartialInjection& p, Nat n);
PartialInjection invert(const PartialInjection& p);

// n ↦ mul·n + add on the residue class n ≡ residue (mod modulus).
struct AffineClause {
  Nat modulus = 1;
  Nat residue = 0;
  std::int64_t mul = 1;
  std::int64_t add = 0;
};

// An evaluable function on ℕ given by one of a few finite specs.  Most uses
// are permutations; madness/slalom families may be non-injective (constant
// clauses), in which case inverse() returns the least preimage it can find.
class Function {
 public:
  enum class Kind { table, patch, rule, base_h };

  Function();  // identity rule

  static Function table(const std::vector<NatPair>& entries);
  static Function patch(const std::vector<NatPair>& swaps);
  static Function patch_map(const std::vector<NatPair>& mapping);
  static Function rule(std::vector<AffineClause> clauses, const std::vector<NatPair>& overrides = {});
  static Function base_h();
  static Function identity() { return Function(); }
  static Function affine(std::int64_t mul, std::int64_t add);
  static Function constant(Nat c) { return affine(0, static_cast<std::int64_t>(c)); }
  // table of a callable on [0,W)
  static Function tabulate(const std::function<MaybeNat(Nat)>& f, Nat w);

  Kind kind() const { return kind_; }
  MaybeNat apply(Nat n) const;
  MaybeNat inverse(Nat n) const;
  // windowed application: input and output both inside [0,W)
  MaybeNat apply(Nat n, const Window& win) const;
  MaybeNat inverse(Nat n, const Window& win) const;
  MaybeNat operator()(Nat n) const { return apply(n); }
  bool injective() const { return injective_; }

  const std::vector<NatPair>& entries() const { return entries_; }
  const std::vector<AffineClause>& clauses() const { return clauses_; }

 private:
  Kind kind_ = Kind::rule;
  std::vector<NatPair> entries_;  // table entries / patch mapping / rule overrides
  std::vector<AffineClause> clauses_;
  std::unordered_map<Nat, Nat> fwd_;
  std::unordered_map<Nat, Nat> bwd_;
  bool injective_ = true;

  void index_entries();
  MaybeNat rule_apply(Nat n) const;
  MaybeNat rule_inverse(Nat m) const;
};

// the base permutation: 0↦1, even n>0 ↦ n−2, odd n ↦ n+2
Nat base_h(Nat n);
Nat base_h_inverse(Nat n);

std::vector<Nat> fixed_points(const PartialInjection& p, const Window& win);
std::vector<Nat> fixed_points(const Function& f, const Window& win);

// finite partial function, not necessarily injective
using FinFn = std::map<Nat, Nat>;

}  // namespace cofin
