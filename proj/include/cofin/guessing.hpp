#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cofin/core.hpp"
#include "cofin/trace.hpp"
#include "cofin/words.hpp"

namespace cofin {

using Guess = std::vector<NatPair>;  // ((k_0,o_0), …, (k_N,o_N))
using Enumeration = std::function<std::size_t(Nat)>;  // e: ℕ → family index

// j ↦ j mod |family|
Enumeration cyclic_enumeration(std::size_t family_size);

bool valid_guess_ap(const Guess& guess, const std::vector<Function>& family, const Enumeration& e, Nat n,
                    const Window& win);

struct ApResult {
  PartialInjection p;
  Trace trace;  // steps P3 / P4 / P5; info size_at_entry on every stage's first record
  std::size_t valid = 0;
  std::vector<std::size_t> size_at_entry;  // |p| when stage s starts
};

ApResult guess_step_ap(const std::vector<Function>& family, const std::function<Guess(Nat)>& guesses,
                       std::size_t stages, const Window& win, Enumeration e = {});

// the guess the construction reads off p at stage n: the first 6n+1 points where p avoids g_{e(0)}..g_{e(n)}
std::optional<Guess> guess_from_target(const Function& p, const std::vector<Function>& family, const Enumeration& e,
                                       Nat n, const Window& win);

struct VerifyOptions {
  Nat sub_window = 12;             // exhaustive: every injective p inside [0, sub_window)²
  std::size_t sample_budget = 200;  // sampled: random p inside the window
  std::uint64_t seed = 1;
};

struct WitnessSet {
  std::vector<NatPair> S;
  std::size_t bound = 0;              // 2k + k·Σ#ₓ + 1
  std::vector<NatPair> removed;       // pairs of f on fixed-point paths of some w(f)
  std::size_t exhaustive_checked = 0, sampled_checked = 0;
};

// p ∪ {(a,b)} adds no fixed point to any w(p); (a,b) already in p counts as fine
bool very_good_pair(const PartialInjection& p, Nat a, Nat b, const std::vector<Word>& words, const GroupContext& ctx,
                    const Window& win);

WitnessSet witness_set(const GroupContext& ctx, const Function& f, const std::vector<Word>& words, std::size_t k,
                       const Window& win, const VerifyOptions& opt = {});

struct GuessVerdict {
  bool valid = false;
  bool exact = false;  // universal clause checked exhaustively on the sub-window
  std::size_t checked = 0;
  const char* label() const { return exact ? "exact" : "sampled"; }
};

GuessVerdict valid_guess_ag(const Guess& guess, const GroupContext& ctx, const std::vector<Word>& words, Nat n,
                            const Window& win, const VerifyOptions& opt = {});

// every injective p with |p| ≤ k and all pairs inside [0, sub)²; stops when visit returns false
void for_each_small_injection(Nat sub, std::size_t k, const std::function<bool(const PartialInjection&)>& visit);

}  // namespace cofin
