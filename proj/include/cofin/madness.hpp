#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "cofin/core.hpp"
#include "cofin/trace.hpp"

namespace cofin {

using Family = std::vector<Function>;

struct CountedVerdict {
  bool holds = false;
  std::size_t count = 0;  // agreements / uncovered positions on the window
};

// agreement count ≤ threshold
CountedVerdict eventually_different(const Function& f, const Function& g, const Window& win);
// uncovered positions ≤ threshold
CountedVerdict finitely_covered(const Function& f, const Family& gs, const Window& win);

// ⟨s, A⟩ with A given as indices into a registered family
struct EDCondition {
  FinFn s;
  std::vector<std::size_t> A;
};

bool ed_leq(const EDCondition& c2, const EDCondition& c1, const Family& family, const Window& win);

struct GreedyResult {
  FinFn g;
  Trace trace;  // steps C (member enters), E (hit f), D (fill n)
};

GreedyResult greedy_generic(const Family& A, const Family& F, std::size_t stages, const Window& win);

// replays the pair-adding records of a madness trace (values may repeat)
FinFn replay_function(const Trace& trace);

struct EncodeVmResult {
  FinFn g;
  Nat start = 0;
  Trace trace;  // every point with the stage that defined it
};

EncodeVmResult encode_vm(const Family& A, const Family& F, const std::vector<int>& chi, const Window& win);
std::vector<int> decode_vm(const FinFn& g, std::size_t bits, Nat start = 0);

bool is_orthogonal(const Family& A, const Family& B, const Window& win);

// H(S) for S ⊆ B (sorted member indices): W-sets and designated A-members,
// g0[i], g1[i] belonging to the i-th member of S
using Subset = std::vector<std::size_t>;
struct GoodForEntry {
  std::set<Nat> W0, W1;
  std::vector<std::size_t> g0, g1;
};
struct GoodForWitness {
  std::map<Subset, GoodForEntry> entries;
};

// distinctness, domain agreement, W-sets of size > threshold, H1 (designated
// members below a_limit when given) and H2 (antitone W-sets)
bool is_good_for(const GoodForWitness& H, const Family& B, const Family& A, const Window& win,
                 std::optional<std::size_t> a_limit = {});

struct OrthogonalStepResult {
  FinFn g;
  GoodForWitness H;  // input entries plus one for every S ∪ {new member}
  Trace trace;
  std::size_t new_index = 0;  // index of ḡ in B_prev ∪ {ḡ}
};

// designated: A-indices g_{0,α}, g_{1,α}, g_{2,α}, … for this step (at least two)
OrthogonalStepResult orthogonal_step(const Family& A, const std::vector<std::size_t>& designated,
                                     const Family& B_prev, const GoodForWitness& H, const Family& F,
                                     std::size_t stages, const Window& win);

// all subsets of {0..m-1}, by size then lexicographically
std::vector<Subset> subsets_in_order(std::size_t m);

Function as_function(const FinFn& g);

}  // namespace cofin
