#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "cofin/core.hpp"
#include "cofin/trace.hpp"
#include "cofin/words.hpp"

namespace cofin {

// factors of w that contain a variable letter, w itself included, no repeats
std::vector<Word> variable_subwords(const Word& w);

// A set of words closed under variable_subwords, each with its peel depth
// cached (the depth check composes group letters on the whole window).
class WordSet {
 public:
  struct Item {
    Word w;
    std::size_t depth;
  };

  WordSet() = default;
  WordSet(std::span<const Word> ws, const GroupContext& ctx, const Window& win);
  void add(const Word& w, const GroupContext& ctx, const Window& win);
  const std::vector<Item>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<Item> items_;
};

// w(q)(l) = l is witnessed when some proper w = u⁻¹zu has z(p)(k) = k for k = u(q)(l)
bool fixed_point_witnessed(const Word& w, std::size_t depth, const Assignment& p, const Assignment& q, Nat l,
                           const GroupContext& ctx, const Window& win);

bool is_good_extension(std::span<const PartialInjection> p, std::span<const PartialInjection> q, const Word& w,
                       const GroupContext& ctx, const Window& win);
bool is_good_extension(const PartialInjection& p, const PartialInjection& q, const Word& w, const GroupContext& ctx,
                       const Window& win);
bool is_very_good_extension(std::span<const PartialInjection> p, std::span<const PartialInjection> q,
                            const Word& w, const GroupContext& ctx, const Window& win);
bool is_very_good_extension(const PartialInjection& p, const PartialInjection& q, const Word& w,
                            const GroupContext& ctx, const Window& win);

// Fixed points l < W of w(p ∪ {(a,b)} on var) whose path uses the new pair.
// Requires a ∉ dom(p_var), b ∉ ran(p_var); then these are exactly the new
// fixed points.
std::vector<Nat> new_fixed_points(const Word& w, const Assignment& p, std::size_t var, Nat a, Nat b,
                                  const GroupContext& ctx, const Window& win);

struct PairVerdict {
  bool good = true;
  bool very_good = true;
  // every unwitnessed new fixed point runs on the new pair and group letters alone
  bool self_caused = true;
};

PairVerdict judge_pair(const Assignment& p, std::size_t var, Nat a, Nat b, const WordSet& words,
                       const GroupContext& ctx, const Window& win);
bool is_good_pair(const Assignment& p, std::size_t var, Nat a, Nat b, const WordSet& words, const GroupContext& ctx,
                  const Window& win);

struct SearchStats {
  std::size_t occupied = 0;     // candidate already in ran/dom
  std::size_t bad = 0;          // failed goodness
  std::size_t self_caused = 0;  // subset of bad: fixed point from the new pair alone
  std::size_t rejected() const { return occupied + bad; }
};

struct SearchOptions {
  const std::set<Nat>* forbidden = nullptr;
  std::optional<Nat> bound;               // inclusive; default W-1 (stay inside the window)
  std::function<bool(Nat)> admissible;    // extra candidate filter
  SearchStats* stats = nullptr;
  bool very_good = false;                 // demand very good instead of good
};

using PartialFn = std::function<MaybeNat(Nat)>;

Nat find_domain_extension(std::span<const PartialInjection> p, std::size_t var, Nat a, const WordSet& words,
                          const GroupContext& ctx, const Window& win, const SearchOptions& opt = {});
Nat find_range_extension(std::span<const PartialInjection> p, std::size_t var, Nat b, const WordSet& words,
                         const GroupContext& ctx, const Window& win, const SearchOptions& opt = {});
Nat find_hitting_extension(std::span<const PartialInjection> p, std::size_t var, const PartialFn& f,
                           const WordSet& words, const GroupContext& ctx, const Window& win,
                           const SearchOptions& opt = {});

// the plain signatures
Nat find_domain_extension(const std::vector<PartialInjection>& p, std::size_t var, Nat a,
                          const std::vector<Word>& words, const GroupContext& ctx, const Window& win,
                          const std::set<Nat>& forbidden, std::optional<Nat> search_bound = {});
Nat find_range_extension(const std::vector<PartialInjection>& p, std::size_t var, Nat b,
                         const std::vector<Word>& words, const GroupContext& ctx, const Window& win,
                         const std::set<Nat>& forbidden, std::optional<Nat> search_bound = {});
Nat find_hitting_extension(const PartialInjection& p, const Function& f, const std::vector<Word>& words,
                           const GroupContext& ctx, const Window& win, const std::set<Nat>& forbidden,
                           std::optional<Nat> search_bound = {});

struct BuildSchedule {
  std::vector<Word> words;  // word s becomes active at stage s
  std::vector<Function> targets;
  std::size_t stages = 0;
  Window window;
  std::set<Nat> forbidden;
  std::optional<Nat> search_bound;
};

struct BuildResult {
  PartialInjection g;
  Trace trace;
};

BuildResult build_cofinitary_generator(const GroupContext& ctx, const BuildSchedule& schedule);

// per-word fixed-point counts on the window
std::vector<std::size_t> fixed_point_counts(const std::vector<Word>& ws, std::span<const PartialInjection> g,
                                            const GroupContext& ctx, const Window& win);

struct FixedPointProfile {
  std::vector<std::size_t> per_stage;  // after each stage
  std::size_t entry_stage = 0;
  Word shortest;
  std::size_t shortest_at_entry = 0;  // |Fix z(g_t)|, g_t = state at the start of the entry stage
};

FixedPointProfile fixed_point_profile(const Word& w, const Trace& trace, const GroupContext& ctx, const Window& win,
                                      std::optional<std::size_t> entry_stage = {});

}  // namespace cofin
