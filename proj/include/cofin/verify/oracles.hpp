#pragma once

// Slow, independent reference implementations used by the unit tests, the
// acceptance binary and `cofwb verify`.  Nothing here shares evaluation code
// with the library beyond the data types.

#include <vector>

#include "cofin/core.hpp"
#include "cofin/words.hpp"

namespace cofin::oracle {

// letter-by-letter evaluation straight off the generator functions
MaybeNat eval(const std::vector<Letter>& app_order, const std::vector<PartialInjection>& as, const GroupContext& ctx,
              Nat n, const Window& win);

// every split w = u⁻¹zu with the outer letters checked pairwise on the whole
// window, every l and every k < W enumerated
bool good_extension(const std::vector<PartialInjection>& p, const std::vector<PartialInjection>& q, const Word& w,
                    const GroupContext& ctx, const Window& win);

bool very_good_extension(const std::vector<PartialInjection>& p, const std::vector<PartialInjection>& q,
                         const Word& w, const GroupContext& ctx, const Window& win);

std::size_t fixed_point_count(const Word& w, const std::vector<PartialInjection>& as, const GroupContext& ctx,
                              const Window& win);

// one abelian factor (order 0 = ℤ): every walk of length ≤ depth along the
// components whose exponent sums vanish mod the orders comes back to its start
bool abelian_in_poset(const std::vector<PartialInjection>& p, const std::vector<Nat>& orders, std::size_t depth);

// some pair of S is already in p, or extends p very well for every word
bool serves(const std::vector<NatPair>& S, const PartialInjection& p, const std::vector<Word>& words,
            const GroupContext& ctx, const Window& win);

}  // namespace cofin::oracle
