#pragma once

#include <set>
#include <vector>

#include "cofin/core.hpp"
#include "cofin/extension.hpp"
#include "cofin/trace.hpp"
#include "cofin/words.hpp"

namespace cofin {

// 1 iff w = u⁻¹zu without cancellation for some nonempty u
int gamma(const Word& w, const GroupContext& ctx, const Window& win);

struct CodingCursor {
  Nat m = 0;          // current location: the next bit goes into w(g)(m)
  std::size_t l = 0;  // next bit index
  int gamma = 0;
};

struct CodedWord {
  Word w;
  int gamma = 0;
  Nat start = 0;         // first location
  Nat m = 0;             // decoder parameter: first coded value (mode 0) or start (mode 1)
  bool started = false;  // the word got its start stage
  std::size_t encoded = 0;
};

struct CfgResult {
  PartialInjection g;
  Trace trace;  // steps: domain, range, hit, code, climax, start
  std::vector<CodedWord> words;
  std::vector<CodingCursor> cursors;
  std::set<Nat> avoid;  // reserved at the end
};

// ctx must hold base_h as one of its generators; schedule words use the variable x only
CfgResult encode_cfg(const GroupContext& ctx, const std::vector<Function>& targets, const std::vector<int>& bits,
                     const std::vector<Word>& schedule, std::size_t stages, const Window& win);

// w(g) on the window
PartialFn word_image(const Word& w, const PartialInjection& g, const GroupContext& ctx, const Window& win);

// mode 0: second projection of fⁿ(m); mode 1: of f(hf)ⁿ(m), h = base_h
int decode_cfg(const PartialFn& f, Nat m, int epsilon, Nat n, const Window& win);
std::vector<int> decode_cfg_bits(const PartialFn& f, Nat m, int epsilon, std::size_t count, const Window& win);

}  // namespace cofin
