#include "cofin/trace.hpp"

#include <algorithm>

namespace cofin {

std::vector<PartialInjection> Trace::replay(std::size_t upto) const {
  std::vector<PartialInjection> g(arity);
  for (std::size_t i = 0; i < upto && i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.adds) continue;
    if (r.var >= g.size()) g.resize(r.var + 1);
    g[r.var].add(r.a, r.b);
  }
  return g;
}

std::vector<PartialInjection> Trace::state_before_stage(std::size_t stage) const {
  std::size_t upto = 0;
  while (upto < records.size() && records[upto].stage < stage) ++upto;
  return replay(upto);
}

std::size_t Trace::stage_count() const {
  std::size_t s = 0;
  for (auto& r : records) s = std::max(s, r.stage + 1);
  return s;
}

}  // namespace cofin
