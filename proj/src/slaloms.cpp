#include "cofin/slaloms.hpp"

#include <algorithm>

namespace cofin {

namespace {
const FinSet kEmpty;

bool subset(const FinSet& a, const FinSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }
}  // namespace

const FinSet& Slalom::at(Nat n) const {
  auto it = phi_.find(n);
  return it == phi_.end() ? kEmpty : it->second;
}

std::optional<Nat> Slalom::width_violation(const Window& win) const {
  for (auto& [n, s] : phi_)
    if (n < win.size && s.size() > n) return n;
  return std::nullopt;
}

LocalizeResult localizes(const Slalom& s, const Function& f, const Window& win) {
  LocalizeResult r;
  Nat m = win.size;
  while (m > 0) {
    auto v = f.apply(m - 1);
    if (!v || !s.at(m - 1).count(*v)) break;
    --m;
  }
  if (m < win.size) {
    r.holds = true;
    r.m = m;
  }
  return r;
}

const FinSet& LOCCondition::phi_at(Nat n) const {
  auto it = phi.find(n);
  return it == phi.end() ? kEmpty : it->second;
}

bool LOCCondition::valid(const Window& win) const {
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i].size() > i) return false;
  for (auto& [n, s] : phi)
    if (n < win.size && s.size() > sigma.size()) return false;
  return true;
}

bool loc_leq(const LOCCondition& q, const LOCCondition& p, const Window& win) {
  const auto lt = q.sigma.size(), ls = p.sigma.size();
  if (lt < ls) return false;
  if (!std::equal(p.sigma.begin(), p.sigma.end(), q.sigma.begin())) return false;
  for (std::size_t j = ls; j < lt; ++j)
    if (!subset(p.phi_at(j), q.sigma[j])) return false;
  for (auto& [j, s] : p.phi)
    if (j < win.size && !subset(s, q.phi_at(j))) return false;
  return true;
}

LOCCondition localize_move(const LOCCondition& p, const Function& f, const Window& win) {
  LOCCondition q = p;
  q.sigma.push_back(p.phi_at(p.sigma.size()));
  for (Nat n = 0; n < win.size; ++n) {
    auto v = f.apply(n);
    if (!v) throw InvalidArgument("localize", "real undefined at " + std::to_string(n));
    q.phi[n].insert(*v);
  }
  return q;
}

Slalom slalom_of(const LOCCondition& p, const Window& win) {
  std::map<Nat, FinSet> phi;
  for (std::size_t i = 0; i < p.sigma.size() && i < win.size; ++i)
    if (!p.sigma[i].empty()) phi[i] = p.sigma[i];
  for (auto& [n, s] : p.phi)
    if (n >= p.sigma.size() && n < win.size && !s.empty()) phi[n] = s;
  return Slalom(std::move(phi));
}

LocalizerResult greedy_localizer(const std::vector<Function>& reals, std::size_t stages, const Window& win) {
  if (reals.size() > stages)
    throw CapacityExceeded("localize", std::to_string(reals.size()) + " reals need as many stages, budget " +
                                           std::to_string(stages));
  if (stages >= win.size) throw WindowExhausted("localize", "σ would outgrow the window");
  LocalizerResult res;
  res.ingested_at.assign(reals.size(), 0);
  res.conditions.push_back({});
  for (std::size_t s = 0; s < stages; ++s) {
    const auto& p = res.conditions.back();
    LOCCondition q;
    std::size_t idx = 0;
    if (reals.empty()) {
      q = p;
      q.sigma.push_back(p.phi_at(p.sigma.size()));
    } else {
      idx = s % reals.size();
      q = localize_move(p, reals[idx], win);
      if (s < reals.size()) res.ingested_at[idx] = q.sigma.size();
    }
    TraceRecord r;
    r.stage = s;
    r.step = "D_f";
    r.adds = false;
    r.a = idx;
    r.b = q.sigma.size();
    res.trace.records.push_back(std::move(r));
    res.conditions.push_back(std::move(q));
  }
  res.slalom = slalom_of(res.conditions.back(), win);
  return res;
}

bool bw_leq(const Slalom& s, const Slalom& s2, const Window& win) {
  for (auto& [n, set] : s2.entries())
    if (n < win.size && !subset(set, s.at(n))) return false;
  return true;
}

LOCCondition bw_to_loc(const Slalom& s, const Window& win) {
  std::size_t l = 0;
  for (auto& [n, set] : s.entries())
    if (n < win.size) l = std::max(l, set.size());
  LOCCondition c;
  for (std::size_t i = 0; i < l; ++i) c.sigma.push_back(s.at(i));
  for (auto& [n, set] : s.entries())
    if (n < win.size) c.phi[n] = set;
  return c;
}

}  // namespace cofin
