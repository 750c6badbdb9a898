#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cofin/core.hpp"
#include "cofin/trace.hpp"
#include "cofin/words.hpp"

namespace cofin {

struct OrbitPartition {
  std::vector<std::vector<Nat>> orbits;  // sorted members; orbits ordered by least member
  std::vector<bool> truncated;           // some generator leaves the window (or is undefined) on it
  std::vector<std::size_t> orbit_of;     // point → orbit id, for points < W

  std::size_t id(Nat n) const;  // throws InvalidArgument outside the window
  std::size_t size() const { return orbits.size(); }
};

OrbitPartition compute_orbits(const std::vector<Function>& gens, const Window& win);
OrbitPartition compute_orbits(const GroupContext& ctx, const Window& win);

struct CrossingResult {
  PartialInjection h;
  Trace trace;
};

// each stage links the least point missing from dom ∪ ran to the least
// member of the first orbit untouched by h, by n and by the window edge
CrossingResult build_crossing_h(const OrbitPartition& orbits, std::size_t stages, const Window& win);

struct OrbitEdge {
  std::size_t i, j;  // orbit of a, orbit of b
  Nat a, b;
};

struct OrbitTree {
  std::size_t vertices = 0;
  std::vector<OrbitEdge> edges;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj;  // (neighbour, edge index)

  std::vector<std::size_t> distances(std::size_t from) const;  // SIZE_MAX when unreachable
};

// pairs with a coordinate outside the window are ignored
OrbitTree orbit_tree(const PartialInjection& h, const OrbitPartition& orbits);

std::vector<std::size_t> orbit_path(const Word& w, const PartialInjection& h, const GroupContext& ctx,
                                    const OrbitPartition& orbits, Nat n, const Window& win);

struct FixedPointWitness {
  std::size_t occurrence;  // letter index (application order) of the group letter
  Nat point;               // fixed by that letter
};

FixedPointWitness fixed_point_witness(const Word& w, const PartialInjection& h, const GroupContext& ctx,
                                      const OrbitPartition& orbits, Nat n, const Window& win);
FixedPointWitness fixed_point_witness(const Word& w, const PartialInjection& h, const GroupContext& ctx,
                                      const OrbitPartition& orbits, const OrbitTree& tree, Nat n,
                                      const Window& win);

// ---- finitely many orbits ----

struct FiniteOrbitGroup {
  std::size_t n_inf = 1, m_fin = 0;
  Nat finite_total = 0;                       // finite blocks cover [0, finite_total)
  std::vector<Nat> finite_start;              // F_i = [finite_start[i], finite_start[i+1])
  std::vector<Function> generators;           // g_0, then one per target
  std::vector<int> cases;                     // per target: 1, 2, or 0 when neither shows at window scale
  std::vector<std::vector<Nat>> prescribed;   // blocks F_0..F_{m-1}, O_0..O_{n-1} cut to the window
  Trace trace;

  std::size_t block_of(Nat n) const;          // 0..m-1 finite, m.. infinite
};

FiniteOrbitGroup build_finite_orbit_group(std::size_t n_inf, std::size_t m_fin, const Window& win,
                                          std::size_t stages, const std::vector<Function>& targets);

// ---- K_σ ----

struct KInterval {
  Nat i = 0, p = 0, end = 0;  // [i, end) with distinguished p; end = f(p)
};

// intervals with i_n and p_n inside the window
std::vector<KInterval> build_ksigma_partition(const std::function<Nat(Nat)>& f, const Window& win);
std::vector<KInterval> build_ksigma_partition(const Function& f, const Window& win);

struct KSigmaReport {
  bool prop1 = true, prop2 = true, prop3 = true, prop4 = true, main = true;
  Nat M = 0;
  std::size_t main_checked = 0;
  std::vector<std::string> violations;
  bool all() const { return prop1 && prop2 && prop3 && prop4 && main; }
};

struct KSigmaResult {
  PartialInjection h;
  std::vector<KInterval> partition;
  KSigmaReport report;
  Trace trace;
};

KSigmaReport check_ksigma(const PartialInjection& h, const std::vector<KInterval>& partition, const Function& f,
                          const std::vector<Function>& samples, const Window& win);
// samples: members of G (bounded by f) for the main property; their inverses must evaluate
KSigmaResult build_ksigma_h(const Function& f, const Window& win, std::size_t stages,
                            const std::vector<Function>& samples = {});

}  // namespace cofin
