#include "cofin/orbits.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "cofin/extension.hpp"

namespace cofin {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

TraceRecord record(std::size_t stage, const std::string& step, Nat a, Nat b, std::size_t var = 0) {
  TraceRecord r;
  r.stage = stage;
  r.step = step;
  r.var = var;
  r.a = a;
  r.b = b;
  return r;
}

}  // namespace

std::size_t OrbitPartition::id(Nat n) const {
  if (n >= orbit_of.size()) throw InvalidArgument("orbits", "point " + std::to_string(n) + " outside the window");
  return orbit_of[n];
}

OrbitPartition compute_orbits(const std::vector<Function>& gens, const Window& win) {
  UnionFind uf(win.size);
  std::vector<bool> edge(win.size, false);
  for (auto& g : gens)
    for (Nat n = 0; n < win.size; ++n) {
      auto v = g.apply(n);
      if (v && *v < win.size)
        uf.unite(n, *v);
      else
        edge[n] = true;
      auto u = g.inverse(n);
      if (!u || *u >= win.size) edge[n] = true;
    }
  OrbitPartition out;
  out.orbit_of.assign(win.size, 0);
  std::map<std::size_t, std::size_t> root_id;  // roots are least members, so ids follow minima
  for (Nat n = 0; n < win.size; ++n) {
    auto r = uf.find(n);
    auto [it, fresh] = root_id.emplace(r, out.orbits.size());
    if (fresh) {
      out.orbits.emplace_back();
      out.truncated.push_back(false);
    }
    out.orbit_of[n] = it->second;
    out.orbits[it->second].push_back(n);
    if (edge[n]) out.truncated[it->second] = true;
  }
  return out;
}

OrbitPartition compute_orbits(const GroupContext& ctx, const Window& win) {
  std::vector<Function> gens;
  for (std::size_t i = 0; i < ctx.size(); ++i) gens.push_back(ctx.generator(i));
  return compute_orbits(gens, win);
}

CrossingResult build_crossing_h(const OrbitPartition& orbits, std::size_t stages, const Window& win) {
  CrossingResult res;
  auto& h = res.h;
  std::vector<bool> touched(orbits.size(), false);
  for (std::size_t s = 0; s < stages; ++s) {
    Nat n = 0;
    while (h.in_domain(n) && h.in_range(n)) ++n;
    if (n >= win.size) throw WindowExhausted("crossing-h", "stage " + std::to_string(s));
    std::size_t own = orbits.id(n);
    std::size_t j = 0;
    while (j < orbits.size() && (touched[j] || j == own || orbits.truncated[j])) ++j;
    if (j == orbits.size()) throw OrbitsExhausted("crossing-h", "no fresh orbit at stage " + std::to_string(s));
    Nat m = orbits.orbits[j].front();
    TraceRecord r;
    if (!h.in_domain(n)) {
      h.add(n, m);
      r = record(s, "cross", n, m);
    } else {
      h.add(m, n);
      r = record(s, "cross", m, n);
    }
    r.info["orbit"] = static_cast<std::int64_t>(j);
    res.trace.records.push_back(r);
    touched[j] = touched[own] = true;
  }
  return res;
}

std::vector<std::size_t> OrbitTree::distances(std::size_t from) const {
  std::vector<std::size_t> d(vertices, SIZE_MAX);
  std::deque<std::size_t> q{from};
  d[from] = 0;
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (auto [u, e] : adj[v])
      if (d[u] == SIZE_MAX) {
        d[u] = d[v] + 1;
        q.push_back(u);
      }
  }
  return d;
}

OrbitTree orbit_tree(const PartialInjection& h, const OrbitPartition& orbits) {
  OrbitTree t;
  t.vertices = orbits.size();
  t.adj.resize(t.vertices);
  UnionFind uf(t.vertices);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  Nat W = orbits.orbit_of.size();
  for (auto [a, b] : h.pairs()) {
    if (a >= W || b >= W) continue;
    auto i = orbits.id(a), j = orbits.id(b);
    std::string where = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    if (i == j) throw NotATree("orbit-tree", "self-loop at orbit " + std::to_string(i) + " from " + where);
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
      throw NotATree("orbit-tree", "second crossing between orbits " + std::to_string(i) + "," + std::to_string(j));
    if (!uf.unite(i, j))
      throw NotATree("orbit-tree", "cycle closed by " + where);
    t.adj[i].push_back({j, t.edges.size()});
    t.adj[j].push_back({i, t.edges.size()});
    t.edges.push_back({i, j, a, b});
  }
  return t;
}

std::vector<std::size_t> orbit_path(const Word& w, const PartialInjection& h, const GroupContext& ctx,
                                    const OrbitPartition& orbits, Nat n, const Window& win) {
  auto path = evaluation_path(w, Assignment(h), ctx, n, win);
  std::vector<std::size_t> out;
  for (Nat z : path.points) out.push_back(orbits.id(z));
  return out;
}

FixedPointWitness fixed_point_witness(const Word& w, const PartialInjection& h, const GroupContext& ctx,
                                      const OrbitPartition& orbits, Nat n, const Window& win) {
  return fixed_point_witness(w, h, ctx, orbits, orbit_tree(h, orbits), n, win);
}

FixedPointWitness fixed_point_witness(const Word& w, const PartialInjection& h, const GroupContext& ctx,
                                      const OrbitPartition& orbits, const OrbitTree& tree, Nat n,
                                      const Window& win) {
  Assignment as(h);
  auto path = evaluation_path(w, as, ctx, n, win);
  if (path.points.size() != w.size() + 1 || path.points.back() != n)
    throw NotAFixedPoint("fixed-point-witness", "n=" + std::to_string(n));
  if (w.empty()) throw WitnessNotFound("fixed-point-witness", "identity word");
  auto dist = tree.distances(orbits.id(n));
  std::size_t best = 0;
  for (std::size_t i = 0; i < path.points.size(); ++i)
    if (dist[orbits.id(path.points[i])] > dist[orbits.id(path.points[best])]) best = i;
  // best is the first point in a farthest orbit; the letter applied there
  // has to be the group letter that turns around
  std::size_t occ = best;
  if (occ >= w.size() || !w.letters()[occ].is_group())
    throw WitnessNotFound("fixed-point-witness", "n=" + std::to_string(n) + " at letter " + std::to_string(occ));
  Nat z = path.points[occ];
  if (ctx.apply(w.letters()[occ].elem, z, win) != z)
    throw WitnessNotFound("fixed-point-witness", "group letter moves " + std::to_string(z));
  return {occ, z};
}

// ---- finitely many orbits ----

std::size_t FiniteOrbitGroup::block_of(Nat n) const {
  if (n < finite_total)
    return static_cast<std::size_t>(std::upper_bound(finite_start.begin(), finite_start.end(), n) -
                                    finite_start.begin()) - 1;
  return m_fin + static_cast<std::size_t>((n - finite_total) % n_inf);
}

namespace {

std::vector<std::string> schedule_texts(std::size_t gens) {
  std::vector<std::string> out = {"x", "x^2", "x^3"};
  for (std::size_t j = 0; j < gens; ++j) {
    std::string g = "g" + std::to_string(j);
    for (auto t : {g + " x", g + "^-1 x", "x " + g + " x", "x " + g + "^-1 x", g + " x^2"}) out.push_back(t);
  }
  return out;
}

}  // namespace

FiniteOrbitGroup build_finite_orbit_group(std::size_t n_inf, std::size_t m_fin, const Window& win,
                                          std::size_t stages, const std::vector<Function>& targets) {
  if (n_inf == 0) throw InvalidArgument("finite-orbits", "need at least one infinite orbit");
  FiniteOrbitGroup G;
  G.n_inf = n_inf;
  G.m_fin = m_fin;
  // F_i has i+2 points
  Nat at = 0;
  for (std::size_t i = 0; i < m_fin; ++i) {
    G.finite_start.push_back(at);
    at += i + 2;
  }
  G.finite_total = at;
  G.finite_start.push_back(at);
  if (at + 2 * n_inf > win.size) throw WindowExhausted("finite-orbits", "blocks do not fit the window");
  const Nat T = at;

  auto enum_inf = [&](std::size_t j, Nat k) { return T + j + k * n_inf; };
  auto g0 = [&](Nat n) -> Nat {
    if (n < T) {
      auto b = G.block_of(n);
      Nat lo = G.finite_start[b], hi = G.finite_start[b + 1];
      return n + 1 == hi ? lo : n + 1;
    }
    std::size_t j = (n - T) % n_inf;
    return enum_inf(j, base_h((n - T) / n_inf));
  };
  G.generators.push_back(Function::tabulate([&](Nat n) -> MaybeNat { return g0(n); }, win.size));

  G.prescribed.resize(m_fin + n_inf);
  for (Nat n = 0; n < win.size; ++n) G.prescribed[G.block_of(n)].push_back(n);

  auto in_block = [&](std::size_t blk) { return [&G, blk](Nat n) { return G.block_of(n) == blk; }; };
  auto least_in = [&](auto pred, const std::string& what) {
    for (Nat n = 0; n < win.size; ++n)
      if (pred(n)) return n;
    throw WindowExhausted("finite-orbits", what);
  };
  const std::size_t O0 = m_fin;

  for (std::size_t beta = 1; beta <= targets.size(); ++beta) {
    const Function& f = targets[beta - 1];
    GroupContext ctx;
    for (std::size_t j = 0; j < beta; ++j) ctx.add("g" + std::to_string(j), G.generators[j]);
    WordSet words;
    for (auto& t : schedule_texts(beta)) words.add(Word::parse(t, ctx, win), ctx, win);

    PartialInjection p;
    for (Nat n = 0; n < T && n < win.size; ++n) p.add(n, g0(n));

    // which case shows at window scale
    std::vector<std::size_t> cross(n_inf, 0);
    for (Nat n : G.prescribed[O0]) {
      auto v = f.apply(n);
      if (v && *v < win.size && *v >= T) ++cross[G.block_of(*v) - m_fin];
    }
    int which = 0;
    std::size_t blk_i = 0;
    if (cross[0] > win.threshold) {
      which = 1;
    } else {
      for (std::size_t i = 1; i < n_inf; ++i)
        if (cross[i] > cross[blk_i] || blk_i == 0) blk_i = i;
      if (blk_i != 0 && cross[blk_i] > win.threshold) which = 2;
    }
    std::set<Nat> R;
    if (which == 2)
      for (Nat n : G.prescribed[O0]) {
        auto v = f.apply(n);
        if (v && *v < win.size && *v >= T && G.block_of(*v) == m_fin + blk_i) R.insert(*v);
      }
    G.cases.push_back(which);
    {
      auto r = record(0, "case", 0, 0, beta);
      r.adds = false;
      r.info["case"] = which;
      r.info["block"] = which == 2 ? static_cast<std::int64_t>(blk_i) : 0;
      r.info["R"] = static_cast<std::int64_t>(R.size());
      G.trace.records.push_back(r);
    }

    std::span<const PartialInjection> span(&p, 1);
    for (std::size_t s = 0; s < stages; ++s) {
      std::function<MaybeNat(Nat)> target;
      if (which == 1) {
        target = [&](Nat n) -> MaybeNat {
          if (G.block_of(n) != O0) return std::nullopt;
          auto v = f.apply(n);
          if (!v || *v >= win.size || G.block_of(*v) != O0) return std::nullopt;
          return v;
        };
      } else if (which == 2) {
        // a pair of g^{O_i} inside R × R whose f-pullback is free on O_0
        auto pre = [&](Nat y) { return f.inverse(y); };
        MaybeNat a;
        for (Nat y : R)
          if (!p.in_domain(y) && pre(y) && !p.in_domain(*pre(y))) {
            a = y;
            break;
          }
        if (a) {
          SearchOptions opt;
          opt.admissible = [&](Nat b) { return R.count(b) && pre(b) && !p.in_range(*pre(b)); };
          try {
            Nat b = find_domain_extension(span, 0, *a, words, ctx, win, opt);
            p.add(*a, b);
            G.trace.records.push_back(record(s, "R", *a, b, beta));
          } catch (const SearchExhausted&) {
            auto r = record(s, "R-miss", *a, 0, beta);
            r.adds = false;
            G.trace.records.push_back(r);
          }
        }
        target = [&](Nat n) -> MaybeNat {
          if (G.block_of(n) != O0) return std::nullopt;
          auto y = f.apply(n);
          if (!y || !R.count(*y)) return std::nullopt;
          auto z = p.apply(*y);
          if (!z || !R.count(*z)) return std::nullopt;
          auto back = f.inverse(*z);
          if (!back || *back >= win.size) return std::nullopt;
          return back;
        };
      }
      if (target) {
        SearchOptions opt;
        opt.admissible = in_block(O0);
        try {
          Nat n = find_hitting_extension(span, 0, target, words, ctx, win, opt);
          Nat v = *target(n);
          p.add(n, v);
          auto r = record(s, "hit", n, v, beta);
          r.info["case"] = which;
          G.trace.records.push_back(r);
        } catch (const SearchExhausted&) {
          auto r = record(s, "hit-miss", 0, 0, beta);
          r.adds = false;
          G.trace.records.push_back(r);
        }
      }
      for (std::size_t j = 0; j < n_inf; ++j) {
        std::size_t blk = m_fin + j;
        SearchOptions opt;
        opt.admissible = in_block(blk);
        Nat a = least_in([&](Nat n) { return G.block_of(n) == blk && !p.in_domain(n); }, "domain point");
        Nat b = find_domain_extension(span, 0, a, words, ctx, win, opt);
        p.add(a, b);
        G.trace.records.push_back(record(s, "domain", a, b, beta));
        b = least_in([&](Nat n) { return G.block_of(n) == blk && !p.in_range(n); }, "range point");
        a = find_range_extension(span, 0, b, words, ctx, win, opt);
        p.add(a, b);
        G.trace.records.push_back(record(s, "range", a, b, beta));
      }
    }
    G.generators.push_back(Function::table(p.pairs()));
  }
  G.trace.arity = G.generators.size();
  return G;
}

// ---- K_σ ----

std::vector<KInterval> build_ksigma_partition(const std::function<Nat(Nat)>& f, const Window& win) {
  std::vector<KInterval> out;
  Nat i = 0;
  while (i < win.size) {
    Nat p = f(i);
    if (p <= i) throw InvalidArgument("ksigma", "f must be strictly increasing with f(0) > 0");
    if (p >= win.size) break;
    Nat end = f(p);
    out.push_back({i, p, end});
    i = end;
  }
  return out;
}

std::vector<KInterval> build_ksigma_partition(const Function& f, const Window& win) {
  return build_ksigma_partition(
      [&](Nat n) {
        auto v = f.apply(n);
        if (!v) throw InvalidArgument("ksigma", "f undefined at " + std::to_string(n));
        return *v;
      },
      win);
}

namespace {

// interval containing x, or partition.size() past the last one
std::size_t interval_index(const std::vector<KInterval>& part, Nat x) {
  auto it = std::upper_bound(part.begin(), part.end(), x, [](Nat v, const KInterval& k) { return v < k.end; });
  return static_cast<std::size_t>(it - part.begin());
}

}  // namespace

KSigmaReport check_ksigma(const PartialInjection& h, const std::vector<KInterval>& part, const Function& f,
                          const std::vector<Function>& samples, const Window& win) {
  KSigmaReport rep;
  auto pairs = h.pairs();
  auto fail = [&](bool& flag, const std::string& why) {
    flag = false;
    if (rep.violations.size() < 20) rep.violations.push_back(why);
  };
  auto pstr = [](Nat a, Nat b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; };
  for (auto [a, b] : pairs) {
    auto n = interval_index(part, a);
    if (n > 0 && n < part.size() && a != part[n].p && !(b > part[n].end)) fail(rep.prop1, "1: " + pstr(a, b));
    n = interval_index(part, b);
    if (n > 0 && n < part.size() && b != part[n].p && !(a > part[n].end)) fail(rep.prop2, "2: " + pstr(a, b));
  }
  for (std::size_t n = 1; n < part.size(); ++n) {
    auto a = h.apply_inverse(part[n].p), b = h.apply(part[n].p);
    if (a && b && *a < part[n].i && *b < part[n].i) fail(rep.prop3, "3: n=" + std::to_string(n));
  }
  std::vector<NatPair> both = pairs;
  for (auto [a, b] : pairs) both.emplace_back(b, a);
  for (auto [a0, b0] : both)
    for (auto [a1, b1] : both)
      // arcs sharing an endpoint do not cross (the strict reading fails whenever a = b)
      if (a0 < a1 && a1 < b0 && !(b1 <= a0 || b1 >= b0)) fail(rep.prop4, "4: " + pstr(a0, b0) + pstr(a1, b1));

  // threshold beyond which every sample and its inverse are below f, plus
  // the preimages of the inverse's exceptional region
  auto fv = [&](Nat n) { return f.apply(n); };
  Nat M = 0;
  for (auto& g : samples) {
    Nat M1 = 0;
    for (Nat n = 0; n < win.size; ++n) {
      auto v = g.apply(n);
      if (!v || !fv(n) || *v >= *fv(n)) M = std::max(M, n + 1);
      auto u = g.inverse(n);
      if (!u || !fv(n) || *u >= *fv(n)) M1 = n + 1;
    }
    M = std::max(M, M1);
    for (Nat y = 0; y < M1; ++y)
      if (auto u = g.inverse(y)) M = std::max(M, *u + 1);
  }
  rep.M = M;
  for (auto& g : samples)
    for (auto& k : part) {
      if (k.i < M) continue;
      ++rep.main_checked;
      auto v = g.apply(k.p);
      if (!v || *v < k.i || *v >= k.end) fail(rep.main, "main: p=" + std::to_string(k.p));
    }
  return rep;
}

KSigmaResult build_ksigma_h(const Function& f, const Window& win, std::size_t stages,
                            const std::vector<Function>& samples) {
  KSigmaResult res;
  res.partition = build_ksigma_partition(f, win);
  auto& part = res.partition;
  auto& h = res.h;
  auto next_interval = [&](Nat extra, const char* which, std::size_t s) {
    Nat mx = std::max(extra, h.max_point().value_or(0));
    auto n = interval_index(part, mx) + 1;
    if (n >= part.size())
      throw WindowExhausted("ksigma", std::string(which) + " step of stage " + std::to_string(s) +
                                          " needs interval " + std::to_string(n));
    return n;
  };
  for (std::size_t s = 0; s < stages; ++s) {
    Nat a = 0;
    while (h.in_domain(a)) ++a;
    auto n = next_interval(a, "domain", s);
    h.add(a, part[n].p);
    auto r = record(s, "domain", a, part[n].p);
    r.info["interval"] = static_cast<std::int64_t>(n);
    res.trace.records.push_back(r);
    Nat b = 0;
    while (h.in_range(b)) ++b;
    auto m = next_interval(b, "range", s);
    h.add(part[m].p, b);
    r = record(s, "range", part[m].p, b);
    r.info["interval"] = static_cast<std::int64_t>(m);
    res.trace.records.push_back(r);
  }
  res.report = check_ksigma(h, part, f, samples, win);
  return res;
}

}  // namespace cofin
