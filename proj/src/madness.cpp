#include "cofin/madness.hpp"

#include <algorithm>
#include <string>

namespace cofin {

CountedVerdict eventually_different(const Function& f, const Function& g, const Window& win) {
  std::size_t agree = 0;
  for (Nat n = 0; n < win.size; ++n) {
    auto a = f.apply(n);
    if (a && a == g.apply(n)) ++agree;
  }
  return {agree <= win.threshold, agree};
}

namespace {

bool covered_at(const Function& f, const Family& gs, Nat k) {
  auto v = f.apply(k);
  if (!v) return true;  // nothing to cover
  for (auto& g : gs)
    if (g.apply(k) == v) return true;
  return false;
}

// values that members [0, upto) of A take at n
bool hits_family(const Family& A, std::size_t upto, Nat n, Nat v) {
  for (std::size_t j = 0; j < upto && j < A.size(); ++j)
    if (A[j].apply(n) == v) return true;
  return false;
}

Nat least_avoiding(const Family& A, std::size_t upto, Nat n) {
  Nat v = 0;
  while (hits_family(A, upto, n, v)) ++v;
  return v;
}

TraceRecord point_record(std::size_t stage, const std::string& step, Nat a, Nat b) {
  TraceRecord r;
  r.stage = stage;
  r.step = step;
  r.a = a;
  r.b = b;
  return r;
}

}  // namespace

CountedVerdict finitely_covered(const Function& f, const Family& gs, const Window& win) {
  std::size_t unc = 0;
  for (Nat k = 0; k < win.size; ++k)
    if (!covered_at(f, gs, k)) ++unc;
  return {unc <= win.threshold, unc};
}

bool ed_leq(const EDCondition& c2, const EDCondition& c1, const Family& family, const Window& win) {
  (void)win;
  for (auto [n, v] : c1.s) {
    auto it = c2.s.find(n);
    if (it == c2.s.end() || it->second != v) return false;
  }
  std::set<std::size_t> a2(c2.A.begin(), c2.A.end());
  for (auto i : c1.A) {
    if (!a2.count(i)) return false;
    if (i >= family.size()) throw InvalidArgument("ed_leq", "family index " + std::to_string(i));
  }
  for (auto i : c1.A)
    for (auto [n, v] : c2.s)
      if (family[i].apply(n) == v && !c1.s.count(n)) return false;
  return true;
}

GreedyResult greedy_generic(const Family& A, const Family& F, std::size_t stages, const Window& win) {
  GreedyResult res;
  auto& g = res.g;
  std::vector<Nat> last(F.size(), 0);
  std::vector<bool> started(F.size(), false);
  std::size_t entered = 0;
  for (std::size_t t = 0; t < stages; ++t) {
    if (t < A.size()) {
      entered = t + 1;
      auto r = point_record(t, "C", 0, 0);
      r.adds = false;
      r.info["member"] = static_cast<std::int64_t>(t);
      res.trace.records.push_back(r);
    }
    for (std::size_t j = 0; j < F.size(); ++j) {
      Nat m = std::max<Nat>(t, started[j] ? last[j] + 1 : 0);
      for (;; ++m) {
        if (m >= win.size)
          throw WindowExhausted("E_{f,n}", "target " + std::to_string(j) + " stage " + std::to_string(t));
        if (g.count(m)) continue;
        auto v = F[j].apply(m);
        if (v && !hits_family(A, entered, m, *v)) break;
      }
      g[m] = *F[j].apply(m);
      last[j] = m;
      started[j] = true;
      auto r = point_record(t, "E", m, g[m]);
      r.info["target"] = static_cast<std::int64_t>(j);
      res.trace.records.push_back(r);
    }
    if (!g.count(t)) {
      g[t] = least_avoiding(A, entered, t);
      res.trace.records.push_back(point_record(t, "D", t, g[t]));
    }
  }
  return res;
}

FinFn replay_function(const Trace& trace) {
  FinFn g;
  for (auto& r : trace.records)
    if (r.adds) g[r.a] = r.b;
  return g;
}

EncodeVmResult encode_vm(const Family& A, const Family& F, const std::vector<int>& chi, const Window& win) {
  EncodeVmResult res;
  auto& g = res.g;
  Nat ns = 0;  // g is total on exactly [0, ns)
  res.start = 0;
  for (std::size_t s = 0; s < chi.size(); ++s) {
    std::size_t avoid = s + 1;
    if (ns >= win.size) throw WindowExhausted("encode_vm", "stage " + std::to_string(s));
    // (1) hit f_i, i ≤ s, at increasing points beyond n_s
    Nat cursor = ns;
    for (std::size_t i = 0; i <= s && i < F.size(); ++i) {
      Nat n = cursor + 1;
      for (;; ++n) {
        if (n >= win.size)
          throw WindowExhausted("encode_vm", "hit target " + std::to_string(i) + " at stage " + std::to_string(s));
        auto v = F[i].apply(n);
        if (v && !hits_family(A, avoid, n, *v)) break;
      }
      g[n] = *F[i].apply(n);
      auto r = point_record(s, "hit", n, g[n]);
      r.info["target"] = static_cast<std::int64_t>(i);
      res.trace.records.push_back(r);
      cursor = n;
    }
    Nat next = cursor + 1;
    // (2) gaps
    for (Nat l = ns + 1; l < next; ++l) {
      if (g.count(l)) continue;
      g[l] = least_avoiding(A, avoid, l);
      res.trace.records.push_back(point_record(s, "fill", l, g[l]));
    }
    // (3) the code point
    Nat k = 0;
    while (hits_family(A, avoid, ns, pair(k, pair(next, static_cast<Nat>(chi[s] != 0))))) ++k;
    g[ns] = pair(k, pair(next, static_cast<Nat>(chi[s] != 0)));
    auto r = point_record(s, "code", ns, g[ns]);
    r.info["next"] = static_cast<std::int64_t>(next);
    res.trace.records.push_back(r);
    ns = next;
  }
  return res;
}

std::vector<int> decode_vm(const FinFn& g, std::size_t bits, Nat start) {
  std::vector<int> out;
  Nat pos = start;
  for (std::size_t i = 0; i < bits; ++i) {
    auto it = g.find(pos);
    if (it == g.end()) throw MalformedCode("decode_vm", "g undefined at " + std::to_string(pos));
    auto [k, rest] = unpair(it->second);
    (void)k;
    auto [next, b] = unpair(rest);
    if (b > 1) throw MalformedCode("decode_vm", "bit value " + std::to_string(b) + " at " + std::to_string(pos));
    out.push_back(static_cast<int>(b));
    if (i + 1 < bits && next <= pos)
      throw MalformedCode("decode_vm", "pointer does not advance at " + std::to_string(pos));
    pos = next;
  }
  return out;
}

bool is_orthogonal(const Family& A, const Family& B, const Window& win) {
  for (auto& a : A)
    if (finitely_covered(a, B, win).holds) return false;
  for (auto& b : B)
    if (finitely_covered(b, A, win).holds) return false;
  return true;
}

std::vector<Subset> subsets_in_order(std::size_t m) {
  std::vector<Subset> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Subset s;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) s.push_back(i);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const Subset& a, const Subset& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

Function as_function(const FinFn& g) { return Function::table(std::vector<NatPair>(g.begin(), g.end())); }

bool is_good_for(const GoodForWitness& H, const Family& B, const Family& A, const Window& win,
                 std::optional<std::size_t> a_limit) {
  for (auto& [S, e] : H.entries) {
    if (!std::is_sorted(S.begin(), S.end()) || std::adjacent_find(S.begin(), S.end()) != S.end()) return false;
    if (e.g0.size() != S.size() || e.g1.size() != S.size()) return false;
    std::set<std::size_t> used;
    for (std::size_t i = 0; i < S.size(); ++i) {
      if (S[i] >= B.size()) return false;
      for (auto idx : {e.g0[i], e.g1[i]}) {
        if (idx >= A.size()) return false;
        if (a_limit && idx >= *a_limit) return false;  // H1
        if (!used.insert(idx).second) return false;    // distinctness
      }
    }
    if (e.W0.size() <= win.threshold || e.W1.size() <= win.threshold) return false;
    for (auto* W : {&e.W0, &e.W1}) {
      bool zero = W == &e.W0;
      for (Nat k : *W) {
        if (!win.contains(k)) return false;
        for (std::size_t i = 0; i < S.size(); ++i) {
          auto v = B[S[i]].apply(k);
          if (!v || v != A[zero ? e.g0[i] : e.g1[i]].apply(k)) return false;
        }
      }
    }
  }
  // H2: S0 ⊆ S1 ⇒ W_k(S1) ⊆ W_k(S0)
  for (auto& [S0, e0] : H.entries)
    for (auto& [S1, e1] : H.entries) {
      if (!std::includes(S1.begin(), S1.end(), S0.begin(), S0.end())) continue;
      if (!std::includes(e0.W0.begin(), e0.W0.end(), e1.W0.begin(), e1.W0.end())) return false;
      if (!std::includes(e0.W1.begin(), e0.W1.end(), e1.W1.begin(), e1.W1.end())) return false;
    }
  return true;
}

OrthogonalStepResult orthogonal_step(const Family& A, const std::vector<std::size_t>& designated,
                                     const Family& B_prev, const GoodForWitness& H, const Family& F,
                                     std::size_t stages, const Window& win) {
  if (designated.size() < 2) throw InvalidArgument("orthogonal_step", "need at least two designated members");
  for (auto d : designated)
    if (d >= A.size()) throw InvalidArgument("orthogonal_step", "designated index " + std::to_string(d));
  auto subsets = subsets_in_order(B_prev.size());
  for (auto& S : subsets)
    if (!H.entries.count(S)) throw InvalidArgument("orthogonal_step", "H undefined on a subset of B");

  OrthogonalStepResult res;
  res.new_index = B_prev.size();
  auto& g = res.g;
  // w-points chosen for subset n in W_{n,0} / W_{n,1}
  std::vector<std::vector<Nat>> w0(subsets.size()), w1(subsets.size());

  Nat ns = 0;
  for (std::size_t s = 0; s < stages; ++s) {
    std::size_t avoid = s + 1;
    Nat cursor = ns;  // next point must exceed cursor (or be ns itself first)
    bool first = true;
    auto next_point = [&](auto ok, const std::string& req) {
      Nat n = first ? ns : cursor + 1;
      for (;; ++n) {
        if (n >= win.size) throw WindowExhausted("orthogonal_step " + req, "stage " + std::to_string(s));
        if (ok(n)) break;
      }
      first = false;
      cursor = n;
      return n;
    };
    auto record = [&](const std::string& step, Nat n, std::int64_t tag) {
      auto r = point_record(s, step, n, g[n]);
      r.info["index"] = tag;
      res.trace.records.push_back(r);
    };
    // L2
    for (int k = 0; k < 2; ++k) {
      auto& Aw = A[designated[k]];
      for (std::size_t i = 0; i <= s && i < subsets.size(); ++i) {
        auto& Wset = k == 0 ? H.entries.at(subsets[i]).W0 : H.entries.at(subsets[i]).W1;
        Nat n = next_point(
            [&](Nat c) {
              if (!Wset.count(c)) return false;
              auto v = Aw.apply(c);
              return v && !hits_family(B_prev, avoid, c, *v);
            },
            "L2");
        g[n] = *Aw.apply(n);
        (k == 0 ? w0 : w1)[i].push_back(n);
        record(k == 0 ? "L2.0" : "L2.1", n, static_cast<std::int64_t>(i));
      }
    }
    // L3
    for (std::size_t i = 0; i <= s && i < designated.size(); ++i) {
      auto& Aw = A[designated[i]];
      Nat n = next_point(
          [&](Nat c) {
            auto v = Aw.apply(c);
            return v && !hits_family(B_prev, avoid, c, *v);
          },
          "L3");
      g[n] = *Aw.apply(n);
      record("L3", n, static_cast<std::int64_t>(i));
    }
    // L4
    for (std::size_t i = 0; i <= s && i < F.size(); ++i) {
      Nat n = next_point(
          [&](Nat c) {
            auto v = F[i].apply(c);
            return v && !hits_family(B_prev, avoid, c, *v);
          },
          "L4");
      g[n] = *F[i].apply(n);
      record("L4", n, static_cast<std::int64_t>(i));
    }
    Nat end = first ? ns + 1 : cursor + 1;
    for (Nat l = ns; l < end; ++l) {
      if (g.count(l)) continue;
      g[l] = least_avoiding(B_prev, avoid, l);
      record("fill", l, 0);
    }
    ns = end;
  }

  res.H = H;
  for (std::size_t n = 0; n < subsets.size(); ++n) {
    auto& S = subsets[n];
    GoodForEntry e;
    // union over supersets keeps the new W-sets antitone
    for (std::size_t m = 0; m < subsets.size(); ++m)
      if (std::includes(subsets[m].begin(), subsets[m].end(), S.begin(), S.end())) {
        e.W0.insert(w0[m].begin(), w0[m].end());
        e.W1.insert(w1[m].begin(), w1[m].end());
      }
    e.g0 = H.entries.at(S).g0;
    e.g1 = H.entries.at(S).g1;
    e.g0.push_back(designated[0]);
    e.g1.push_back(designated[1]);
    auto S2 = S;
    S2.push_back(res.new_index);
    res.H.entries[S2] = std::move(e);
  }
  return res;
}

}  // namespace cofin
