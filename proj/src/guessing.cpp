#include "cofin/guessing.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "cofin/extension.hpp"

namespace cofin {

Enumeration cyclic_enumeration(std::size_t family_size) {
  return [family_size](Nat j) { return family_size == 0 ? 0 : static_cast<std::size_t>(j % family_size); };
}

namespace {

bool distinct_coordinates(const Guess& g) {
  std::set<Nat> ks, os;
  for (auto [k, o] : g)
    if (!ks.insert(k).second || !os.insert(o).second) return false;
  return true;
}

// {g_{e(j)}(n) : j ≤ s}
std::set<Nat> family_values(const std::vector<Function>& family, const Enumeration& e, Nat s, Nat n, bool inverse) {
  std::set<Nat> out;
  if (family.empty()) return out;
  for (Nat j = 0; j <= s; ++j) {
    auto& f = family.at(e(j));
    if (auto v = inverse ? f.inverse(n) : f.apply(n)) out.insert(*v);
  }
  return out;
}

}  // namespace

bool valid_guess_ap(const Guess& guess, const std::vector<Function>& family, const Enumeration& e, Nat n,
                    const Window& win) {
  (void)win;
  if (guess.size() != 6 * n + 1) return false;
  if (!distinct_coordinates(guess)) return false;
  for (auto [k, o] : guess)
    if (family_values(family, e, n, k, false).count(o)) return false;
  return true;
}

ApResult guess_step_ap(const std::vector<Function>& family, const std::function<Guess(Nat)>& guesses,
                       std::size_t stages, const Window& win, Enumeration e) {
  if (!e) e = cyclic_enumeration(family.size());
  ApResult res;
  auto& p = res.p;
  auto push = [&](std::size_t s, const char* step, Nat a, Nat b, std::map<std::string, std::int64_t> info) {
    TraceRecord r;
    r.stage = s;
    r.step = step;
    r.a = a;
    r.b = b;
    r.info = std::move(info);
    res.trace.records.push_back(std::move(r));
  };
  for (std::size_t s = 0; s < stages; ++s) {
    const auto entry = static_cast<std::int64_t>(p.size());
    res.size_at_entry.push_back(p.size());
    Guess g = guesses(s);
    if (valid_guess_ap(g, family, e, s, win)) {
      ++res.valid;
      std::optional<std::size_t> pick;
      for (std::size_t i = 0; i < g.size() && !pick; ++i)
        if (!p.in_domain(g[i].first) && !p.in_range(g[i].second)) pick = i;
      // |p| ≤ 3s blocks at most 6s of the 6s+1 pairs
      if (!pick) throw SearchExhausted("guess-step/P3", "no usable pair at stage " + std::to_string(s));
      p.add(g[*pick].first, g[*pick].second);
      push(s, "P3", g[*pick].first, g[*pick].second,
           {{"index", static_cast<std::int64_t>(*pick)}, {"size_at_entry", entry}});
    } else {
      TraceRecord r;
      r.stage = s;
      r.step = "invalid";
      r.adds = false;
      r.info = {{"size_at_entry", entry}};
      res.trace.records.push_back(std::move(r));
    }
    // P4
    Nat a = 0;
    while (p.in_domain(a)) ++a;
    auto avoid = family_values(family, e, s, a, false);
    Nat b = 0;
    while (p.in_range(b) || avoid.count(b)) ++b;
    if (!win.contains(a) || !win.contains(b)) throw WindowExhausted("guess-step/P4", "stage " + std::to_string(s));
    p.add(a, b);
    push(s, "P4", a, b, {});
    // P5
    Nat d = 0;
    while (p.in_range(d)) ++d;
    auto avoid_inv = family_values(family, e, s, d, true);
    Nat c = 0;
    while (p.in_domain(c) || avoid_inv.count(c)) ++c;
    if (!win.contains(c) || !win.contains(d)) throw WindowExhausted("guess-step/P5", "stage " + std::to_string(s));
    p.add(c, d);
    push(s, "P5", c, d, {});
  }
  return res;
}

std::optional<Guess> guess_from_target(const Function& p, const std::vector<Function>& family, const Enumeration& e,
                                       Nat n, const Window& win) {
  Guess g;
  for (Nat k = 0; k < win.size && g.size() < 6 * n + 1; ++k) {
    auto v = p.apply(k);
    if (!v) continue;
    if (family_values(family, e, n, k, false).count(*v)) continue;
    g.push_back({k, *v});
  }
  if (g.size() != 6 * n + 1) return std::nullopt;
  return g;
}

bool very_good_pair(const PartialInjection& p, Nat a, Nat b, const std::vector<Word>& words, const GroupContext& ctx,
                    const Window& win) {
  if (p.contains(a, b)) return true;
  if (p.in_domain(a) || p.in_range(b)) return false;
  Assignment as(p);
  for (auto& w : words)
    if (!new_fixed_points(w, as, 0, a, b, ctx, win).empty()) return false;
  return true;
}

void for_each_small_injection(Nat sub, std::size_t k, const std::function<bool(const PartialInjection&)>& visit) {
  PartialInjection p;
  bool stop = false;
  std::function<void(Nat)> rec = [&](Nat from) {
    if (stop) return;
    if (!visit(p)) {
      stop = true;
      return;
    }
    if (p.size() == k) return;
    for (Nat idx = from; idx < sub * sub && !stop; ++idx) {
      Nat a = idx / sub, b = idx % sub;
      if (p.in_domain(a) || p.in_range(b)) continue;
      p.add(a, b);
      rec(idx + 1);
      p.erase_domain(a);
    }
  };
  rec(0);
}

namespace {

PartialInjection random_injection(std::size_t size, Nat range, std::mt19937_64& rng) {
  PartialInjection p;
  std::uniform_int_distribution<Nat> pick(0, range - 1);
  for (std::size_t tries = 0; p.size() < size && tries < 64 * (size + 1); ++tries) {
    Nat a = pick(rng), b = pick(rng);
    if (!p.in_domain(a) && !p.in_range(b)) p.add(a, b);
  }
  return p;
}

}  // namespace

WitnessSet witness_set(const GroupContext& ctx, const Function& f, const std::vector<Word>& words, std::size_t k,
                       const Window& win, const VerifyOptions& opt) {
  for (auto& w : words)
    if (w.arity() > 1) throw ArityMismatch("witness-set", "words use the variable x only");
  WitnessSet res;
  std::size_t xs = 0;
  for (auto& w : words) xs += w.var_occurrences();
  res.bound = 2 * k + k * xs + 1;

  PartialInjection fw;
  for (Nat a = 0; a < win.size; ++a)
    if (auto b = f.apply(a); b && win.contains(*b) && fw.can_add(a, *b)) fw.add(a, *b);
  // pairs on fixed-point paths of w(f) never enter S
  std::set<NatPair> removed;
  for (auto& w : words)
    for (Nat l : fixed_points(w, Assignment(fw), ctx, win)) {
      auto path = evaluation_path(w, Assignment(fw), ctx, l, win);
      for (std::size_t i = 0; i < w.size(); ++i) {
        auto& x = w.letters()[i];
        if (!x.is_var()) continue;
        removed.insert(x.sign > 0 ? NatPair{path.points[i], path.points[i + 1]}
                                  : NatPair{path.points[i + 1], path.points[i]});
      }
    }
  res.removed.assign(removed.begin(), removed.end());

  // f′: greedily keep pairs that leave every w(f′) without fixed points
  std::vector<NatPair> fprime;
  PartialInjection acc;
  for (auto [a, b] : fw.pairs()) {
    if (fprime.size() == res.bound) break;
    if (removed.count({a, b})) continue;
    if (!very_good_pair(acc, a, b, words, ctx, win)) continue;
    acc.add(a, b);
    fprime.push_back({a, b});
  }
  if (fprime.empty()) throw SearchExhausted("witness-set", "no pair of f avoids the words' fixed points");

  std::size_t needed = 1;
  auto first_witness = [&](const PartialInjection& p) {
    for (std::size_t i = 0; i < fprime.size(); ++i)
      if (very_good_pair(p, fprime[i].first, fprime[i].second, words, ctx, win)) return i;
    throw SearchExhausted("witness-set", "no pair among " + std::to_string(fprime.size()) +
                                             " candidates serves an injection of size " + std::to_string(p.size()));
  };
  for_each_small_injection(std::min(opt.sub_window, win.size), k, [&](const PartialInjection& p) {
    needed = std::max(needed, first_witness(p) + 1);
    ++res.exhaustive_checked;
    return true;
  });
  std::mt19937_64 rng(opt.seed);
  for (std::size_t i = 0; i < opt.sample_budget && k > 0; ++i) {
    auto p = random_injection(1 + rng() % k, win.size, rng);
    needed = std::max(needed, first_witness(p) + 1);
    ++res.sampled_checked;
  }
  res.S.assign(fprime.begin(), fprime.begin() + static_cast<std::ptrdiff_t>(needed));
  return res;
}

GuessVerdict valid_guess_ag(const Guess& guess, const GroupContext& ctx, const std::vector<Word>& words, Nat n,
                            const Window& win, const VerifyOptions& opt) {
  GuessVerdict v;
  if (guess.empty() || !distinct_coordinates(guess)) return v;
  auto served = [&](const PartialInjection& p) {
    for (auto [k, o] : guess)
      if (very_good_pair(p, k, o, words, ctx, win)) return true;
    return false;
  };
  const std::size_t K = 3 * n;
  bool ok = true;
  if (K <= 2) {
    v.exact = true;
    for_each_small_injection(std::min(opt.sub_window, win.size), K, [&](const PartialInjection& p) {
      ++v.checked;
      ok = served(p);
      return ok;
    });
  } else {
    std::mt19937_64 rng(opt.seed);
    for (std::size_t i = 0; i < opt.sample_budget && ok; ++i) {
      ++v.checked;
      ok = served(random_injection(rng() % (K + 1), win.size, rng));
    }
  }
  v.valid = ok;
  return v;
}

}  // namespace cofin
