#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cofin/core.hpp"
#include "cofin/extension.hpp"
#include "cofin/trace.hpp"
#include "cofin/words.hpp"

namespace cofin {

// element of a free product of finitely generated abelian factors:
// syllables in application order, exponents reduced mod the orders
struct HElem {
  std::vector<std::pair<std::size_t, std::vector<std::int64_t>>> syl;  // (factor, exponents)
  bool identity() const { return syl.empty(); }
  auto operator<=>(const HElem&) const = default;
};

struct Factor {
  std::vector<std::size_t> gens;
  std::vector<Nat> orders;  // 0 = infinite cyclic
};

class Presentation {
 public:
  Presentation() = default;
  static Presentation free(std::size_t n);
  static Presentation abelian(std::vector<Nat> orders);
  static Presentation free_product(std::vector<Factor> factors);
  // relator words without a normal form: is_gh_good_extension etc. throw UnsupportedPresentation
  static Presentation unsupported(std::size_t n, std::vector<Word> relators);

  std::size_t generators() const { return n_; }
  const std::vector<Word>& relators() const { return relators_; }
  std::size_t max_relator_length() const;
  bool supported() const { return supported_; }
  const std::string& kind() const { return kind_; }

  HElem identity() const { return {}; }
  // elem, then the letter x_var^sign
  HElem then(const HElem& elem, std::size_t var, int sign) const;
  // H-value of the variable letters of w (group letters must not occur)
  HElem normal_form(const Word& w) const;
  HElem normal_form(std::span<const Letter> letters) const;
  bool is_identity(const Word& w) const { return normal_form(w).identity(); }
  // |H| when finite, else nullopt
  std::optional<Nat> order() const;

 private:
  void require() const;
  std::size_t n_ = 0;
  std::vector<Factor> factors_;
  std::vector<std::size_t> factor_of_, slot_of_;
  std::vector<Word> relators_;
  bool supported_ = false;
  std::string kind_;
};

using Tuple = std::vector<PartialInjection>;

struct RelationReport {
  struct Entry {
    std::string relator;
    std::size_t defined = 0;
    std::vector<Nat> violations;
  };
  std::vector<Entry> entries;
  bool pass() const;
};

RelationReport check_relations(std::span<const PartialInjection> p, const Presentation& pres, const Window& win);

// every w ∈ W_{H,Id} is the identity where defined, for words explored up to the closure depth
bool in_poset(std::span<const PartialInjection> p, const Presentation& pres, std::optional<std::size_t> depth = {});

// (a,b) ∈ q_i iff some w' ≡ x_i⁻¹ has w'(p)(b) = a, for components with p_i ≠ ∅ or i ∈ A
Tuple apply_relations(std::span<const PartialInjection> p, const Presentation& pres, const std::set<std::size_t>& A,
                      std::optional<std::size_t> depth = {});

// word_bound: every reduced word over x_0..x_{n-1} and the ctx generators up to this length is checked
bool is_gh_good_extension(std::span<const PartialInjection> p, std::span<const PartialInjection> q,
                          const Presentation& pres, const GroupContext& ctx, const Window& win,
                          std::size_t word_bound);
// a single word and its variable subwords
bool is_gh_good_extension(std::span<const PartialInjection> p, std::span<const PartialInjection> q, const Word& w,
                          const Presentation& pres, const GroupContext& ctx, const Window& win);

// reduced words of length 1..max_len over the variables and ctx generators whose H-value is not trivial
std::vector<Word> embedding_schedule(const Presentation& pres, const GroupContext& ctx, const Window& win,
                                     std::size_t max_len);

enum class Side { domain, range };

struct MeetResult {
  Tuple q;
  std::optional<Nat> l;  // chosen fresh point; empty when already met after closure
  Nat max_before = 0;    // max({k} ∪ doms ∪ rans) the choice had to exceed
};

MeetResult meet_DR(std::span<const PartialInjection> p, std::size_t i, Nat k, Side side, const Presentation& pres,
                   const GroupContext& ctx, const Window& win, const WordSet& words);
MeetResult meet_DR(std::span<const PartialInjection> p, std::size_t i, Nat k, Side side, const Presentation& pres,
                   const GroupContext& ctx, const Window& win);

struct EmbeddingOptions {
  std::size_t schedule_length = 4;
};

struct EmbeddingResult {
  Tuple components;
  Trace trace;  // word_ids: the schedule; fp after every meet
  std::vector<Word> schedule;
};

EmbeddingResult build_embedding(const Presentation& pres, const GroupContext& ctx, std::size_t stages,
                                const Window& win, const EmbeddingOptions& opt = {});

}  // namespace cofin
