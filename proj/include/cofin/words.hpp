#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cofin/core.hpp"

namespace cofin {

// A group element handle: a freely reduced generator word.  factors[0] is
// applied first.
struct GroupElem {
  std::vector<std::pair<std::size_t, int>> factors;  // (generator, exponent ≠ 0)

  GroupElem inverse() const;
  // this applied after `first`
  GroupElem after(const GroupElem& first) const;
  bool operator==(const GroupElem&) const = default;
};

struct Letter {
  enum class Kind : std::uint8_t { group, var };
  Kind kind = Kind::var;
  GroupElem elem;
  std::size_t var = 0;
  int sign = 1;

  static Letter group(GroupElem e);
  static Letter gen(std::size_t g, int exp = 1);
  static Letter x(std::size_t v = 0, int sign = 1);
  bool is_var() const { return kind == Kind::var; }
  bool is_group() const { return kind == Kind::group; }
  Letter inverse() const;
  bool operator==(const Letter&) const = default;
};

// Named generators, evaluated lazily.  Identity/inverse tests are window
// based — a heuristic: two handles are "equal" when they agree on [0,W).
class GroupContext {
 public:
  GroupContext() = default;
  static GroupContext with_base_h(const std::string& name = "h");

  std::size_t add(const std::string& name, Function f);
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t size() const { return gens_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const Function& generator(std::size_t i) const { return gens_.at(i); }

  MaybeNat apply(const GroupElem& e, Nat n, const Window& win) const;
  MaybeNat apply_inverse(const GroupElem& e, Nat n, const Window& win) const;
  bool is_window_identity(const GroupElem& e, const Window& win) const;
  bool window_equal(const GroupElem& a, const GroupElem& b, const Window& win) const;

 private:
  std::vector<std::string> names_;
  std::vector<Function> gens_;
};

// Reduced free-product word.  letters()[0] is the rightmost letter w_(0),
// i.e. the one applied first; the leftmost letter has index size()-1.
class Word {
 public:
  Word() = default;

  // seq is in application order (rightmost first)
  static Word reduce(std::vector<Letter> seq, const GroupContext& ctx, const Window& win);
  // written order, leftmost first — what you'd type
  static Word reduce_written(std::vector<Letter> written, const GroupContext& ctx, const Window& win);
  // trusted: caller guarantees the sequence is reduced (factors of reduced words)
  static Word from_reduced(std::vector<Letter> seq);
  // `g0 x^2 g1`, `g0^-1 x g0`, `x0 x1^-1`, `[x0,x1]`
  static Word parse(std::string_view text, const GroupContext& ctx, const Window& win);

  std::size_t size() const { return letters_.size(); }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }

  const Letter& at(std::size_t i) const;           // w_(i)
  Word initial_segment(std::size_t i) const;       // w↾i = w_(i−1)⋯w_(0)
  Word factor(std::size_t from, std::size_t to) const;  // letters [from,to)
  Word inverse() const;

  std::size_t var_occurrences() const;  // #x(w)
  bool has_var() const { return var_occurrences() != 0; }
  std::size_t arity() const;  // 1 + max variable index, 0 if none
  std::string str(const GroupContext& ctx) const;

  bool operator==(const Word&) const = default;

 private:
  explicit Word(std::vector<Letter> seq) : letters_(std::move(seq)) {}
  std::vector<Letter> letters_;
};

Word reduce(const std::vector<Letter>& seq, const GroupContext& ctx, const Window& win);
std::size_t length(const Word& w);
const Letter& letter_at(const Word& w, std::size_t i);
Word initial_segment(const Word& w, std::size_t i);

bool mutually_inverse(const Letter& a, const Letter& b, const GroupContext& ctx, const Window& win);

// number of end pairs that can be peeled: w = u⁻¹zu with |u| = t for all t ≤ result
std::size_t conjugate_depth(const Word& w, const GroupContext& ctx, const Window& win);
// all (u, z), starting with (ε, w)
std::vector<std::pair<Word, Word>> conjugate_decompositions(const Word& w, const GroupContext& ctx,
                                                            const Window& win);
Word shortest_conjugate_subword(const Word& w, const GroupContext& ctx, const Window& win);

// A view of a tuple of partial injections (one per variable), optionally with
// one extra pair on top — lets searches test an extension without copying.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::span<const PartialInjection> comps) : comps_(comps) {}
  Assignment(const PartialInjection& p) : comps_(&p, 1) {}

  Assignment with_extra(std::size_t var, Nat a, Nat b) const {
    Assignment r = *this;
    r.has_extra_ = true;
    r.xvar_ = var;
    r.xa_ = a;
    r.xb_ = b;
    return r;
  }

  MaybeNat step(std::size_t var, int sign, Nat n) const {
    if (has_extra_ && var == xvar_) {
      if (sign > 0 && n == xa_) return xb_;
      if (sign < 0 && n == xb_) return xa_;
    }
    if (var >= comps_.size()) return std::nullopt;
    return sign > 0 ? comps_[var].apply(n) : comps_[var].apply_inverse(n);
  }

  std::size_t arity() const { return comps_.size(); }
  std::span<const PartialInjection> components() const { return comps_; }

 private:
  std::span<const PartialInjection> comps_;
  bool has_extra_ = false;
  std::size_t xvar_ = 0;
  Nat xa_ = 0, xb_ = 0;
};

MaybeNat apply_letter(const Letter& l, const Assignment& as, const GroupContext& ctx, Nat n,
                      const Window& win);
MaybeNat apply_letter_inverse(const Letter& l, const Assignment& as, const GroupContext& ctx, Nat n,
                              const Window& win);

// run letters[from, to) forward, or backward from `to` down to `from` inverted
MaybeNat run_letters(const std::vector<Letter>& ls, std::size_t from, std::size_t to,
                     const Assignment& as, const GroupContext& ctx, Nat n, const Window& win);
MaybeNat run_letters_inverse(const std::vector<Letter>& ls, std::size_t from, std::size_t to,
                             const Assignment& as, const GroupContext& ctx, Nat n, const Window& win);

struct UsedPair {
  std::size_t var;
  Nat a, b;       // the pair as stored in the assignment
  int direction;  // +1: a→b was traversed, −1: b→a
  bool operator==(const UsedPair&) const = default;
};

struct EvalPath {
  std::vector<Nat> points;  // l_0 = n, l_{i+1} = w_(i)(l_i)
  std::vector<UsedPair> used;
};

EvalPath evaluation_path(const Word& w, const Assignment& as, const GroupContext& ctx, Nat n,
                         const Window& win);
MaybeNat evaluate(const Word& w, const Assignment& as, const GroupContext& ctx, Nat n, const Window& win);
MaybeNat evaluate_inverse(const Word& w, const Assignment& as, const GroupContext& ctx, Nat n,
                          const Window& win);
std::vector<Nat> fixed_points(const Word& w, const Assignment& as, const GroupContext& ctx, const Window& win);

}  // namespace cofin
