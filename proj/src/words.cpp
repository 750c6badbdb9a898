#include "cofin/words.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace cofin {

// ---- GroupElem ----

namespace {

void push_factor(std::vector<std::pair<std::size_t, int>>& fs, std::size_t g, int e) {
  if (e == 0) return;
  if (!fs.empty() && fs.back().first == g) {
    fs.back().second += e;
    if (fs.back().second == 0) fs.pop_back();
    return;
  }
  fs.emplace_back(g, e);
}

}  // namespace

GroupElem GroupElem::inverse() const {
  GroupElem r;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) r.factors.emplace_back(it->first, -it->second);
  return r;
}

GroupElem GroupElem::after(const GroupElem& first) const {
  GroupElem r = first;
  for (auto [g, e] : factors) push_factor(r.factors, g, e);
  return r;
}

// ---- Letter ----

Letter Letter::group(GroupElem e) {
  Letter l;
  l.kind = Kind::group;
  l.elem = std::move(e);
  return l;
}

Letter Letter::gen(std::size_t g, int exp) {
  GroupElem e;
  push_factor(e.factors, g, exp);
  return group(std::move(e));
}

Letter Letter::x(std::size_t v, int sign) {
  Letter l;
  l.kind = Kind::var;
  l.var = v;
  l.sign = sign < 0 ? -1 : 1;
  return l;
}

Letter Letter::inverse() const {
  Letter l = *this;
  if (is_var())
    l.sign = -sign;
  else
    l.elem = elem.inverse();
  return l;
}

// ---- GroupContext ----

namespace {

bool looks_like_variable(std::string_view s) {
  if (s.empty() || s[0] != 'x') return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

GroupContext GroupContext::with_base_h(const std::string& name) {
  GroupContext c;
  c.add(name, Function::base_h());
  return c;
}

std::size_t GroupContext::add(const std::string& name, Function f) {
  if (name.empty() || looks_like_variable(name) || find(name))
    throw InvalidArgument("group-context", "bad or duplicate generator name '" + name + "'");
  names_.push_back(name);
  gens_.push_back(std::move(f));
  return gens_.size() - 1;
}

std::optional<std::size_t> GroupContext::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

MaybeNat GroupContext::apply(const GroupElem& e, Nat n, const Window& win) const {
  if (!win.contains(n)) return std::nullopt;
  MaybeNat cur = n;
  for (auto [g, k] : e.factors) {
    const Function& f = gens_.at(g);
    int steps = k < 0 ? -k : k;
    for (int s = 0; s < steps; ++s) {
      cur = k > 0 ? f.apply(*cur, win) : f.inverse(*cur, win);
      if (!cur) return std::nullopt;
    }
  }
  return cur;
}

MaybeNat GroupContext::apply_inverse(const GroupElem& e, Nat n, const Window& win) const {
  return apply(e.inverse(), n, win);
}

bool GroupContext::is_window_identity(const GroupElem& e, const Window& win) const {
  if (e.factors.empty()) return true;
  for (Nat n = 0; n < win.size; ++n) {
    auto v = apply(e, n, win);
    // undefined near the boundary is not evidence either way; only a defined
    // value that moves counts against identity
    if (v && *v != n) return false;
  }
  // a handle that is undefined everywhere is not the identity
  for (Nat n = 0; n < win.size; ++n)
    if (apply(e, n, win)) return true;
  return false;
}

bool GroupContext::window_equal(const GroupElem& a, const GroupElem& b, const Window& win) const {
  return is_window_identity(a.inverse().after(b), win);
}

// ---- Word ----

Word Word::reduce(std::vector<Letter> seq, const GroupContext& ctx, const Window& win) {
  std::vector<Letter> st;
  st.reserve(seq.size());
  for (auto& l : seq) {
    if (l.is_group()) {
      if (!st.empty() && st.back().is_group()) {
        GroupElem merged = l.elem.after(st.back().elem);
        st.pop_back();
        if (!ctx.is_window_identity(merged, win)) st.push_back(Letter::group(std::move(merged)));
        continue;
      }
      if (ctx.is_window_identity(l.elem, win)) continue;
      st.push_back(l);
      continue;
    }
    if (!st.empty() && st.back().is_var() && st.back().var == l.var && st.back().sign == -l.sign) {
      st.pop_back();
      continue;
    }
    st.push_back(l);
  }
  return Word(std::move(st));
}

Word Word::reduce_written(std::vector<Letter> written, const GroupContext& ctx, const Window& win) {
  std::reverse(written.begin(), written.end());
  return reduce(std::move(written), ctx, win);
}

Word Word::from_reduced(std::vector<Letter> seq) { return Word(std::move(seq)); }

namespace {

struct Tokenizer {
  std::string_view s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip();
    return i >= s.size();
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    std::size_t b = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    return std::string(s.substr(b, i - b));
  }
  int exponent() {
    if (!eat('^')) return 1;
    skip();
    std::size_t b = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    std::string num(s.substr(b, i - b));
    if (num.empty() || num == "-" || num == "+") throw ParseError("word", "bad exponent in '" + std::string(s) + "'");
    return std::stoi(num);
  }
};

// appends written-order letters for one atom
void parse_atom(Tokenizer& tk, const GroupContext& ctx, std::vector<Letter>& out);

void parse_seq(Tokenizer& tk, const GroupContext& ctx, std::vector<Letter>& out, char stop) {
  while (!tk.done() && tk.peek() != stop && tk.peek() != ',') parse_atom(tk, ctx, out);
}

std::vector<Letter> inverse_written(const std::vector<Letter>& w) {
  std::vector<Letter> r;
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(it->inverse());
  return r;
}

void parse_atom(Tokenizer& tk, const GroupContext& ctx, std::vector<Letter>& out) {
  if (tk.eat('[')) {
    std::vector<Letter> a, b;
    parse_seq(tk, ctx, a, ']');
    if (!tk.eat(',')) throw ParseError("word", "expected ',' in commutator");
    parse_seq(tk, ctx, b, ']');
    if (!tk.eat(']')) throw ParseError("word", "expected ']' in commutator");
    // [a,b] = a⁻¹b⁻¹ab
    for (auto& l : inverse_written(a)) out.push_back(l);
    for (auto& l : inverse_written(b)) out.push_back(l);
    for (auto& l : a) out.push_back(l);
    for (auto& l : b) out.push_back(l);
    return;
  }
  if (tk.eat('(')) {
    std::vector<Letter> inner;
    parse_seq(tk, ctx, inner, ')');
    if (!tk.eat(')')) throw ParseError("word", "expected ')'");
    int e = tk.exponent();
    auto base = e < 0 ? inverse_written(inner) : inner;
    for (int k = 0; k < std::abs(e); ++k)
      for (auto& l : base) out.push_back(l);
    return;
  }
  std::string name = tk.ident();
  if (name.empty()) throw ParseError("word", "unexpected character in '" + std::string(tk.s) + "'");
  int e = tk.exponent();
  if (looks_like_variable(name)) {
    std::size_t v = name.size() == 1 ? 0 : std::stoul(name.substr(1));
    for (int k = 0; k < std::abs(e); ++k) out.push_back(Letter::x(v, e < 0 ? -1 : 1));
    return;
  }
  auto g = ctx.find(name);
  if (!g) throw ParseError("word", "unknown generator '" + name + "'");
  if (e != 0) out.push_back(Letter::gen(*g, e));
}

}  // namespace

Word Word::parse(std::string_view text, const GroupContext& ctx, const Window& win) {
  Tokenizer tk{text};
  std::vector<Letter> written;
  if (tk.peek() == '1' || tk.peek() == 'e') {
    // "1" / "e" for the empty word
    std::size_t save = tk.i;
    std::string id = tk.ident();
    if ((id == "1" || id == "e") && tk.done()) return Word();
    tk.i = save;
  }
  parse_seq(tk, ctx, written, '\0');
  if (!tk.done()) throw ParseError("word", "trailing input in '" + std::string(text) + "'");
  return reduce_written(std::move(written), ctx, win);
}

const Letter& Word::at(std::size_t i) const {
  if (i >= letters_.size()) throw std::out_of_range("letter index out of range");
  return letters_[i];
}

Word Word::initial_segment(std::size_t i) const {
  if (i > letters_.size()) throw std::out_of_range("initial segment longer than word");
  return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(i)));
}

Word Word::factor(std::size_t from, std::size_t to) const {
  if (from > to || to > letters_.size()) throw std::out_of_range("factor out of range");
  return Word(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(from),
                                  letters_.begin() + static_cast<std::ptrdiff_t>(to)));
}

Word Word::inverse() const {
  std::vector<Letter> r;
  r.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) r.push_back(it->inverse());
  return Word(std::move(r));
}

std::size_t Word::var_occurrences() const {
  std::size_t c = 0;
  for (auto& l : letters_) c += l.is_var();
  return c;
}

std::size_t Word::arity() const {
  std::size_t a = 0;
  for (auto& l : letters_)
    if (l.is_var()) a = std::max(a, l.var + 1);
  return a;
}

std::string Word::str(const GroupContext& ctx) const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << ' ';
    first = false;
  };
  // walk in written order, grouping runs of one variable
  std::size_t i = letters_.size();
  while (i > 0) {
    const Letter& l = letters_[i - 1];
    if (l.is_group()) {
      for (auto it = l.elem.factors.rbegin(); it != l.elem.factors.rend(); ++it) {
        sep();
        os << ctx.name(it->first);
        if (it->second != 1) os << '^' << it->second;
      }
      --i;
      continue;
    }
    std::size_t run = 0;
    while (i > 0 && letters_[i - 1].is_var() && letters_[i - 1].var == l.var && letters_[i - 1].sign == l.sign) {
      ++run;
      --i;
    }
    sep();
    os << 'x';
    if (l.var != 0) os << l.var;
    int e = static_cast<int>(run) * l.sign;
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

Word reduce(const std::vector<Letter>& seq, const GroupContext& ctx, const Window& win) {
  return Word::reduce(seq, ctx, win);
}
std::size_t length(const Word& w) { return w.length(); }
const Letter& letter_at(const Word& w, std::size_t i) { return w.at(i); }
Word initial_segment(const Word& w, std::size_t i) { return w.initial_segment(i); }

// ---- conjugates ----

bool mutually_inverse(const Letter& a, const Letter& b, const GroupContext& ctx, const Window& win) {
  if (a.kind != b.kind) return false;
  if (a.is_var()) return a.var == b.var && a.sign == -b.sign;
  return ctx.is_window_identity(b.elem.after(a.elem), win);
}

std::size_t conjugate_depth(const Word& w, const GroupContext& ctx, const Window& win) {
  const auto& ls = w.letters();
  std::size_t L = ls.size(), t = 0;
  // z keeps at least one letter
  while (2 * (t + 1) < L && mutually_inverse(ls[t], ls[L - 1 - t], ctx, win)) ++t;
  return t;
}

std::vector<std::pair<Word, Word>> conjugate_decompositions(const Word& w, const GroupContext& ctx,
                                                            const Window& win) {
  std::vector<std::pair<Word, Word>> out;
  std::size_t d = conjugate_depth(w, ctx, win), L = w.size();
  for (std::size_t t = 0; t <= d; ++t) out.emplace_back(w.initial_segment(t), w.factor(t, L - t));
  return out;
}

Word shortest_conjugate_subword(const Word& w, const GroupContext& ctx, const Window& win) {
  std::size_t d = conjugate_depth(w, ctx, win);
  return w.factor(d, w.size() - d);
}

// ---- evaluation ----

MaybeNat apply_letter(const Letter& l, const Assignment& as, const GroupContext& ctx, Nat n, const Window& win) {
  if (l.is_var()) return as.step(l.var, l.sign, n);
  return ctx.apply(l.elem, n, win);
}

MaybeNat apply_letter_inverse(const Letter& l, const Assignment& as, const GroupContext& ctx, Nat n,
                              const Window& win) {
  if (l.is_var()) return as.step(l.var, -l.sign, n);
  return ctx.apply_inverse(l.elem, n, win);
}

MaybeNat run_letters(const std::vector<Letter>& ls, std::size_t from, std::size_t to, const Assignment& as,
                     const GroupContext& ctx, Nat n, const Window& win) {
  MaybeNat cur = n;
  for (std::size_t i = from; i < to && cur; ++i) cur = apply_letter(ls[i], as, ctx, *cur, win);
  return cur;
}

MaybeNat run_letters_inverse(const std::vector<Letter>& ls, std::size_t from, std::size_t to,
                             const Assignment& as, const GroupContext& ctx, Nat n, const Window& win) {
  MaybeNat cur = n;
  for (std::size_t i = to; i > from && cur; --i) cur = apply_letter_inverse(ls[i - 1], as, ctx, *cur, win);
  return cur;
}

EvalPath evaluation_path(const Word& w, const Assignment& as, const GroupContext& ctx, Nat n,
                         const Window& win) {
  EvalPath p;
  p.points.push_back(n);
  for (auto& l : w.letters()) {
    Nat cur = p.points.back();
    auto nxt = apply_letter(l, as, ctx, cur, win);
    if (!nxt) break;
    if (l.is_var()) {
      if (l.sign > 0)
        p.used.push_back({l.var, cur, *nxt, +1});
      else
        p.used.push_back({l.var, *nxt, cur, -1});
    }
    p.points.push_back(*nxt);
  }
  return p;
}

MaybeNat evaluate(const Word& w, const Assignment& as, const GroupContext& ctx, Nat n, const Window& win) {
  return run_letters(w.letters(), 0, w.size(), as, ctx, n, win);
}

MaybeNat evaluate_inverse(const Word& w, const Assignment& as, const GroupContext& ctx, Nat n,
                          const Window& win) {
  return run_letters_inverse(w.letters(), 0, w.size(), as, ctx, n, win);
}

std::vector<Nat> fixed_points(const Word& w, const Assignment& as, const GroupContext& ctx, const Window& win) {
  std::vector<Nat> out;
  for (Nat n = 0; n < win.size; ++n)
    if (evaluate(w, as, ctx, n, win) == n) out.push_back(n);
  return out;
}

}  // namespace cofin
