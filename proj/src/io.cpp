#include "cofin/io.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace cofin::io {

namespace {

NatPair pair_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() || !j[1].is_number_unsigned())
    throw ParseError("function-spec", std::string(what) + ": expected [n, m] with n, m ≥ 0, got " + j.dump());
  return {j[0].get<Nat>(), j[1].get<Nat>()};
}

std::vector<NatPair> pairs_from(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError("function-spec", std::string(what) + " must be an array");
  std::vector<NatPair> out;
  for (auto& e : j) out.push_back(pair_from(e, what));
  return out;
}

std::int64_t int_field(const json& c, const char* key, std::int64_t dflt) {
  if (!c.contains(key)) return dflt;
  if (!c[key].is_number_integer()) throw ParseError("function-spec", std::string("clause field ") + key + " must be an integer");
  return c[key].get<std::int64_t>();
}

AffineClause clause_from(const json& c) {
  AffineClause a;
  if (c.is_array()) {
    if (c.size() != 4) throw ParseError("function-spec", "clause array must be [modulus, residue, mul, add]");
    for (auto& v : c)
      if (!v.is_number_integer()) throw ParseError("function-spec", "clause entries must be integers");
    if (c[0].get<std::int64_t>() <= 0 || c[1].get<std::int64_t>() < 0)
      throw ParseError("function-spec", "clause modulus must be > 0, residue ≥ 0");
    a = {c[0].get<Nat>(), c[1].get<Nat>(), c[2].get<std::int64_t>(), c[3].get<std::int64_t>()};
  } else if (c.is_object()) {
    auto m = int_field(c, "modulus", 1), r = int_field(c, "residue", 0);
    if (m <= 0 || r < 0) throw ParseError("function-spec", "clause modulus must be > 0, residue ≥ 0");
    a = {static_cast<Nat>(m), static_cast<Nat>(r), int_field(c, "mul", 1), int_field(c, "add", 0)};
  } else {
    throw ParseError("function-spec", "clause must be an object or an array");
  }
  return a;
}

template <class F>
auto rethrow_as_parse(const char* phase, F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    throw ParseError(phase, e.context());
  }
}

}  // namespace

Function function_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ParseError("function-spec", "expected an object with a string \"kind\"");
  const auto kind = j["kind"].get<std::string>();
  return rethrow_as_parse("function-spec", [&] {
    if (kind == "table") return Function::table(pairs_from(j.value("entries", json::array()), "entries"));
    if (kind == "patch") {
      if (j.contains("map")) return Function::patch_map(pairs_from(j["map"], "map"));
      return Function::patch(pairs_from(j.value("swaps", json::array()), "swaps"));
    }
    if (kind == "rule") {
      if (!j.contains("clauses") || !j["clauses"].is_array())
        throw ParseError("function-spec", "rule needs a \"clauses\" array");
      std::vector<AffineClause> cs;
      for (auto& c : j["clauses"]) cs.push_back(clause_from(c));
      return Function::rule(cs, pairs_from(j.value("overrides", json::array()), "overrides"));
    }
    if (kind == "base_h") return Function::base_h();
    throw ParseError("function-spec", "unknown kind \"" + kind + "\"");
  });
}

json function_to_json(const Function& f) {
  switch (f.kind()) {
    case Function::Kind::table:
      return {{"kind", "table"}, {"entries", pairs_to_json(f.entries())}};
    case Function::Kind::patch: {
      // written back as swaps when the patch is an involution, else as a map
      std::vector<NatPair> swaps;
      bool involution = true;
      for (auto [a, b] : f.entries()) {
        if (f.apply(b) != a) involution = false;
        if (a <= b) swaps.emplace_back(a, b);
      }
      if (involution) return {{"kind", "patch"}, {"swaps", pairs_to_json(swaps)}};
      return {{"kind", "patch"}, {"map", pairs_to_json(f.entries())}};
    }
    case Function::Kind::rule: {
      json cs = json::array();
      for (auto& c : f.clauses())
        cs.push_back({{"modulus", c.modulus}, {"residue", c.residue}, {"mul", c.mul}, {"add", c.add}});
      json out = {{"kind", "rule"}, {"clauses", cs}};
      if (!f.entries().empty()) out["overrides"] = pairs_to_json(f.entries());
      return out;
    }
    case Function::Kind::base_h:
      return {{"kind", "base_h"}};
  }
  return {};
}

std::vector<Function> family_from_json(const json& j) {
  const json* arr = &j;
  if (j.is_object() && j.contains("functions")) arr = &j["functions"];
  if (arr->is_object()) return {function_from_json(*arr)};
  if (!arr->is_array()) throw ParseError("function-spec", "expected a spec, an array of specs, or {\"functions\":[...]}");
  std::vector<Function> out;
  for (auto& e : *arr) out.push_back(function_from_json(e));
  return out;
}

Presentation presentation_from_json(const json& j) {
  if (!j.is_object() || !j.contains("generators") || !j["generators"].is_number_unsigned())
    throw ParseError("presentation", "expected {\"generators\": n, ...}");
  const auto n = j["generators"].get<std::size_t>();
  std::vector<Word> rels;
  GroupContext none;
  Window win(2);
  for (auto& r : j.value("relators", json::array())) {
    if (!r.is_string()) throw ParseError("presentation", "relators must be strings");
    Word w = Word::parse(r.get<std::string>(), none, win);
    if (w.arity() > n) throw ParseError("presentation", "relator " + r.get<std::string>() + " uses too many generators");
    rels.push_back(w);
  }
  if (!j.contains("normal_form")) return Presentation::unsupported(n, rels);
  if (!j["normal_form"].is_string()) throw ParseError("presentation", "normal_form must be a string");
  const auto nf = j["normal_form"].get<std::string>();
  Presentation p;
  if (nf == "free") {
    p = Presentation::free(n);
  } else if (nf == "abelian") {
    auto orders = j.value("orders", std::vector<Nat>{});
    if (orders.size() != n) throw ParseError("presentation", "abelian needs one order per generator");
    p = Presentation::abelian(orders);
  } else if (nf.rfind("abelian-order-", 0) == 0) {
    Nat k = 0;
    try {
      k = std::stoull(nf.substr(14));
    } catch (const std::exception&) {
      throw ParseError("presentation", "bad order in " + nf);
    }
    p = Presentation::abelian(std::vector<Nat>(n, k));
  } else {
    throw UnsupportedPresentation("presentation", "no built-in normal form \"" + nf + "\"");
  }
  // listed relators must be consequences of the chosen normal form
  for (std::size_t i = 0; i < rels.size(); ++i)
    if (!p.is_identity(rels[i]))
      throw UnsupportedPresentation("presentation", "relator " + j["relators"][i].get<std::string>() +
                                                        " is not trivial in " + nf);
  return p;
}

json pairs_to_json(const std::vector<NatPair>& ps) {
  json a = json::array();
  for (auto [x, y] : ps) a.push_back({x, y});
  return a;
}

json injection_to_json(const PartialInjection& p) { return pairs_to_json(p.pairs()); }

PartialInjection injection_from_json(const json& j) {
  PartialInjection p;
  for (auto [a, b] : pairs_from(j, "pairs")) {
    if (!p.can_add(a, b)) throw ParseError("injection", "not injective at " + std::to_string(a));
    p.add(a, b);
  }
  return p;
}

json finfn_to_json(const FinFn& f) { return pairs_to_json({f.begin(), f.end()}); }

FinFn finfn_from_json(const json& j) {
  FinFn f;
  for (auto [a, b] : pairs_from(j, "pairs"))
    if (!f.emplace(a, b).second) throw ParseError("function", "duplicate point " + std::to_string(a));
  return f;
}

json trace_to_json(const Trace& t) {
  json recs = json::array();
  for (auto& r : t.records) {
    json fp = json::object();
    for (std::size_t i = 0; i < r.fp.size(); ++i)
      fp[i < t.word_ids.size() ? t.word_ids[i] : std::to_string(i)] = r.fp[i];
    json o = {{"stage", r.stage}, {"step", r.step}, {"var", r.var}, {"pair", {r.a, r.b}}, {"fp", fp}};
    if (!r.adds) o["adds"] = false;
    if (!r.info.empty()) o["info"] = r.info;
    recs.push_back(std::move(o));
  }
  return {{"arity", t.arity}, {"word_ids", t.word_ids}, {"records", recs}};
}

Trace trace_from_json(const json& j) {
  try {
    Trace t;
    t.arity = j.value("arity", std::size_t{1});
    t.word_ids = j.value("word_ids", std::vector<std::string>{});
    for (auto& o : j.at("records")) {
      TraceRecord r;
      r.stage = o.at("stage").get<std::size_t>();
      r.step = o.at("step").get<std::string>();
      r.var = o.value("var", std::size_t{0});
      auto p = pair_from(o.at("pair"), "pair");
      r.a = p.first;
      r.b = p.second;
      r.adds = o.value("adds", true);
      // fp keyed by word id, realigned to word_ids
      if (o.contains("fp")) {
        auto& fp = o["fp"];
        for (std::size_t i = 0; i < t.word_ids.size(); ++i)
          if (fp.contains(t.word_ids[i])) {
            r.fp.resize(i + 1);
            r.fp[i] = fp[t.word_ids[i]].get<std::size_t>();
          }
      }
      if (o.contains("info")) r.info = o["info"].get<std::map<std::string, std::int64_t>>();
      t.records.push_back(std::move(r));
    }
    return t;
  } catch (const json::exception& e) {
    throw ParseError("trace", e.what());
  }
}

std::vector<int> bits_from_hex(const std::string& hex, std::optional<std::size_t> count) {
  std::string h = hex;
  if (h.rfind("0x", 0) == 0 || h.rfind("0X", 0) == 0) h = h.substr(2);
  std::vector<int> bits;
  for (char c : h) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ParseError("bits", std::string("not a hex digit: '") + c + "'");
    for (int k = 3; k >= 0; --k) bits.push_back((v >> k) & 1);
  }
  if (count) {
    if (*count > bits.size()) throw ParseError("bits", "count exceeds the hex string");
    bits.resize(*count);
  }
  return bits;
}

std::string bits_to_hex(const std::vector<int>& bits) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int v = 0;
    for (std::size_t k = 0; k < 4; ++k) v = v * 2 + (i + k < bits.size() ? bits[i + k] : 0);
    out += digits[v];
  }
  return out;
}

json error_to_json(const Error& e) {
  return {{"schema_version", kSchemaVersion}, {"error", {{"phase", e.phase()}, {"cause", e.kind()}, {"context", e.context()}}}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("output", "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace cofin::io
