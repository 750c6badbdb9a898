// cofwb: command-line front end for the builders and the property suite.
// Every artifact is JSON with a schema_version and the echoed run config;
// orbit trees can also be written as DOT.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cofin/coding.hpp"
#include "cofin/embedding.hpp"
#include "cofin/extension.hpp"
#include "cofin/guessing.hpp"
#include "cofin/io.hpp"
#include "cofin/madness.hpp"
#include "cofin/orbits.hpp"
#include "cofin/slaloms.hpp"
#include "cofin/verify/acceptance.hpp"

using namespace cofin;
using io::json;

namespace {

struct RunConfig {
  Nat window = 256;
  Nat threshold = 0;
  std::size_t stages = 20;
  std::optional<std::uint64_t> seed_flag;
  std::uint64_t seed = 1;
  Nat sub_window = 12;
  std::size_t sample_budget = 200;
  std::optional<Nat> search_bound;
  std::string in, out;

  Window win() const { return Window(window, threshold); }

  void validate() {
    if (window == 0) throw InvalidArgument("config", "--window must be positive");
    if (threshold >= window) throw InvalidArgument("config", "--threshold must be below --window");
    if (sub_window == 0) throw InvalidArgument("config", "--sub-window must be positive");
    if (seed_flag) {
      seed = *seed_flag;
    } else if (const char* env = std::getenv("COFWB_SEED")) {
      try {
        seed = std::stoull(env);
      } catch (const std::exception&) {
        throw InvalidArgument("config", std::string("COFWB_SEED is not a number: ") + env);
      }
    }
  }

  json to_json() const {
    json j = {{"window", window},          {"threshold", threshold},         {"stages", stages},
              {"seed", seed},              {"sub_window", sub_window},       {"sample_budget", sample_budget},
              {"search_bound", nullptr},   {"in", in},                       {"out", out}};
    if (search_bound) j["search_bound"] = *search_bound;
    return j;
  }
};

json artifact(const std::string& command, const RunConfig& cfg) {
  return {{"schema_version", io::kSchemaVersion}, {"command", command}, {"config", cfg.to_json()}};
}

const std::string& need(const std::string& path, const char* flag) {
  if (path.empty()) throw InvalidArgument("config", std::string(flag) + " is required");
  return path;
}

// {"context": {"h": spec, ...}}; absent → the base permutation as h
GroupContext context_from(const json& j) {
  if (!j.is_object() || !j.contains("context")) return GroupContext::with_base_h("h");
  if (!j["context"].is_object()) throw ParseError("context", "expected {name: function-spec}");
  GroupContext ctx;
  for (auto& [name, spec] : j["context"].items()) ctx.add(name, io::function_from_json(spec));
  return ctx;
}

std::vector<Word> words_from(const json& j, const GroupContext& ctx, const Window& win) {
  std::vector<Word> ws;
  if (!j.is_object() || !j.contains("words")) return ws;
  for (auto& t : j["words"]) {
    if (!t.is_string()) throw ParseError("words", "words must be strings");
    ws.push_back(Word::parse(t.get<std::string>(), ctx, win));
  }
  return ws;
}

std::vector<Function> functions_at(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) return {};
  return io::family_from_json(j[key]);
}

json word_ids(const std::vector<Word>& ws, const GroupContext& ctx) {
  json a = json::array();
  for (auto& w : ws) a.push_back(w.str(ctx));
  return a;
}

json bits_json(const std::vector<int>& bits) { return {{"hex", io::bits_to_hex(bits)}, {"count", bits.size()}, {"bits", bits}}; }

// ---- subcommands ----

json cmd_build_generator(const RunConfig& cfg) {
  json in = cfg.in.empty() ? json::object() : io::read_json_file(cfg.in);
  auto win = cfg.win();
  auto ctx = context_from(in);
  BuildSchedule s;
  s.words = words_from(in, ctx, win);
  s.targets = functions_at(in, "targets");
  s.stages = cfg.stages;
  s.window = win;
  s.search_bound = cfg.search_bound;
  auto r = build_cofinitary_generator(ctx, s);
  r.trace.word_ids.clear();
  for (auto& w : s.words) r.trace.word_ids.push_back(w.str(ctx));
  json out = artifact("build-generator", cfg);
  out["g"] = io::injection_to_json(r.g);
  out["words"] = word_ids(s.words, ctx);
  auto counts = fixed_point_counts(s.words, std::vector<PartialInjection>{r.g}, ctx, win);
  out["fixed_points"] = counts;
  out["trace"] = io::trace_to_json(r.trace);
  return out;
}

json cmd_encode_vm(const RunConfig& cfg, const std::string& a_file, const std::string& f_file, const std::string& hex,
                   std::optional<std::size_t> count) {
  Family A = a_file.empty() ? Family{} : io::family_from_json(io::read_json_file(a_file));
  Family F = f_file.empty() ? Family{} : io::family_from_json(io::read_json_file(f_file));
  auto chi = io::bits_from_hex(hex, count);
  auto r = encode_vm(A, F, chi, cfg.win());
  json out = artifact("encode-vm", cfg);
  out["g"] = io::finfn_to_json(r.g);
  out["start"] = r.start;
  out["input"] = bits_json(chi);
  out["trace"] = io::trace_to_json(r.trace);
  return out;
}

json cmd_decode_vm(const RunConfig& cfg, std::optional<std::size_t> count) {
  auto in = io::read_json_file(need(cfg.in, "--in"));
  if (!in.contains("g")) throw ParseError(cfg.in, "expected an encode-vm artifact with \"g\"");
  auto g = io::finfn_from_json(in["g"]);
  Nat start = in.value("start", Nat{0});
  std::size_t k = count.value_or(in.contains("input") ? in["input"].value("count", std::size_t{0}) : 0);
  json out = artifact("decode-vm", cfg);
  out["start"] = start;
  out["decoded"] = bits_json(decode_vm(g, k, start));
  return out;
}

json cmd_encode_cfg(const RunConfig& cfg, const std::string& words_file, const std::string& hex,
                    std::optional<std::size_t> count) {
  auto in = io::read_json_file(need(words_file, "--words"));
  auto win = cfg.win();
  auto ctx = context_from(in);
  auto ws = words_from(in, ctx, win);
  auto bits = io::bits_from_hex(hex, count);
  auto r = encode_cfg(ctx, functions_at(in, "targets"), bits, ws, cfg.stages, win);
  json out = artifact("encode-cfg", cfg);
  out["context"] = in.value("context", json::object());
  out["g"] = io::injection_to_json(r.g);
  out["input"] = bits_json(bits);
  json cw = json::array();
  for (auto& c : r.words)
    cw.push_back({{"word", c.w.str(ctx)}, {"gamma", c.gamma}, {"m", c.m}, {"start", c.start}, {"started", c.started},
                  {"encoded", c.encoded}});
  out["words"] = cw;
  out["avoid"] = r.avoid;
  out["trace"] = io::trace_to_json(r.trace);
  return out;
}

// --fn: an encode-cfg artifact (pick --word) or a plain function spec
json cmd_decode_cfg(const RunConfig& cfg, const std::string& fn_file, std::optional<Nat> m, std::optional<int> mode,
                    std::optional<std::size_t> count, std::size_t word_index) {
  auto in = io::read_json_file(need(fn_file, "--fn"));
  auto win = cfg.win();
  // word_image keeps references: ctx, g and w must outlive f
  PartialFn f;
  Function spec;
  GroupContext ctx;
  PartialInjection g;
  Word w;
  json out = artifact("decode-cfg", cfg);
  if (in.contains("g") && in.contains("words")) {
    if (word_index >= in["words"].size()) throw InvalidArgument("decode-cfg", "--word out of range");
    auto& entry = in["words"][word_index];
    ctx = context_from(in);
    g = io::injection_from_json(in["g"]);
    w = Word::parse(entry.at("word").get<std::string>(), ctx, win);
    f = word_image(w, g, ctx, win);
    if (!m) m = entry.at("m").get<Nat>();
    if (!mode) mode = entry.at("gamma").get<int>();
    if (!count) count = entry.at("encoded").get<std::size_t>();
    out["word"] = entry["word"];
  } else {
    spec = io::function_from_json(in);
    f = [&spec, win](Nat n) { return spec.apply(n, win); };
    if (!m || !mode || !count) throw InvalidArgument("decode-cfg", "--m, --mode and --count are required for a function spec");
  }
  if (*mode != 0 && *mode != 1) throw InvalidArgument("decode-cfg", "--mode must be 0 or 1");
  out["m"] = *m;
  out["mode"] = *mode;
  out["decoded"] = bits_json(decode_cfg_bits(f, *m, *mode, *count, win));
  return out;
}

json cmd_orbit_tree(const RunConfig& cfg, std::string* dot) {
  auto in = io::read_json_file(need(cfg.in, "--in"));
  auto win = cfg.win();
  auto ctx = context_from(in);
  auto orbits = compute_orbits(ctx, win);
  auto cr = build_crossing_h(orbits, cfg.stages, win);
  auto tree = orbit_tree(cr.h, orbits);
  json out = artifact("orbit-tree", cfg);
  out["orbits"] = orbits.size();
  json sizes = json::array();
  for (auto& o : orbits.orbits) sizes.push_back(o.size());
  out["orbit_sizes"] = sizes;
  out["h"] = io::injection_to_json(cr.h);
  json edges = json::array();
  for (auto& e : tree.edges) edges.push_back({{"orbits", {e.i, e.j}}, {"pair", {e.a, e.b}}});
  out["edges"] = edges;
  out["trace"] = io::trace_to_json(cr.trace);
  if (dot) {
    std::ostringstream os;
    os << "graph orbit_tree {\n";
    std::set<std::size_t> used;
    for (auto& e : tree.edges) used.insert(e.i), used.insert(e.j);
    for (auto v : used) os << "  o" << v << " [label=\"O" << v << " min " << orbits.orbits[v].front() << "\"];\n";
    for (auto& e : tree.edges) os << "  o" << e.i << " -- o" << e.j << " [label=\"" << e.a << "->" << e.b << "\"];\n";
    os << "}\n";
    *dot = os.str();
  }
  return out;
}

json cmd_finite_orbits(const RunConfig& cfg, std::size_t n_inf, std::size_t m_fin) {
  json in = cfg.in.empty() ? json::object() : io::read_json_file(cfg.in);
  auto win = cfg.win();
  auto g = build_finite_orbit_group(n_inf, m_fin, win, cfg.stages, functions_at(in, "targets"));
  auto got = compute_orbits(g.generators, win);
  json out = artifact("finite-orbits", cfg);
  out["n_inf"] = n_inf;
  out["m_fin"] = m_fin;
  out["finite_start"] = g.finite_start;
  out["cases"] = g.cases;
  json blocks = json::array();
  for (auto& b : g.prescribed) blocks.push_back({{"size", b.size()}, {"min", b.empty() ? 0 : b.front()}});
  out["blocks"] = blocks;
  out["matches_partition"] = got.orbits == g.prescribed;
  json gens = json::array();
  for (auto& f : g.generators) gens.push_back(io::function_to_json(f));
  out["generators"] = gens;
  out["trace"] = io::trace_to_json(g.trace);
  return out;
}

json cmd_ksigma(const RunConfig& cfg, const std::string& fn_file, const std::string& samples_file) {
  Function f = fn_file.empty() ? Function::affine(2, 2) : io::function_from_json(io::read_json_file(fn_file));
  Family samples = samples_file.empty() ? Family{} : io::family_from_json(io::read_json_file(samples_file));
  auto r = build_ksigma_h(f, cfg.win(), cfg.stages, samples);
  json out = artifact("ksigma", cfg);
  out["f"] = io::function_to_json(f);
  out["h"] = io::injection_to_json(r.h);
  json part = json::array();
  for (auto& k : r.partition) part.push_back({{"i", k.i}, {"p", k.p}, {"end", k.end}});
  out["partition"] = part;
  auto& rep = r.report;
  out["report"] = {{"prop1", rep.prop1}, {"prop2", rep.prop2}, {"prop3", rep.prop3}, {"prop4", rep.prop4},
                   {"main", rep.main},   {"M", rep.M},         {"main_checked", rep.main_checked},
                   {"violations", rep.violations},             {"all", rep.all()}};
  out["trace"] = io::trace_to_json(r.trace);
  return out;
}

json cmd_embed(const RunConfig& cfg, std::size_t schedule_length) {
  auto pres = io::presentation_from_json(io::read_json_file(need(cfg.in, "--in")));
  GroupContext none;
  auto win = cfg.win();
  EmbeddingOptions opt;
  opt.schedule_length = schedule_length;
  auto r = build_embedding(pres, none, cfg.stages, win, opt);
  json out = artifact("embed", cfg);
  out["presentation"] = pres.kind();
  json comps = json::array();
  for (auto& c : r.components) comps.push_back(io::injection_to_json(c));
  out["components"] = comps;
  out["schedule"] = word_ids(r.schedule, none);
  auto rel = check_relations(r.components, pres, win);
  json rels = json::array();
  for (auto& e : rel.entries) rels.push_back({{"relator", e.relator}, {"defined", e.defined}, {"violations", e.violations}});
  out["relations"] = {{"pass", rel.pass()}, {"entries", rels}};
  out["fixed_points"] = fixed_point_counts(r.schedule, r.components, none, win);
  out["trace"] = io::trace_to_json(r.trace);
  return out;
}

json cmd_localize(const RunConfig& cfg, const std::string& reals_file) {
  auto reals = io::family_from_json(io::read_json_file(need(reals_file, "--reals")));
  auto win = cfg.win();
  auto r = greedy_localizer(reals, cfg.stages, win);
  json out = artifact("localize", cfg);
  json phi = json::array();
  for (auto& [n, s] : r.slalom.entries()) phi.push_back({{"n", n}, {"values", s}});
  out["slalom"] = phi;
  out["sigma_length"] = r.conditions.back().sigma.size();
  out["ingested_at"] = r.ingested_at;
  json wit = json::array();
  for (auto& f : reals) {
    auto l = localizes(r.slalom, f, win);
    wit.push_back(l.m ? json(*l.m) : json(nullptr));
  }
  out["witnesses"] = wit;
  out["width_ok"] = !r.slalom.width_violation(win);
  out["trace"] = io::trace_to_json(r.trace);
  return out;
}

json cmd_guess_step(const RunConfig& cfg, const std::string& family_file, const std::string& target_file) {
  auto fam = io::family_from_json(io::read_json_file(need(family_file, "--family")));
  auto win = cfg.win();
  auto e = cyclic_enumeration(fam.size());
  std::function<Guess(Nat)> guesses;
  std::optional<Function> target;
  std::mt19937_64 rng(cfg.seed);
  if (!target_file.empty()) {
    target = io::function_from_json(io::read_json_file(target_file));
    guesses = [&](Nat s) { return guess_from_target(*target, fam, e, s, win).value_or(Guess{}); };
  } else {
    // seeded random guesses with distinct coordinates
    guesses = [&](Nat s) {
      Guess g;
      std::set<Nat> ks, os;
      const Nat span = std::max<Nat>(win.size / 2, 12 * s + 4);
      while (g.size() < 6 * s + 1) {
        Nat k = rng() % span, o = rng() % span;
        if (ks.count(k) || os.count(o)) continue;
        ks.insert(k), os.insert(o);
        g.push_back({k, o});
      }
      return g;
    };
  }
  auto r = guess_step_ap(fam, guesses, cfg.stages, win, e);
  json out = artifact("guess-step", cfg);
  out["p"] = io::injection_to_json(r.p);
  out["valid_guesses"] = r.valid;
  out["size_at_entry"] = r.size_at_entry;
  bool bound = true;
  for (std::size_t s = 0; s < r.size_at_entry.size(); ++s) bound = bound && r.size_at_entry[s] <= 3 * s;
  out["size_bound_holds"] = bound;
  out["trace"] = io::trace_to_json(r.trace);
  return out;
}

json cmd_witness_set(const RunConfig& cfg, const std::string& fn_file, const std::string& words_file, std::size_t k) {
  auto f = io::function_from_json(io::read_json_file(need(fn_file, "--fn")));
  auto in = io::read_json_file(need(words_file, "--words"));
  auto win = cfg.win();
  auto ctx = context_from(in);
  auto ws = words_from(in, ctx, win);
  VerifyOptions opt;
  opt.sub_window = cfg.sub_window;
  opt.sample_budget = cfg.sample_budget;
  opt.seed = cfg.seed;
  auto r = witness_set(ctx, f, ws, k, win, opt);
  json out = artifact("witness-set", cfg);
  out["k"] = k;
  out["words"] = word_ids(ws, ctx);
  out["S"] = io::pairs_to_json(r.S);
  out["bound"] = r.bound;
  out["removed"] = io::pairs_to_json(r.removed);
  out["exhaustive_checked"] = r.exhaustive_checked;
  out["sampled_checked"] = r.sampled_checked;
  return out;
}

json cmd_verify(const RunConfig& cfg, const std::vector<int>& ids, bool timings, bool* all_pass) {
  verify::SuiteConfig sc;
  sc.seed = cfg.seed;
  sc.build_window = cfg.window;
  sc.build_stages = cfg.stages;
  sc.sub_window = cfg.sub_window;
  sc.sample_budget = cfg.sample_budget;
  json out = artifact("verify", cfg);
  json crit = json::array();
  *all_pass = true;
  for (auto& r : verify::run_suite(sc, ids)) {
    json c = {{"id", r.id}, {"name", r.name}, {"pass", r.pass()}, {"checks_pass", r.checks_pass},
              {"limit_seconds", r.limit_seconds}, {"metrics", r.metrics}, {"failures", r.failures}};
    if (timings) c["seconds"] = r.seconds;
    crit.push_back(std::move(c));
    *all_pass = *all_pass && r.pass();
  }
  out["criteria"] = crit;
  out["pass"] = *all_pass;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cofwb: cofinitary-group workbench"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed (fallback: COFWB_SEED, then 1)");
  app.add_option("--window", cfg.window, "universe bound W");
  app.add_option("--threshold", cfg.threshold, "cutoff standing in for \"finite\"");
  app.add_option("--stages", cfg.stages, "construction stages");
  app.add_option("--sub-window", cfg.sub_window, "exhaustive verification sub-window");
  app.add_option("--sample-budget", cfg.sample_budget, "sampled verification budget");
  Nat bound_value = 0;
  auto* bound_opt = app.add_option("--search-bound", bound_value, "largest candidate a finder may try");
  app.add_option("--in", cfg.in, "input file");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.fallthrough();

  std::string a_file, f_file, hex, words_file, fn_file, samples_file, reals_file, family_file, target_file;
  std::string format = "json";
  std::optional<std::size_t> count;
  std::optional<Nat> m;
  std::optional<int> mode;
  std::size_t word_index = 0, n_inf = 1, m_fin = 0, k = 1, schedule_length = 4;
  std::vector<int> criteria;
  bool timings = false;

  auto* build = app.add_subcommand("build-generator", "build one cofinitary generator against scheduled words");
  auto* evm = app.add_subcommand("encode-vm", "code a bitstring into an eventually-different function");
  evm->add_option("--A", a_file, "family to stay eventually different from");
  evm->add_option("--F", f_file, "functions to hit");
  evm->add_option("--bits", hex, "hex bitstring")->required();
  evm->add_option("--count", count, "number of bits (default: 4 per hex digit)");
  auto* dvm = app.add_subcommand("decode-vm", "decode an encode-vm artifact (--in)");
  dvm->add_option("--count", count, "number of bits");
  auto* ecfg = app.add_subcommand("encode-cfg", "code a bitstring into every scheduled word's image");
  ecfg->add_option("--words", words_file, "{\"context\":{...},\"words\":[...],\"targets\":[...]}")->required();
  ecfg->add_option("--bits", hex, "hex bitstring")->required();
  ecfg->add_option("--count", count, "number of bits");
  auto* dcfg = app.add_subcommand("decode-cfg", "read bits back off a word image");
  dcfg->add_option("--fn", fn_file, "encode-cfg artifact or function spec")->required();
  dcfg->add_option("--m", m, "start value");
  dcfg->add_option("--mode", mode, "0 or 1");
  dcfg->add_option("--count", count, "number of bits");
  dcfg->add_option("--word", word_index, "word index in an encode-cfg artifact");
  auto* otree = app.add_subcommand("orbit-tree", "crossing map and orbit tree for a group context (--in)");
  otree->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
  auto* forb = app.add_subcommand("finite-orbits", "generators with a prescribed orbit partition");
  forb->add_option("--n-inf", n_inf, "infinite orbits");
  forb->add_option("--m-fin", m_fin, "finite orbits");
  auto* ks = app.add_subcommand("ksigma", "interval partition and h for a bounding function");
  ks->add_option("--fn", fn_file, "bounding function spec (default 2n+2)");
  ks->add_option("--samples", samples_file, "group members for the main property");
  auto* emb = app.add_subcommand("embed", "embed a presented group (--in presentation)");
  emb->add_option("--schedule-length", schedule_length, "longest scheduled word");
  auto* loc = app.add_subcommand("localize", "greedy slalom localizing the given reals");
  loc->add_option("--reals", reals_file, "function specs")->required();
  auto* gs = app.add_subcommand("guess-step", "run the guessing construction");
  gs->add_option("--family", family_file, "function specs")->required();
  gs->add_option("--target", target_file, "read guesses off this permutation instead of random ones");
  auto* wset = app.add_subcommand("witness-set", "finite witness set of pairs from f");
  wset->add_option("--fn", fn_file, "function spec")->required();
  wset->add_option("--words", words_file, "{\"context\":{...},\"words\":[...]}")->required();
  wset->add_option("--k", k, "injection size bound");
  auto* ver = app.add_subcommand("verify", "run the full property suite");
  ver->add_option("--criteria", criteria, "subset of criteria (default all)");
  ver->add_flag("--timings", timings, "include wall times (breaks byte-identical reports)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  int status = 0;
  try {
    if (seed_opt->count()) cfg.seed_flag = seed_value;
    if (bound_opt->count()) cfg.search_bound = bound_value;
    cfg.validate();
    json out;
    std::string dot;
    if (build->parsed()) out = cmd_build_generator(cfg);
    else if (evm->parsed()) out = cmd_encode_vm(cfg, a_file, f_file, hex, count);
    else if (dvm->parsed()) out = cmd_decode_vm(cfg, count);
    else if (ecfg->parsed()) out = cmd_encode_cfg(cfg, words_file, hex, count);
    else if (dcfg->parsed()) out = cmd_decode_cfg(cfg, fn_file, m, mode, count, word_index);
    else if (otree->parsed()) out = cmd_orbit_tree(cfg, format == "dot" ? &dot : nullptr);
    else if (forb->parsed()) out = cmd_finite_orbits(cfg, n_inf, m_fin);
    else if (ks->parsed()) out = cmd_ksigma(cfg, fn_file, samples_file);
    else if (emb->parsed()) out = cmd_embed(cfg, schedule_length);
    else if (loc->parsed()) out = cmd_localize(cfg, reals_file);
    else if (gs->parsed()) out = cmd_guess_step(cfg, family_file, target_file);
    else if (wset->parsed()) out = cmd_witness_set(cfg, fn_file, words_file, k);
    else if (ver->parsed()) {
      bool pass = false;
      out = cmd_verify(cfg, criteria, timings, &pass);
      status = pass ? 0 : 1;
    }
    if (!dot.empty()) {
      if (cfg.out.empty() || cfg.out == "-") {
        std::cout << dot;
      } else {
        std::ofstream os(cfg.out);
        os << dot;
      }
    } else {
      io::write_json(out, cfg.out);
    }
  } catch (const Error& e) {
    std::cerr << io::error_to_json(e).dump(2) << '\n';
    const bool malformed = e.kind() == "ParseError" || e.kind() == "InvalidArgument";
    return malformed ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"schema_version", io::kSchemaVersion},
                      {"error", {{"phase", "cli"}, {"cause", "internal"}, {"context", e.what()}}}}
                     .dump(2)
              << '\n';
    return 1;
  }
  return status;
}
