#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cofin/core.hpp"
#include "cofin/embedding.hpp"
#include "cofin/trace.hpp"

namespace cofin::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// {"kind":"table","entries":[[n,m],...]} | {"kind":"patch","swaps":[[a,b],...]}
// | {"kind":"rule","clauses":[{modulus,residue,mul,add} or [m,r,mul,add]],"overrides":[...]} | {"kind":"base_h"}
Function function_from_json(const json& j);
json function_to_json(const Function& f);
// a single spec, an array of specs, or {"functions":[...]}
std::vector<Function> family_from_json(const json& j);

// {"generators":n,"relators":["x0^2","[x0,x1]"],"normal_form":"abelian-order-2"}
// normal_form: free | abelian-order-k | abelian (with "orders") | absent (unsupported)
Presentation presentation_from_json(const json& j);

json pairs_to_json(const std::vector<NatPair>& ps);
json injection_to_json(const PartialInjection& p);
PartialInjection injection_from_json(const json& j);
json finfn_to_json(const FinFn& f);
FinFn finfn_from_json(const json& j);

// records follow {"stage","step","var","pair":[a,b],"fp":{word-id:count}} plus adds/info
json trace_to_json(const Trace& t);
Trace trace_from_json(const json& j);

// four bits per hex digit, most significant first; count trims the tail
std::vector<int> bits_from_hex(const std::string& hex, std::optional<std::size_t> count = {});
std::string bits_to_hex(const std::vector<int>& bits);

json error_to_json(const Error& e);

// parse errors surface as ParseError(phase = file name)
json read_json_file(const std::string& path);
void write_json(const json& j, const std::string& path);  // "-" or empty: stdout

}  // namespace cofin::io
