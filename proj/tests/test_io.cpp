#include "doctest.h"

#include "cofin/io.hpp"

using namespace cofin;
using io::json;

TEST_CASE("function specs roundtrip") {
  std::vector<json> specs = {
      json::parse(R"({"kind":"table","entries":[[0,3],[1,0],[3,1]]})"),
      json::parse(R"({"kind":"patch","swaps":[[2,5],[7,7]]})"),
      json::parse(R"({"kind":"rule","clauses":[[2,0,1,1],{"modulus":2,"residue":1,"mul":1,"add":-1}]})"),
      json::parse(R"({"kind":"base_h"})"),
  };
  for (auto& s : specs) {
    auto f = io::function_from_json(s);
    auto g = io::function_from_json(io::function_to_json(f));
    for (Nat n = 0; n < 100; ++n) CHECK(f.apply(n) == g.apply(n));
  }
  auto r = io::function_from_json(specs[2]);
  CHECK(r.apply(4) == 5);
  CHECK(r.apply(5) == 4);
  CHECK(io::function_from_json(specs[3]).apply(0) == 1);
  CHECK(io::family_from_json(json::array({specs[0], specs[3]})).size() == 2);
}

TEST_CASE("malformed specs") {
  for (auto text : {R"({"entries":[]})", R"({"kind":"warp"})", R"({"kind":"table","entries":[[0,1],[0,2]]})",
                    R"({"kind":"table","entries":[[0]]})", R"({"kind":"rule","clauses":[[0,0,1,1]]})",
                    R"({"kind":"patch","swaps":[[1,2],[2,3]]})", R"({"kind":"rule"})"})
    CHECK_THROWS_AS(io::function_from_json(json::parse(text)), ParseError);
}

TEST_CASE("presentations") {
  auto z2 = io::presentation_from_json(json::parse(R"({"generators":2,"relators":["x0^2","[x0,x1]"],"normal_form":"abelian-order-2"})"));
  CHECK(z2.generators() == 2);
  CHECK(z2.order() == 4);
  auto z4 = io::presentation_from_json(json::parse(R"({"generators":1,"relators":["x0^4"],"normal_form":"abelian","orders":[4]})"));
  CHECK(z4.order() == 4);
  CHECK(io::presentation_from_json(json::parse(R"({"generators":2,"normal_form":"free"})")).relators().empty());
  CHECK_THROWS_AS(io::presentation_from_json(json::parse(R"({"generators":1,"relators":["x0^3"],"normal_form":"abelian-order-2"})")),
                  UnsupportedPresentation);
  CHECK_FALSE(io::presentation_from_json(json::parse(R"({"generators":1,"relators":["x0^3"]})")).supported());
  CHECK_THROWS_AS(io::presentation_from_json(json::parse(R"({"relators":[]})")), ParseError);
}

TEST_CASE("traces, injections, bits") {
  Trace t;
  t.word_ids = {"x", "x x"};
  t.records.push_back({0, "domain", 0, 3, 4, true, {0, 1}, {}});
  t.records.push_back({1, "start", 0, 0, 9, false, {}, {{"word", 1}}});
  auto j = io::trace_to_json(t);
  CHECK(j["records"][0]["pair"] == json::array({3, 4}));
  CHECK(j["records"][0]["fp"]["x x"] == 1);
  auto back = io::trace_from_json(j);
  REQUIRE(back.records.size() == 2);
  CHECK(back.records[0].fp == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(back.records[1].adds);
  CHECK(back.records[1].info.at("word") == 1);
  CHECK(back.replay()[0] == t.replay()[0]);

  PartialInjection p{{1, 2}, {5, 0}};
  CHECK(io::injection_from_json(io::injection_to_json(p)) == p);
  CHECK_THROWS_AS(io::injection_from_json(json::parse("[[1,2],[3,2]]")), ParseError);

  CHECK(io::bits_from_hex("a5") == std::vector<int>{1, 0, 1, 0, 0, 1, 0, 1});
  CHECK(io::bits_from_hex("0xF", 2) == std::vector<int>{1, 1});
  CHECK(io::bits_to_hex({1, 0, 1, 0, 0, 1, 0, 1}) == "a5");
  CHECK(io::bits_to_hex({1, 1}) == "c");
  CHECK_THROWS_AS(io::bits_from_hex("zz"), ParseError);
}
