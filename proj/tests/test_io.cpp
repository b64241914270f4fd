#include <catch2/catch_amalgamated.hpp>

#include "cqdp/io.hpp"

#include "cqdp/witness.hpp"
#include "test_support.hpp"

using namespace cqdp;

TEST_CASE("parse_tuple reads classical documents", "[io]") {
  const std::string text = R"({
    "kind": "classical",
    "eps_hint": 0.6931471805599453,
    "metadata": {"label": "pair"},
    "payload": [[0.6666666666666666, 0.3333333333333333],
                [0.3333333333333333, 0.6666666666666666]]
  })";
  const TupleDocument doc = parse_tuple(text);
  REQUIRE(doc.is_classical());
  const ClassicalTuple& t = doc.classical();
  REQUIRE(t.size() == 2);
  REQUIRE(t.dim() == 2);
  REQUIRE(t[0][0] == 0.6666666666666666);
  REQUIRE(doc.eps_hint.has_value());
  REQUIRE(*doc.eps_hint == 0.6931471805599453);
  REQUIRE(doc.metadata.at("label") == "pair");
}

TEST_CASE("parse_tuple reads density documents", "[io]") {
  const std::string text = R"({
    "kind": "density",
    "payload": [
      [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]],
      [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]
    ]
  })";
  const TupleDocument doc = parse_tuple(text);
  REQUIRE_FALSE(doc.is_classical());
  REQUIRE(doc.density().size() == 2);
  REQUIRE(doc.density()[0](0, 0) == Complex{0.5});
}

TEST_CASE("parse_tuple reports schema errors with locations", "[io]") {
  REQUIRE_THROWS_AS(parse_tuple("not json"), ParseError);
  REQUIRE_THROWS_AS(parse_tuple("[1,2]"), ParseError);
  REQUIRE_THROWS_AS(parse_tuple(R"({"payload": [[1.0],[1.0]]})"), ParseError);  // no kind
  REQUIRE_THROWS_AS(parse_tuple(R"({"kind": "spooky", "payload": []})"), ParseError);
  REQUIRE_THROWS_AS(parse_tuple(R"({"kind": "classical", "payload": [[1.0]]})"), ParseError);

  try {
    parse_tuple(R"({"kind": "classical", "payload": [[0.5, 0.5], [0.5, "x"]]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(std::string(e.what()).find("payload[1][1]") != std::string::npos);
  }

  try {
    parse_tuple(R"({"kind": "density", "payload": [
      [[[1.0, 0.0], [0.0]], [[0.0, 0.0], [0.0, 0.0]]],
      [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(std::string(e.what()).find("payload[0][0][1]") != std::string::npos);
  }
}

TEST_CASE("parse_tuple reports invariant violations by name", "[io]") {
  try {
    parse_tuple(R"({"kind": "classical", "payload": [[0.5, 0.4], [0.5, 0.5]]})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(std::string(e.what()).find("normalization") != std::string::npos);
    REQUIRE(std::string(e.what()).find("payload[0]") != std::string::npos);
  }

  try {
    parse_tuple(R"({"kind": "classical", "payload": [[1.2, -0.2], [0.5, 0.5]]})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(std::string(e.what()).find("nonnegativity") != std::string::npos);
  }

  // trace 1.2
  try {
    parse_tuple(R"({"kind": "density", "payload": [
      [[[0.6, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.6, 0.0]]],
      [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]]})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(std::string(e.what()).find("trace") != std::string::npos);
  }

  // asymmetric off-diagonal
  try {
    parse_tuple(R"({"kind": "density", "payload": [
      [[[0.5, 0.0], [0.3, 0.0]], [[0.1, 0.0], [0.5, 0.0]]],
      [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]]})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(std::string(e.what()).find("hermitian") != std::string::npos);
  }

  // unit trace but eigenvalues 1.15 and -0.15
  try {
    parse_tuple(R"({"kind": "density", "payload": [
      [[[0.5, 0.0], [0.65, 0.0]], [[0.65, 0.0], [0.5, 0.0]]],
      [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]]})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(std::string(e.what()).find("semidefinite") != std::string::npos);
  }
}

TEST_CASE("emit_tuple round-trips classical tuples bit-exactly", "[io]") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ProbabilityVector> rows;
    for (int i = 0; i < 3; ++i) rows.push_back(testutil::random_probability(rng, 4));
    const ClassicalTuple t(std::move(rows));
    const std::string text = emit_tuple(t, 0.5, {{"trial", std::to_string(trial)}});
    const TupleDocument back = parse_tuple(text);
    REQUIRE(back.is_classical());
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 4; ++k) REQUIRE(back.classical()[i][k] == t[i][k]);
    REQUIRE(emit_tuple(back) == text);
  }
}

TEST_CASE("emit_tuple round-trips witness tuples with verdicts intact", "[io]") {
  const double eps = std::log(2.0);
  const DensityTuple witness =
      witness_tuple(equiangular_complex(2, 0.5), witness_params(eps, 0.5).t_max);
  const std::string text = emit_tuple(witness);
  const TupleDocument back = parse_tuple(text);
  REQUIRE_FALSE(back.is_classical());
  const DensityTuple& copy = back.density();
  for (int i = 0; i < witness.size(); ++i)
    for (int r = 0; r < witness.dim(); ++r)
      for (int c = 0; c < witness.dim(); ++c) REQUIRE(copy[i](r, c) == witness[i](r, c));
  REQUIRE(cq_dp_check(copy, eps) == cq_dp_check(witness, eps));
  REQUIRE(emit_tuple(copy) == text);
}

TEST_CASE("empty or singleton payloads are refused", "[io]") {
  REQUIRE_THROWS_AS(parse_tuple(R"({"kind": "classical", "payload": []})"), ParseError);
  REQUIRE_THROWS_AS(parse_tuple(R"({"kind": "density", "payload": []})"), ParseError);
}

TEST_CASE("parse_number_literal accepts decimals and ln forms", "[io]") {
  REQUIRE(parse_number_literal("0.25") == 0.25);
  REQUIRE(parse_number_literal("2") == 2.0);
  REQUIRE(parse_number_literal("ln2") == std::log(2.0));
  REQUIRE(parse_number_literal("ln2.5") == std::log(2.5));
  REQUIRE(parse_number_literal("1e-3") == 1e-3);
  REQUIRE_THROWS_AS(parse_number_literal("nope"), ParseError);
  REQUIRE_THROWS_AS(parse_number_literal("2x"), ParseError);
  REQUIRE_THROWS_AS(parse_number_literal("ln-1"), ParseError);
  REQUIRE_THROWS_AS(parse_number_literal("ln0"), ParseError);
}

TEST_CASE("format_number survives text round-trips", "[io]") {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = std::exp(u(rng)) * (u(rng) > 0 ? 1.0 : -1.0);
    REQUIRE(std::stod(format_number(x)) == x);
  }
}

TEST_CASE("sweep_csv lays out the fixed column order", "[io]") {
  std::vector<SweepRow> rows;
  rows.push_back({.eps = 0.5, .theta = 0.25, .n = 3, .d = {}, .c = {}, .t = {},
                  .quantity = "mnc", .value = 0.125});
  rows.push_back({.eps = 1.0, .theta = {}, .n = {}, .d = {}, .c = {}, .t = {},
                  .quantity = "thm-margin", .value = 0.25});
  const std::string csv = sweep_csv(rows);
  REQUIRE(csv.rfind("eps,theta,n,d,c,t,quantity,value\n", 0) == 0);
  REQUIRE(csv.find("0.5,0.25,3,,,,mnc,0.125\n") != std::string::npos);
  REQUIRE(csv.find("1,,,,,,thm-margin,0.25\n") != std::string::npos);
}
