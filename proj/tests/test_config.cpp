#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cantor/config.hpp"
#include "cantor/errors.hpp"

using namespace cantor;
using nlohmann::json;

namespace {

json uniform_config() {
    return json::parse(R"({
        "schema": 1,
        "Q": {"kind": "2^n"},
        "P": {"polys": ["X"]},
        "F": {"upper": {"kind": "uniform"}, "lower": {"kind": "uniform"}},
        "N": 200
    })");
}

} // namespace

TEST_CASE("q kinds") {
    CHECK(q_from_json(json::parse(R"({"kind":"2^n"})")).q(5) == 32);
    CHECK(q_from_json(json::parse(R"({"kind":"n+1"})")).q(5) == 6);
    CHECK(q_from_json(json::parse(R"({"kind":"constant","value":16})")).q(9) == 16);
    CHECK(q_from_json(json::parse(R"({"kind":"constant","value":"12345678901234567890"})")).q(1) ==
          Integer("12345678901234567890"));
    auto L = q_from_json(json::parse(R"({"kind":"list","values":[2,3,3,7]})"));
    CHECK(L.q(4) == 7);
    CHECK_THROWS_AS(L.growth_index(Integer(3)), UnsupportedError);
    auto W = q_from_json(json::parse(R"({"kind":"list","values":[2,3,3,7],"witness":"monotone"})"));
    CHECK(W.growth_index(Integer(3)) == 2);
    CHECK(W.growth_index(Integer(4)) == 4);
    CHECK_THROWS_AS(W.growth_index(Integer(8)), RangeError);

    CHECK_THROWS_AS(q_from_json(json::parse(R"({"kind":"list","values":[3,2],"witness":"monotone"})")), ConfigError);
    CHECK_THROWS_AS(q_from_json(json::parse(R"({"kind":"constant","value":1})")), ConfigError);
    CHECK_THROWS_AS(q_from_json(json::parse(R"({"kind":"fib"})")), ConfigError);
    CHECK_THROWS_AS(q_from_json(json::parse(R"({"kind":"list","values":[2,1]})")), ConfigError);
    CHECK_THROWS_AS(q_from_json(json::parse(R"("2^n")")), ConfigError);
}

TEST_CASE("polynomial sets") {
    auto P = p_from_json(json::parse(R"({"polys":["X","X^2"]})"));
    REQUIRE(P.polys.size() == 2);
    CHECK(P.certificates[1].size() == 1);
    auto Q = p_from_json(json::parse(R"({"polys":[[0,1],[0,0,1]]})"));
    CHECK(Q.polys[1] == P.polys[1]);
    auto A = p_from_json(json("auto:3"));
    CHECK(A.polys.size() >= 2);
    CHECK(A.to_json() == build_explicit_polyset(3).to_json());
    CHECK(A.polys.front().is_identity());

    CHECK_THROWS_AS(p_from_json(json::parse(R"({"polys":["X^2","X"]})")), ConfigError);
    CHECK_THROWS_AS(p_from_json(json::parse(R"({"polys":["X","X"]})")), ConfigError);
    CHECK_THROWS_AS(p_from_json(json::parse(R"({"polys":["X","Y^2"]})")), ConfigError);
    CHECK_THROWS_AS(p_from_json(json::parse(R"({"polys":["X","X+1"]})")), UnsupportedError);
    CHECK_THROWS_AS(p_from_json(json("auto:x")), ConfigError);
    CHECK_THROWS_AS(p_from_json(json("auto:0")), ConfigError);
    CHECK_THROWS_AS(p_from_json(json("X")), ConfigError);
}

TEST_CASE("target pairs") {
    auto one = json::parse(R"({"upper":{"kind":"uniform"},"lower":{"kind":"uniform"}})");
    CHECK(f_from_json(one, 3).pairs.size() == 3);
    json arr = json::array({one, one});
    CHECK(f_from_json(arr, 2).pairs.size() == 2);
    CHECK_THROWS_AS(f_from_json(arr, 3), ConfigError);
    CHECK_THROWS_AS(f_from_json(json::parse(R"({"upper":{"kind":"uniform"}})"), 1), ConfigError);
    // upper below lower is rejected (x^2 <= x on [0, 1])
    auto bad = json::parse(R"({"upper":{"kind":"power","exponent":2},"lower":{"kind":"uniform"}})");
    CHECK_THROWS_AS(f_from_json(bad, 1), ConfigError);
    auto good = json::parse(R"({"upper":{"kind":"uniform"},"lower":{"kind":"power","exponent":2}})");
    CHECK_NOTHROW(f_from_json(good, 1));
}

TEST_CASE("checkpoints") {
    std::vector<Integer> L{0, 6, 22, 184, 1720};
    CHECK(resolve_checkpoints("stages,N", L, 1000) == std::vector<std::uint64_t>{22, 184, 1000});
    CHECK(resolve_checkpoints("L1, L3, 50, 50", L, 1720) == std::vector<std::uint64_t>{6, 50, 184});
    CHECK(resolve_checkpoints("N,stages", L, 1720) == std::vector<std::uint64_t>{22, 184, 1720});
    CHECK_THROWS_AS(resolve_checkpoints("L4", L, 1000), ConfigError);
    CHECK_THROWS_AS(resolve_checkpoints("L9", L, 1000), ConfigError);
    CHECK_THROWS_AS(resolve_checkpoints("0", L, 1000), ConfigError);
    CHECK_THROWS_AS(resolve_checkpoints("1001", L, 1000), ConfigError);
    CHECK_THROWS_AS(resolve_checkpoints("x", L, 1000), ConfigError);
    CHECK_THROWS_AS(resolve_checkpoints("", L, 1000), ConfigError);
}

TEST_CASE("run config round trip and schedule") {
    auto c = RunConfig::from_json(uniform_config());
    CHECK(c.N == 200);
    CHECK(c.checkpoints == "stages,N");
    CHECK(c.options.residue == ResidueMode::Index);
    CHECK(c.options.anchor == BandAnchor::Infimum);
    auto j = c.to_json();
    auto c2 = RunConfig::from_json(j);
    CHECK(c2.to_json() == j);
    Schedule s = c.make_schedule();
    CHECK(s.covered() >= 200);
    CHECK(s.L()[1] == 6);
    CHECK(s.L()[2] == 22);

    auto k = uniform_config();
    k["checkpoints"] = json::array({"L2", 100});
    k["residue_mode"] = "xi";
    k["band_anchor"] = "support";
    auto c3 = RunConfig::from_json(k);
    CHECK(c3.checkpoints == "L2,100");
    CHECK(c3.options.residue == ResidueMode::XiCoordinate);
    CHECK(c3.options.anchor == BandAnchor::Support);
}

TEST_CASE("run config errors") {
    auto base = uniform_config();
    auto with = [&](const char* key, json v) {
        auto k = base;
        k[key] = std::move(v);
        return k;
    };
    CHECK_THROWS_AS(RunConfig::from_json(with("schema", 2)), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(with("N", 0)), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(with("N", -5)), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(with("N", "many")), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(with("tail_terms", 0)), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(with("tail_terms", "3")), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(with("residue_mode", "other")), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(with("band_anchor", "mid")), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(with("checkpoints", 5)), ConfigError);
    auto missing = base;
    missing.erase("F");
    CHECK_THROWS_AS(RunConfig::from_json(missing), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(json::array()), ConfigError);
    CHECK_THROWS_AS(RunConfig::load("/nonexistent/config.json"), ConfigError);
}
