#include <doctest.h>

#include <cmath>

#include "bbfs/runner.hpp"

using namespace bbfs;

namespace {

const char* kSmallConfig = R"(
# minimal experiment
suite = demo
seed = 42
grid { n = 1  box = [-4, 4]  L = 5 }
weights {
  cp03 { kind = cappedPower  alpha = 0.3 }
}
spaces {
  L2  { tag = WeightedLebesgue  p = 2  weight = unit }
  L3w { tag = WeightedLebesgue  p = 3  weight = cp03 }
  Lor { tag = Lorentz  p = 2  q = 1 }
}
batteries {
  std { kind = mixed  count = 6 }
}
checks {
  ax { kind = axioms  space = L2  battery = std }
}
)";

}  // namespace

TEST_CASE("config parsing: values, lists, blocks, comments") {
    ConfigNode n = ConfigNode::parse(kSmallConfig);
    CHECK(n.at("seed").number() == 42.0);
    CHECK(n.at("suite").str() == "demo");
    const ConfigNode& g = n.at("grid").block();
    CHECK(g.at("L").number() == 5.0);
    CHECK(g.at("box").list().size() == 2);
    CHECK(g.at("box").list()[0].number() == -4.0);

    // quoted strings and inf
    ConfigNode q = ConfigNode::parse("name = \"hello world\"\nq = inf\n");
    CHECK(q.at("name").str() == "hello world");
    CHECK(std::isinf(q.at("q").number()));

    CHECK_THROWS_AS(ConfigNode::parse("grid {"), ConfigParseError);
    CHECK_THROWS_AS(ConfigNode::parse("a = [1, 2"), ConfigParseError);
    CHECK_THROWS_AS(ConfigNode::parse("a b c"), ConfigParseError);
}

TEST_CASE("config serialize round trip") {
    ConfigNode n = ConfigNode::parse(kSmallConfig);
    std::string text = n.serialize();
    ConfigNode back = ConfigNode::parse(text);
    CHECK(back.serialize() == text);  // canonical form is a fixed point
}

TEST_CASE("experiment validation errors carry the offending name") {
    ConfigNode bad = ConfigNode::parse(R"(
seed = 1
grid { n = 1 box = [0, 1] L = 4 }
spaces { X { tag = WeightedLebesgue p = 2 weight = nosuch } }
)");
    try {
        build_experiment(bad);
        CHECK(false);
    } catch (const ConfigValidationError& e) {
        CHECK(std::string(e.what()).find("nosuch") != std::string::npos);
    }

    ConfigNode badcheck = ConfigNode::parse(R"(
seed = 1
grid { n = 1 box = [0, 1] L = 4 }
checks { c { kind = axioms space = missing } }
)");
    CHECK_THROWS_AS(build_experiment(badcheck), ConfigValidationError);

    ConfigNode noseed = ConfigNode::parse("grid { n = 1 box = [0, 1] L = 4 }\n");
    CHECK_THROWS_AS(build_experiment(noseed), ConfigValidationError);

    ConfigNode badkind = ConfigNode::parse(R"(
seed = 1
grid { n = 1 box = [0, 1] L = 4 }
spaces { X { tag = WeightedLebesgue p = 2 weight = unit } }
checks { c { kind = frobnicate space = X } }
)");
    CHECK_THROWS_AS(build_experiment(badkind), ConfigValidationError);

    ConfigNode nospace = ConfigNode::parse(R"(
seed = 1
grid { n = 1 box = [0, 1] L = 4 }
checks { c { kind = axioms } }
)");
    CHECK_THROWS_AS(build_experiment(nospace), ConfigValidationError);
}

TEST_CASE("run_experiment produces reports and deterministic json") {
    ConfigNode cfg = ConfigNode::parse(kSmallConfig);
    Experiment exp = build_experiment(cfg);
    RunResult r1 = run_experiment(exp);
    CHECK(r1.exit_code == 0);
    CHECK(r1.pass);
    REQUIRE(r1.reports.size() == 1);
    CHECK(r1.reports[0].check == "ax");
    CHECK(r1.reports[0].pass);

    // rerun from scratch: byte-identical outputs
    RunResult r2 = run_experiment(build_experiment(cfg));
    CHECK(r1.json_text == r2.json_text);
    CHECK(r1.csv_text == r2.csv_text);

    // rerun from the effective config: byte-identical as well
    ConfigNode eff = ConfigNode::parse(r1.effective_config);
    RunResult r3 = run_experiment(build_experiment(eff));
    CHECK(r3.json_text == r1.json_text);
}

TEST_CASE("runner covers every check kind") {
    const char* cfg_text = R"(
seed = 7
grid { n = 1  box = [-4, 4]  L = 5 }
weights { cp03 { kind = cappedPower alpha = 0.3 } }
spaces {
  L2 { tag = WeightedLebesgue p = 2 weight = unit }
  Hz { tag = Herz alpha = 0.2 p = 2 q = 3 }
}
batteries {
  std { kind = mixed count = 4 }
  ind { kind = indicators count = 4 }
}
wavelet { family = haar J = 0 }
checks {
  c1 { kind = axioms space = L2 battery = std }
  c2 { kind = extrapolation family = maximal space = L2 battery = ind }
  c3 { kind = proof_chain space = L2 p = 2 }
  c4 { kind = wavelet_equivalence space = L2 battery = std }
  c5 { kind = convergence space = L2 battery = std index = 1 }
  c6 { kind = vector_valued space = L2 battery = ind r = 2 }
  c7 { kind = riesz_boundedness space = L2 battery = ind }
}
)";
    Experiment exp = build_experiment(ConfigNode::parse(cfg_text));
    CHECK(exp.checks.size() == 7);
    RunResult r = run_experiment(exp);
    REQUIRE(r.reports.size() == 7);
    for (const auto& rep : r.reports) {
        INFO(rep.check);
        CHECK((rep.pass || !rep.asserted));
    }
    CHECK(r.exit_code == 0);
    // csv carries plot rows
    CHECK(r.csv_text.find("check,probe_id,x,value") == 0);
    CHECK(r.csv_text.size() > 100);
}

TEST_CASE("two-dimensional experiment runs end to end") {
    const char* cfg_text = R"(
seed = 11
grid { n = 2  box = [-2, 2, -2, 2]  L = 3 }
spaces { L2 { tag = WeightedLebesgue  p = 2  weight = unit } }
batteries { std { kind = mixed  count = 4 } }
wavelet { family = haar  J = 0 }
checks {
  ax { kind = axioms  space = L2  battery = std }
  ex { kind = extrapolation  family = maximal  space = L2  battery = std }
  eq { kind = wavelet_equivalence  space = L2  battery = std }
}
)";
    RunResult r = run_experiment(build_experiment(ConfigNode::parse(cfg_text)));
    CHECK(r.exit_code == 0);
    for (const auto& rep : r.reports) {
        INFO(rep.check);
        CHECK(rep.pass);
    }
}

TEST_CASE("a throwing check becomes a failed report, not an aborted run") {
    // haar has smoothness 0, so s = 0.5 violates the equivalence hypothesis
    const char* cfg_text = R"(
seed = 3
grid { n = 1  box = [-2, 2]  L = 5 }
spaces { L2 { tag = WeightedLebesgue  p = 2  weight = unit } }
batteries { std { kind = mixed  count = 4 } }
checks {
  bad { kind = wavelet_equivalence  space = L2  battery = std  s = 0.5 }
  ok  { kind = axioms  space = L2  battery = std }
}
)";
    RunResult r = run_experiment(build_experiment(ConfigNode::parse(cfg_text)));
    CHECK(r.exit_code == 1);
    REQUIRE(r.reports.size() == 2);
    CHECK(!r.reports[0].pass);
    CHECK(r.reports[0].entries.front().id == "error");
    CHECK(r.reports[1].pass);  // the rest of the run still executed
}

TEST_CASE("worker pool produces the same bytes as sequential") {
    ConfigNode cfg = ConfigNode::parse(kSmallConfig);
    Experiment seq = build_experiment(cfg);
    RunResult r1 = run_experiment(seq);
    Experiment par = build_experiment(cfg);
    par.workers = 3;
    RunResult r2 = run_experiment(par);
    CHECK(r1.json_text == r2.json_text);
}

TEST_CASE("list texts enumerate the catalogue") {
    std::string spaces = list_spaces_text();
    for (const auto& tag : space_tag_names())
        CHECK(spaces.find(tag) != std::string::npos);
    std::string checks = list_checks_text();
    for (const auto& name : harness_check_names())
        CHECK(checks.find(name) != std::string::npos);
}
