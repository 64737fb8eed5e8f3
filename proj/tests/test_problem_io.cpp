#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "sird/info.hpp"
#include "sird/problem_io.hpp"

using namespace sird;
using namespace sird::testing;

namespace {

const char* kDenseText = R"({
  "name": "dense-demo",
  "alphabets": [
    { "name": "X", "size": 2 },
    { "name": "Y1", "size": 2 },
    { "name": "Y2", "size": 2 }
  ],
  "joint": [0.2, 0.1, 0.05, 0.15, 0.1, 0.1, 0.05, 0.25],
  "source": ["X"],
  "side": ["Y1", "Y2"],
  "receivers": [
    { "distortion": "hamming" },
    { "distortion": "hamming" }
  ]
})";

const char* kFactoredExample2 = R"({
  "name": "example2",
  "variables": [
    { "name": "X1", "type": "uniform", "size": 2 },
    { "name": "Z", "type": "bernoulli", "p": 0.6666666666666666 },
    { "name": "X2", "type": "xor", "of": ["X1", "Z"] },
    { "name": "Y2", "type": "bec", "of": "X1", "erasure": 0.6666666666666666 },
    { "name": "Y1", "type": "bsc", "of": "X1", "crossover": 0.25 }
  ],
  "source": ["X1", "X2"],
  "side": ["Y1", "Y2"],
  "receivers": [
    { "distortion": "component-hamming", "component": "X1" },
    { "distortion": "component-hamming", "component": "X2" }
  ]
})";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE_BEGIN("problem_io");

TEST_CASE("dense format parses and validates") {
    SourceInstance inst = parse_problem_text(kDenseText);
    CHECK(inst.name == "dense-demo");
    CHECK(inst.x_axes == std::vector<std::string>{"X"});
    CHECK(inst.receivers() == 2);
    CHECK(inst.joint.cell_count() == 8);
    CHECK(inst.joint.at(std::vector<std::size_t>{0, 0, 0}) == doctest::Approx(0.2));
}

TEST_CASE("factored format reproduces the analytic source") {
    SourceInstance inst = parse_problem_text(kFactoredExample2);
    CHECK(cond_entropy(inst.joint, {"X1"}, {"Y2"}) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(cond_entropy(inst.joint, {"X1"}, {"Y1"}) ==
          doctest::Approx(binary_entropy(0.25)).epsilon(1e-12));
    // matches the programmatic construction cell by cell
    SourceInstance direct = example2_instance();
    REQUIRE(inst.joint.cell_count() == direct.joint.cell_count());
    // align axis orders before comparing
    JointPMF a = inst.joint.marginalize({"X1", "X2", "Y1", "Y2"});
    JointPMF b = direct.joint.marginalize({"X1", "X2", "Y1", "Y2"});
    for (std::size_t i = 0; i < a.cell_count(); ++i)
        CHECK(std::abs(a.probs()[i] - b.probs()[i]) < 1e-14);
}

TEST_CASE("shipped instance files parse") {
    SourceInstance e2 = parse_problem(std::string(TEST_INSTANCES_DIR) + "/example2.json");
    CHECK(cond_entropy(e2.joint, {"X1"}, {"Y2"}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    SourceInstance e1 = parse_problem(std::string(TEST_INSTANCES_DIR) + "/example1.json");
    CHECK(markov_residual(e1.joint, {"X1", "X2"}, {"Y2"}, {"Y1"}) > 0.01);
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(parse_problem_text("not json"), ParseError);
    CHECK_THROWS_AS(parse_problem_text(R"({"name":"x"})"), ParseError);
    // negative probability
    CHECK_THROWS_AS(parse_problem_text(R"({
      "alphabets": [ { "name": "X", "size": 2 }, { "name": "Y1", "size": 1 },
                     { "name": "Y2", "size": 1 } ],
      "joint": [1.2, -0.2],
      "source": ["X"], "side": ["Y1", "Y2"],
      "receivers": [ { "distortion": "hamming" }, { "distortion": "hamming" } ]
    })"), Error);
    // wrong tensor size
    CHECK_THROWS_AS(parse_problem_text(R"({
      "alphabets": [ { "name": "X", "size": 2 }, { "name": "Y1", "size": 1 },
                     { "name": "Y2", "size": 1 } ],
      "joint": [0.5, 0.25, 0.25],
      "source": ["X"], "side": ["Y1", "Y2"],
      "receivers": [ { "distortion": "hamming" }, { "distortion": "hamming" } ]
    })"), Error);
    CHECK_THROWS_AS(parse_problem("/nonexistent/path.json"), Error);
}

TEST_CASE("serialization round trip is exact") {
    SourceInstance inst = parse_problem_text(kFactoredExample2);
    std::string text = serialize_instance(inst);
    SourceInstance back = parse_problem_text(text);
    REQUIRE(back.joint.cell_count() == inst.joint.cell_count());
    double max_diff = 0.0;
    for (std::size_t i = 0; i < inst.joint.cell_count(); ++i)
        max_diff = std::max(max_diff,
                            std::abs(inst.joint.probs()[i] - back.joint.probs()[i]));
    CHECK(max_diff == 0.0);
    CHECK(back.x_axes == inst.x_axes);
    CHECK(back.side_axes == inst.side_axes);
    CHECK(back.distortions.size() == inst.distortions.size());
    CHECK(serialize_instance(back) == text);
}

TEST_CASE("instance hash is stable and discriminating") {
    SourceInstance a = parse_problem_text(kFactoredExample2);
    SourceInstance b = parse_problem_text(kFactoredExample2);
    CHECK(instance_hash(a) == instance_hash(b));
    CHECK(instance_hash(a).size() == 16);
    SourceInstance c = parse_problem_text(kDenseText);
    CHECK(instance_hash(a) != instance_hash(c));
}

TEST_CASE("format_sig gives nine significant digits") {
    CHECK(format_sig(1.0) == "1");
    CHECK(format_sig(0.125) == "0.125");
    CHECK(format_sig(1.0 / 3.0) == "0.333333333");
    CHECK(format_sig(123456789.0) == "123456789");
}

TEST_CASE("emit_csv is byte-identical across runs") {
    std::vector<std::string> header{"d2", "lower", "upper"};
    std::vector<std::vector<double>> rows{{0.0, 1.729574, 1.729574},
                                          {0.1, 1.5, 1.5000001}};
    std::string p1 = "io_test_a.csv", p2 = "io_test_b.csv";
    emit_csv(header, rows, p1);
    emit_csv(header, rows, p2);
    std::string c1 = read_file(p1), c2 = read_file(p2);
    CHECK(!c1.empty());
    CHECK(c1 == c2);
    CHECK(c1.find("d2,lower,upper\r\n") == 0);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("run records serialize to JSON") {
    RunRecord rec;
    rec.command = "solve rd";
    rec.instance_hash = "0123456789abcdef";
    rec.seed = 7;
    rec.options = R"({"d2":0.0})";
    rec.results = R"({"bits":1.729574})";
    rec.version = toolkit_version();
    std::string j = rec.to_json();
    CHECK(j.find("\"solve rd\"") != std::string::npos);
    CHECK(j.find("0123456789abcdef") != std::string::npos);
    CHECK(j.find(toolkit_version()) != std::string::npos);
}

TEST_SUITE_END();
