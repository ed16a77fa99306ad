#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    RunResult r;
    r.code = condtab::cli::run(args, in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string data_path(const std::string& name) {
    return std::string(CONDTAB_TEST_DATA_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE_MESSAGE(f.good(), "missing file: " << path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("solve reports the equation, counts, solutions and margins") {
    const RunResult r = run_cli({"solve", data_path("spec_2x2x2_n50.json")});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["command"] == "solve");
    CHECK(doc["equation"]["coefficients"] == json::array({5, 5}));
    CHECK(doc["equation"]["rhs"] == 50);
    CHECK(doc["margin_count"] == "9");
    CHECK(doc["feasible"] == true);
    REQUIRE(doc["solutions"].size() == 9);
    CHECK(doc["solutions"][0] == json::array({1, 9}));
    CHECK(doc["margins"][4] == json::parse("[[15,5],[10,20]]"));
}

TEST_CASE("solve reads from stdin") {
    const std::string spec = read_file(data_path("spec_2x2x3_n240.json"));
    const RunResult r = run_cli({"solve", "-"}, spec);
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["margin_count"] == "2");
    CHECK(doc["equation"]["coefficients"] == json::array({7, 17}));
}

TEST_CASE("count exact and approximate") {
    const RunResult exact = run_cli({"count", data_path("spec_2x3x2_n240.json")});
    REQUIRE(exact.code == 0);
    const json e = json::parse(exact.out);
    CHECK(e["mode"] == "exact");
    CHECK(e["margin_count"] == "1141");
    CHECK(e["table_count"] == "1187848498271");

    const RunResult approx =
        run_cli({"count", "--approx", data_path("spec_2x3x2_n240.json")});
    REQUIRE(approx.code == 0);
    const json a = json::parse(approx.out);
    CHECK(a["margin_count_approx"] == "1200");
    CHECK(a["table_count_approx"].get<double>() ==
          doctest::Approx(1.188479935e12).epsilon(1e-6));

    const RunResult split =
        run_cli({"count", "--per-margin", data_path("spec_2x2x3_n240.json")});
    const json s = json::parse(split.out);
    CHECK(s["table_count"] == "6130182419416");
    REQUIRE(s["per_margin"].size() == 2);
    CHECK(s["per_margin"][0]["count"] == "4179685045536");
    CHECK(s["per_margin"][1]["count"] == "1950497373880");
}

TEST_CASE("count honors the positivity flag") {
    const RunResult nn =
        run_cli({"count", "--positivity", "nonneg", data_path("spec_2x2x2_n50.json")});
    REQUIRE(nn.code == 0);
    CHECK(json::parse(nn.out)["table_count"] == "129778");
}

TEST_CASE("bounds reproduce the bracket values") {
    const RunResult r = run_cli({"bounds", data_path("spec_2x2x2_n50.json")});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["relaxation"]["upper"][0][0][0] == "147/5");
    CHECK(doc["relaxation"]["upper"][1][1][1] == "196/5");
    CHECK(doc["margin_bounds"]["lower"] == json::parse(R"([["3","1"],["2","4"]])"));
    CHECK(doc["margin_bounds"]["upper"] == json::parse(R"([["27","9"],["18","36"]])"));
    CHECK(doc["decomposition"]["upper"][0][0][0] == 27);
    CHECK(doc["decomposition"]["upper"][1][1][0] == 36);
    REQUIRE(doc["per_margin"].size() == 9);
    CHECK(doc["per_margin"][4]["upper"][0][0][0] == 15);
}

TEST_CASE("moves and verify") {
    const RunResult moves = run_cli({"moves", data_path("spec_2x2x2_n50.json")});
    REQUIRE(moves.code == 0);
    const json m = json::parse(moves.out);
    CHECK(m["counts"]["total"] == 5);
    CHECK(m["counts"]["changes_margin"] == 1);
    CHECK(m["conjectured_size"] == 5);
    const json delta = m["moves"][0]["delta"];
    const bool sign_match = delta == json::parse("[3,2,-1,-4,0,0,0,0]") ||
                            delta == json::parse("[-3,-2,1,4,0,0,0,0]");
    CHECK(sign_match);

    const RunResult verify = run_cli({"verify", data_path("spec_2x2x2_n50.json")});
    REQUIRE(verify.code == 0);
    const json v = json::parse(verify.out);
    CHECK(v["fiber_size"] == "128676");
    CHECK(v["connected"] == true);

    const RunResult basic =
        run_cli({"verify", "--moves", "basic", data_path("spec_2x2x2_n50.json")});
    CHECK(json::parse(basic.out)["component_count"] == 9);
}

TEST_CASE("enumerate streams tables as JSON lines") {
    // 2x3x2 instance at N = 12: margins (2,3,4)->12 strict has one solution
    const std::string spec = R"({"I":2,"J":3,"K":2,"N":12,
        "conditional":[["1/2","1/3","1/4"],["1/2","2/3","3/4"]]})";
    const RunResult r = run_cli({"enumerate", "-"}, spec);
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::size_t n = 0;
    json first;
    while (std::getline(lines, line)) {
        const json t = json::parse(line);
        CHECK(t.is_array());
        CHECK(t.size() == 12);
        if (n == 0) first = t;
        ++n;
    }
    // unique margin (1,2,1; 1,4,3): product of (s+1) = 2*3*2*2*5*4
    CHECK(n == 480);
    // first table has everything in the last C level per ascending compositions
    CHECK(first[0] == 0);

    const RunResult capped = run_cli({"enumerate", "--cap", "10", "-"}, spec);
    CHECK(capped.code == 3);
}

TEST_CASE("dag workflow") {
    const RunResult r24 = run_cli({"dag", data_path("evidence_star_n24.json")});
    REQUIRE(r24.code == 0);
    const json d = json::parse(r24.out);
    CHECK(d["wermuth"] == true);
    CHECK(d["edges"] == json::parse(R"([["A","B"],["A","C"]])"));
    CHECK(d["reduction"]["reducible"] == true);
    CHECK(d["reduction"]["unique_margin"] == json::array({6, 6, 12}));
    CHECK(d["reduction"]["margins"] == json::parse(R"([["A","B"],["A","C"]])"));
    CHECK(d["comparison"]["fiber_given_evidence"] == "36");
    CHECK(d["comparison"]["fiber_given_margins"] == "36");
    CHECK(d["comparison"]["equal"] == true);

    const RunResult r240 = run_cli({"dag", data_path("evidence_star_n240.json")});
    REQUIRE(r240.code == 0);
    const json d240 = json::parse(r240.out);
    CHECK(d240["reduction"]["reducible"] == true); // margin pinned by the marginal piece
    CHECK(d240["comparison"]["common_margin_count"] == "361");
    CHECK(d240["comparison"]["fiber_given_evidence"] == "3066315");
    CHECK(d240["comparison"]["fiber_given_margins"] == "13671");
    CHECK(d240["comparison"]["equal"] == false);

    const RunResult cyclic = run_cli({"dag", data_path("evidence_cycle.json")});
    CHECK(cyclic.code == 2);
}

TEST_CASE("exit codes") {
    CHECK(run_cli({"solve", "/nonexistent/file.json"}).code == 2);
    CHECK(run_cli({"solve", "-"}, "this is not json").code == 2);
    CHECK(run_cli({"solve", "-"}, R"({"I":2,"J":2,"K":2,"N":50,
        "conditional":[["3/5","1/5"],["3/5","4/5"]]})").code == 2); // column sum != 1
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({"frobnicate"}).code == 2);
}

TEST_CASE("output is deterministic") {
    const RunResult a = run_cli({"count", data_path("spec_2x3x2_n24.json")});
    const RunResult b = run_cli({"count", data_path("spec_2x3x2_n24.json")});
    CHECK(a.out == b.out);
    const RunResult p1 = run_cli({"count", "--jobs", "3", data_path("spec_2x3x2_n240.json")});
    const RunResult p2 = run_cli({"count", "--jobs", "1", data_path("spec_2x3x2_n240.json")});
    CHECK(p1.out == p2.out);
}

TEST_CASE("golden reports") {
    const auto golden = [](const std::string& name) {
        return read_file(std::string(CONDTAB_TEST_GOLDEN_DIR) + "/" + name);
    };
    CHECK(run_cli({"solve", data_path("spec_2x2x2_n50.json")}).out == golden("solve_2x2x2_n50.json"));
    CHECK(run_cli({"moves", data_path("spec_2x2x2_n50.json")}).out == golden("moves_2x2x2_n50.json"));
    CHECK(run_cli({"bounds", data_path("spec_2x2x2_n50.json")}).out ==
          golden("bounds_2x2x2_n50.json"));
    CHECK(run_cli({"dag", data_path("evidence_star_n240.json")}).out ==
          golden("dag_star_n240.json"));
}
