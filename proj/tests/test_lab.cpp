#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "freelab/errors.hpp"
#include "freelab/lab/config.hpp"
#include "freelab/lab/emit.hpp"
#include "freelab/lab/experiments.hpp"

using namespace freelab;
using namespace freelab::lab;

namespace {

std::string error_text(std::string_view cfg) {
    try {
        parse_config(cfg);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal chi_scan config gets defaults") {
    const auto cfg = parse_config("experiment = chi_scan\n");
    CHECK(cfg.experiment == ExperimentKind::chi_scan);
    CHECK(cfg.integer("reps") == 20);
    CHECK(cfg.integer("budget") == 30);
    CHECK(cfg.int_list("m") == std::vector<int>{50, 100, 200, 400});
    CHECK(cfg.master_seed == 1);
    CHECK(cfg.format == OutputFormat::csv);
}

TEST_CASE("every experiment parses with defaults only") {
    for (auto kind : all_experiments()) {
        const auto cfg = parse_config("experiment = " + std::string(experiment_name(kind)));
        CHECK(cfg.params.size() == param_schema(kind).size());
        CHECK(experiment_from_name(experiment_name(kind)) == kind);
        CHECK(experiment_columns(kind).size() > 0);
    }
}

TEST_CASE("value syntax") {
    const auto cfg = parse_config(R"(# comment
experiment = witness   # trailing comment
block_sizes = 2..5
n_max = 12
master_seed = 18446744073709551615
format = json
out_path = "results/w.json"
)");
    CHECK(cfg.int_list("block_sizes") == std::vector<int>{2, 3, 4, 5});
    CHECK(cfg.integer("n_max") == 12);
    CHECK(cfg.master_seed == 18446744073709551615ull);
    CHECK(cfg.format == OutputFormat::json);
    CHECK(cfg.out_path == "results/w.json");

    const auto c2 = parse_config("experiment = concentration\nm = 10, 20\nlambdas = [0.5, 2]\nt = 0.3\n");
    CHECK(c2.int_list("m") == std::vector<int>{10, 20});
    CHECK(c2.real_list("lambdas") == std::vector<double>{0.5, 2.0});
    CHECK(c2.real_list("t") == std::vector<double>{0.3});

    const auto c3 = parse_config(R"({"experiment": "moments", "m": [30], "ensemble": "ginibre"})");
    CHECK(c3.text("ensemble") == "ginibre");
    CHECK(c3.int_list("p") == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("misspelled experiment names the field") {
    const auto msg = error_text("experiment = chi_scna\n");
    CHECK(msg.find("experiment") != std::string::npos);
    CHECK(error_text("n = 3\n").find("missing required field 'experiment'") != std::string::npos);
}

TEST_CASE("all errors are reported together") {
    const auto msg = error_text("experiment = chi_scan\nbudget = lots\nreps = 0\nbogus = 1\nstyle = dense\nformat = xml\nnot a line\n");
    CHECK(msg.find("not a line") == std::string::npos);
    CHECK(msg.find("line 7") != std::string::npos);
    const auto msg2 = error_text("experiment = chi_scan\nbudget = lots\nreps = 0\nbogus = 1\nstyle = dense\nformat = xml\n");
    for (const char* field : {"'budget'", "'reps'", "'bogus'", "'style'", "'format'"})
        CHECK_MESSAGE(msg2.find(field) != std::string::npos, field);
    CHECK(error_text("experiment = witness\nn_max = 3\nn_max = 4\n").find("duplicate") != std::string::npos);
    CHECK(error_text("{\"experiment\": ").find("malformed") != std::string::npos);
    CHECK(error_text("experiment = moments\nmaster_seed = -1\n").find("master_seed") != std::string::npos);
    CHECK(error_text("experiment = moments\nm = 1.5\n").find("'m'") != std::string::npos);
}

TEST_CASE("config round trip") {
    const auto cfg = parse_config("experiment = witness\nn_max = 40\nblock_sizes = 1..50\nmaster_seed = 99\n"
                                  "out_path = w.csv\n");
    const auto again = parse_config(serialize_config(cfg));
    CHECK(config_to_json(again) == config_to_json(cfg));
    CHECK(again.int_list("block_sizes") == cfg.int_list("block_sizes"));
    CHECK(serialize_config(again) == serialize_config(cfg));
    for (auto kind : all_experiments()) {
        const auto c = parse_config("experiment = " + std::string(experiment_name(kind)));
        CHECK(config_to_json(parse_config(serialize_config(c))) == config_to_json(c));
    }
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(-2.5e-300) == "-2.5e-300");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_number(x)) == x);
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("csv emission") {
    ExperimentResult res;
    res.columns = {"a", "b"};
    CHECK(to_csv(res) == "a,b\n");
    res.rows.push_back({std::int64_t{3}, std::string("x,\"y\"")});
    res.rows.push_back({true, 0.25});
    CHECK(to_csv(res) == "a,b\n3,\"x,\"\"y\"\"\"\ntrue,0.25\n");
}

TEST_CASE("coefficients appear as paired re/im columns") {
    MatrixPoly p(1, 2, 1);
    ComplexMatrix a(2, 2);
    a << Complex(1, 2), 0, 0, Complex(-3, 0.5);
    p.add_term({1}, a);
    const auto table = coefficient_table(p);
    CHECK(table.columns == std::vector<std::string>{"word", "row", "col", "re", "im"});
    CHECK(table.rows.size() == 4);
    CHECK(to_csv(table) == "word,row,col,re,im\n1,0,0,1,2\n1,0,1,0,0\n1,1,0,0,0\n1,1,1,-3,0.5\n");
}

TEST_CASE("moments experiment with a trivial grid") {
    const auto cfg = parse_config("experiment = moments\nm = 50\np = 1\n");
    const auto res = run_experiment(cfg);
    REQUIRE(res.rows.size() == 1);
    CHECK(res.columns == experiment_columns(ExperimentKind::moments));
    CHECK(std::get<double>(res.rows[0][5]) == 1.0);
    CHECK(to_csv(res) == to_csv(run_experiment(cfg)));
}

TEST_CASE("json envelope") {
    const auto cfg = parse_config("experiment = witness\nn_max = 5\nblock_sizes = 1..4\nmaster_seed = 7\n");
    const auto res = run_experiment(cfg);
    const auto j = to_result_json(res);
    CHECK(j.at("experiment") == "witness");
    CHECK(j.at("master_seed") == 7);
    CHECK(j.at("params").at("n_max") == 5);
    CHECK(j.at("tool_version") == std::string(kToolVersion));
    CHECK(j.at("rows").size() == 5);
    CHECK(j.at("rows")[0].at("n") == 1);
    CHECK(j.at("wall_time").get<double>() >= 0.0);
}

TEST_CASE("emit_results writes files and reports io errors") {
    const auto res = run_experiment(parse_config("experiment = moments\nm = 20\np = 1,2\n"));
    const std::string path = "test_lab_out.csv";
    emit_results(res, OutputFormat::csv, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == to_csv(res));
    std::remove(path.c_str());
    CHECK_THROWS_AS(emit_results(res, OutputFormat::csv, "/nonexistent-dir/x.csv"), IoError);
}

TEST_CASE("error kinds map to distinct exit codes") {
    CHECK(ConfigError("x").exit_code() == 2);
    CHECK(InvalidInput("x").exit_code() == 2);
    CHECK(BudgetExceeded("x").exit_code() == 3);
    CHECK(NumericFailure("x").exit_code() == 4);
    CHECK(IoError("x").exit_code() == 5);
}
