#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "fraceuler/config.hpp"
#include "fraceuler/experiments.hpp"
#include "fraceuler/mc.hpp"
#include "fraceuler/svg.hpp"

using namespace fraceuler;

TEST_CASE("config parsing fills documented defaults", "[config]") {
    const ExperimentConfig cfg =
        parse_config("experiment = constants\nh = 0.601\nt_horizon = 1\n");
    CHECK(cfg.experiment == "constants");
    CHECK(cfg.h == 0.601);
    CHECK(cfg.p_truncation == 512);
    CHECK(cfg.tolerance == 1e-4);
    CHECK(cfg.mc_paths == 1000);
    CHECK(cfg.system == "geometric");
    CHECK(cfg.sub_factor == 64);
    CHECK(cfg.master_seed == 12345);
}

TEST_CASE("config errors carry line numbers and invariant names", "[config]") {
    CHECK_THROWS_WITH(parse_config("experiment = constants\nh = 0.4\n"),
                      Catch::Matchers::ContainsSubstring("h out of (0.5,1)"));
    CHECK_THROWS_WITH(parse_config("experiment = constants\nh = 0.6\nh = 0.7\n"),
                      Catch::Matchers::ContainsSubstring("duplicate key"));
    CHECK_THROWS_WITH(parse_config("experiment = constants\nh = 0.6\nbogus = 1\n"),
                      Catch::Matchers::ContainsSubstring("unknown key"));
    CHECK_THROWS_WITH(parse_config("experiment = constants\nh 0.6\n"),
                      Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_AS(parse_config("experiment = wat\nh = 0.6\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("h = 0.6\n"), ConfigError);
    CHECK_THROWS_AS(
        parse_config("experiment = strong_rate\nh = 0.7\nns = 16,32,48\n"), ConfigError);
    // comments and blank lines are fine
    CHECK_NOTHROW(parse_config("# comment\n\nexperiment = constants\nh = 0.6\n"));
}

TEST_CASE("csv emission format and round-trip", "[report]") {
    ResultTable table;
    table.schema = {"n", "value", "tag"};
    table.metadata.config_hash = "deadbeef";
    table.metadata.seed = 7;
    table.add_row({Cell::of_int(16), Cell::number(0.1234567890123456789), Cell::of_text("a")});
    table.add_row({Cell::of_int(32), Cell::number(-1.0 / 3.0), Cell::of_text("b")});

    const std::string csv = to_csv_string(table);
    CHECK(csv.find("# config_hash=deadbeef\n") != std::string::npos);
    CHECK(csv.find("n,value,tag\n") != std::string::npos);
    CHECK(csv.back() == '\n');
    CHECK(csv.find('\r') == std::string::npos);

    const ParsedCsv parsed = parse_csv(csv);
    REQUIRE(parsed.schema == table.schema);
    REQUIRE(parsed.rows.size() == 2);
    // doubles round-trip exactly through 17 significant digits
    CHECK(std::strtod(parsed.rows[1][1].c_str(), nullptr) == -1.0 / 3.0);
    CHECK(parsed.rows[0][2] == "a");

    ResultTable empty;
    empty.schema = {"x"};
    CHECK_THROWS_AS(to_csv_string(empty), std::invalid_argument);
    CHECK_THROWS_AS(table.add_row({Cell::of_int(1)}), std::invalid_argument);
}

TEST_CASE("svg plot renders axes and polylines", "[report]") {
    ResultTable table;
    table.schema = {"n", "err"};
    for (int n : {16, 32, 64, 128})
        table.add_row({Cell::of_int(n), Cell::number(std::pow(n, -0.9))});
    PlotSpec plot;
    plot.x_column = "n";
    plot.y_columns = {"err"};
    plot.log_x = plot.log_y = true;
    plot.title = "decay";
    const std::string file = "svg_test_plot.svg";
    emit_svg(table, plot, file);
    std::ifstream in(file);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content.find("<svg") != std::string::npos);
    CHECK(content.find("polyline") != std::string::npos);
    CHECK(content.find("decay") != std::string::npos);
    std::remove(file.c_str());

    ResultTable empty;
    empty.schema = {"n", "err"};
    CHECK_THROWS_AS(emit_svg(empty, plot, file), std::invalid_argument);
    CHECK_THROWS_AS(emit_svg(table, PlotSpec{"missing", {"err"}, false, false, ""}, file),
                    std::invalid_argument);
}

TEST_CASE("experiment output is byte-identical across reruns and thread counts",
          "[experiments]") {
    ExperimentConfig cfg;
    cfg.experiment = "weighted_sums";
    cfg.h = 0.7;
    cfg.ns = {64};
    cfg.sub_factor = 8;
    cfg.mc_paths = 200;
    cfg.master_seed = 31415;
    validate_config(cfg);

    set_thread_count(1);
    const std::string csv1 = to_csv_string(run_experiment(cfg).table);
    set_thread_count(3);
    const std::string csv2 = to_csv_string(run_experiment(cfg).table);
    set_thread_count(0);
    CHECK(csv1 == csv2);

    // config hash ignores output_dir and threads
    ExperimentConfig moved = cfg;
    moved.output_dir = "/tmp/elsewhere";
    moved.threads = 7;
    CHECK(moved.hash() == cfg.hash());
    ExperimentConfig reseeded = cfg;
    reseeded.master_seed = 1;
    CHECK(reseeded.hash() != cfg.hash());
}

TEST_CASE("thread count resolution prefers flag over environment", "[config]") {
    setenv("FRACEULER_THREADS", "5", 1);
    CHECK(resolve_thread_count(0) == 5);
    CHECK(resolve_thread_count(2) == 2);
    unsetenv("FRACEULER_THREADS");
    CHECK(resolve_thread_count(0) == 0);
}

TEST_CASE("constants sweep reproduces the q/r shape", "[experiments]") {
    ExperimentConfig cfg;
    cfg.experiment = "constants";
    cfg.h_list = {0.51, 0.61, 0.74};
    cfg.h = cfg.h_list.front();
    cfg.p_truncation = 128;
    cfg.tolerance = 1e-2;
    validate_config(cfg);
    const ExperimentOutcome outcome = run_constants(cfg);
    REQUIRE(outcome.table.rows.size() == 3);
    const double q0 = outcome.table.rows[0][5].num;
    const double q1 = outcome.table.rows[1][5].num;
    const double q2 = outcome.table.rows[2][5].num;
    const double r0 = outcome.table.rows[0][6].num;
    const double r1 = outcome.table.rows[1][6].num;
    const double r2 = outcome.table.rows[2][6].num;
    CHECK(q1 < q0);  // q dips in the middle of the regime
    CHECK(q0 < q2);  // and grows toward H = 3/4
    CHECK(r0 < r1);  // r increases throughout
    CHECK(r1 < r2);
    CHECK(outcome.plot.has_value());
}

TEST_CASE("constants experiment emits the documented schema", "[experiments]") {
    ExperimentConfig cfg;
    cfg.experiment = "constants";
    cfg.h = 0.62;
    cfg.p_truncation = 128;
    cfg.tolerance = 1e-3;
    validate_config(cfg);
    const ExperimentOutcome outcome = run_constants(cfg);
    CHECK(outcome.table.schema ==
          std::vector<std::string>{"H", "T", "P", "Q", "R", "q", "r", "tail_estimate", "mode"});
    REQUIRE(outcome.table.rows.size() == 1);
    CHECK(outcome.table.rows[0][8].text == "SeriesSum");
    CHECK(outcome.tolerance_ok);
}
