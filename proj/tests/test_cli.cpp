#include "leaky/config.hpp"

#include "leaky/emit.hpp"
#include "leaky/expressibility.hpp"
#include "leaky/rng.hpp"
#include "leaky/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace leaky;

namespace {

ExperimentConfig parse_text(const std::string& text,
                            std::optional<RunMode> mode = std::nullopt) {
    std::istringstream in(text);
    return parse_config(in, mode);
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("minimal fit config with defaults") {
        const ExperimentConfig cfg = parse_text(
            "experiment = fit\n"
            "n = 2\n"
            "d = 2\n"
            "L = 0,1.25e-3\n");
        CHECK(cfg.experiment == ExperimentKind::Fit);
        CHECK(cfg.n_values == std::vector<int>{2});
        CHECK(cfg.d_values == std::vector<int>{2});
        CHECK(cfg.l_values == std::vector<double>{0.0, 1.25e-3});
        CHECK(cfg.beta == 0.0);
        CHECK(cfg.phi == 0.0);
        CHECK(cfg.samples == 2000);  // desk default
        CHECK(cfg.reps == 20);
        CHECK(cfg.epochs == 200);
    }
    SUBCASE("paper mode changes scale defaults") {
        const ExperimentConfig cfg = parse_text(
            "experiment = expressibility\nmode = paper\n");
        CHECK(cfg.samples == 10000);
        CHECK(cfg.reps == 20);
        CHECK(cfg.n_values == std::vector<int>{2, 3, 4, 5, 6});
        CHECK(cfg.l_values.size() == 11);
    }
    SUBCASE("mode override wins over the file") {
        const ExperimentConfig cfg =
            parse_text("experiment = expressibility\nmode = paper\n", RunMode::Desk);
        CHECK(cfg.samples == 2000);
    }
    SUBCASE("ranges and comments") {
        const ExperimentConfig cfg = parse_text(
            "# sweep\n"
            "experiment = expressibility\n"
            "n = 2:4   # inclusive\n"
            "d = 2,4,6\n"
            "L = grid\n"
            "seed = 99\n");
        CHECK(cfg.n_values == std::vector<int>{2, 3, 4});
        CHECK(cfg.d_values == std::vector<int>{2, 4, 6});
        CHECK(cfg.l_values.size() == 11);
        CHECK(cfg.seed == 99);
    }
    SUBCASE("rejections carry line numbers") {
        CHECK_THROWS_WITH_AS(parse_text("experiment = fit\nL = 0.3\n"),
                             "config line 2: L values must satisfy 0 <= 4L <= 1", ConfigError);
        CHECK_THROWS_WITH_AS(parse_text("n = 2\n"),
                             "config line 1: missing required key 'experiment'", ConfigError);
        CHECK_THROWS_WITH_AS(parse_text("experiment = fit\nwibble = 3\n"),
                             "config line 2: unknown key 'wibble'", ConfigError);
        CHECK_THROWS_AS(parse_text("experiment = fit\nn = 4:2\n"), ConfigError);
        CHECK_THROWS_AS(parse_text("experiment = fit\nn = 2\nn = 3\n"), ConfigError);
        CHECK_THROWS_AS(parse_text("experiment = iris\nn = 3\n"), ConfigError);
        CHECK_THROWS_AS(parse_text("experiment = fit\nbeta = 1.5\n"), ConfigError);
    }
    SUBCASE("ansatz block round trip") {
        AnsatzSpec spec;
        spec.n = 9;
        spec.d = 5;
        spec.entangler = EntanglerKind::CzTopology;
        spec.topology = Topology::Lattice;
        spec.rows = 3;
        spec.cols = 3;
        const AnsatzSpec back = ansatz_from_config_block(ansatz_config_block(spec));
        CHECK(back.n == spec.n);
        CHECK(back.d == spec.d);
        CHECK(back.entangler == spec.entangler);
        CHECK(back.topology == spec.topology);
        CHECK(back.rows == 3);
        CHECK(back.cols == 3);
    }
}

TEST_CASE("geometric L grid") {
    const std::vector<double> grid = l_grid();
    REQUIRE(grid.size() == 11);
    CHECK(grid.front() == 1.25e-4);
    CHECK(grid.back() == 1.25e-2);
    // Index 4 reproduces the reported L = 0.000789 cell.
    CHECK(grid[4] == doctest::Approx(1.25e-4 * std::pow(10.0, 0.8)).epsilon(1e-12));
    CHECK(grid[4] == doctest::Approx(7.89e-4).epsilon(1e-3));
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(grid[i] / grid[i - 1] == doctest::Approx(std::pow(10.0, 0.2)).epsilon(1e-12));
    CHECK_THROWS_AS(l_grid(1e-2, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(l_grid(0.0, 1e-3), std::invalid_argument);
}

TEST_CASE("sweep execution") {
    const std::string one_cell =
        "experiment = expressibility\n"
        "n = 2\n"
        "d = 2\n"
        "L = 1.25e-3\n"
        "samples = 100\n"
        "reps = 2\n"
        "seed = 777\n"
        "jobs = 1\n";

    SUBCASE("a 1-cell sweep equals the direct module calls") {
        const ExperimentConfig cfg = parse_text(one_cell);
        const SweepOutput out = run_sweep(cfg);
        REQUIRE(out.table.rows.size() == 1);

        AnsatzSpec spec = cfg.ansatz(2, 2);
        std::vector<double> diffs;
        for (int r = 0; r < 2; ++r) {
            const std::uint64_t seed = cell_seed(777, 2, 2, 1.25e-3, r);
            diffs.push_back(expr2_once(spec, 0.0, 0.0, 100, seed) -
                            expr2_once(spec, 1.25e-3, 0.0, 100, seed));
        }
        const Estimate direct = aggregate(diffs);
        const int col = column_index(out.table, "diff_mean");
        CHECK(numeric_at(out.table, 0, col) == direct.mean);
    }
    SUBCASE("rerun with the same seed is byte-identical; jobs do not matter") {
        const std::string grid_cfg =
            "experiment = expressibility\n"
            "n = 2:3\n"
            "d = 1:2\n"
            "L = 0,1.25e-3\n"
            "samples = 60\n"
            "reps = 2\n"
            "seed = 4242\n";
        ExperimentConfig cfg = parse_text(grid_cfg);
        cfg.jobs = 1;
        const std::string csv1 = to_csv(run_sweep(cfg).table);
        cfg.jobs = 8;
        const std::string csv8 = to_csv(run_sweep(cfg).table);
        CHECK(csv1 == csv8);
        CHECK(csv1 == to_csv(run_sweep(cfg).table));
    }
    SUBCASE("fit sweep emits ratio rows and loss curves") {
        const ExperimentConfig cfg = parse_text(
            "experiment = fit\n"
            "n = 2\n"
            "d = 1\n"
            "L = 1.25e-3\n"
            "reps = 2\n"
            "epochs = 10\n"
            "seed = 5\n"
            "jobs = 2\n");
        const SweepOutput out = run_sweep(cfg);
        REQUIRE(out.table.rows.size() == 1);
        REQUIRE(out.curves.size() == 1);
        CHECK(out.curves[0].ideal_mean.size() == 10);
        const int col = column_index(out.table, "ratio_mean");
        CHECK(std::isfinite(numeric_at(out.table, 0, col)));
    }
    SUBCASE("topology smoke run") {
        const ExperimentConfig cfg = parse_text(
            "experiment = topology\n"
            "d = 1\n"
            "samples = 50\n"
            "reps = 1\n"
            "seed = 12\n"
            "jobs = 8\n");
        const Table table = run_topology(cfg);
        REQUIRE(table.rows.size() == 6);
        const int col_v = column_index(table, "expr2_mean");
        const int col_t = column_index(table, "topology");
        for (std::size_t r = 0; r < 6; ++r) {
            CHECK(numeric_at(table, r, col_v) <= 0.0);
            const std::string topo = std::get<std::string>(table.rows[r][col_t]);
            CHECK((topo == "chain" || topo == "ladder" || topo == "lattice"));
        }
    }
}

TEST_CASE("CSV emission") {
    SUBCASE("empty table emits header only") {
        Table t;
        t.columns = {"a", "b"};
        CHECK(to_csv(t) == "a,b\n");
    }
    SUBCASE("round trip is exact") {
        Table t;
        t.columns = {"n", "value", "label"};
        t.rows.push_back({std::int64_t{3}, 1.0 / 3.0, std::string("x")});
        t.rows.push_back({std::int64_t{-1}, 7.25e-4, std::string("y")});
        const Table back = parse_csv(to_csv(t));
        REQUIRE(back.rows.size() == 2);
        CHECK(std::get<std::int64_t>(back.rows[0][0]) == 3);
        CHECK(std::get<double>(back.rows[0][1]) == 1.0 / 3.0);
        CHECK(std::get<std::string>(back.rows[1][2]) == "y");
        CHECK(std::get<double>(back.rows[1][1]) == 7.25e-4);
    }
    SUBCASE("column sets are fixed per experiment") {
        const ExperimentConfig e = parse_text(
            "experiment = expressibility\nn = 2\nd = 1\nL = 0\nsamples = 30\nreps = 1\njobs=1\n");
        CHECK(run_sweep(e).table.columns.size() == 13);
        const ExperimentConfig f = parse_text(
            "experiment = fit\nn = 2\nd = 1\nL = 0\nreps = 1\nepochs = 2\njobs=1\n");
        CHECK(run_sweep(f).table.columns.size() == 10);
    }
}

TEST_CASE("SVG rendering") {
    Table t;
    t.columns = {"n", "d", "L", "diff_mean"};
    const std::vector<double> ls{1.25e-4, 1.25e-3};
    int v = 1;
    for (int d : {1, 2})
        for (double l : ls) {
            t.rows.push_back({std::int64_t{2}, std::int64_t{d}, l, 0.001 * v});
            ++v;
        }

    SUBCASE("monotone data renders a monotone color ramp") {
        const std::string svg = heatmap_svg(t, 2, "diff_mean");
        CHECK(svg.find("<svg") == 0);
        // Cell fills appear in row order; collect the red channel of each.
        std::vector<int> reds;
        std::size_t pos = 0;
        while ((pos = svg.find("fill=\"rgb(", pos)) != std::string::npos) {
            pos += 10;
            reds.push_back(std::stoi(svg.substr(pos, svg.find(',', pos) - pos)));
        }
        REQUIRE(reds.size() >= 4);
        // Fills appear in d = 1 row order then d = 2: values 1,2 then 3,4;
        // the ramp darkens (red falls) as the value grows.
        CHECK(reds[0] > reds[1]);
        CHECK(reds[2] > reds[3]);
        CHECK(reds[0] > reds[2]);
        CHECK(reds[1] > reds[3]);
    }
    SUBCASE("rendering is deterministic") {
        CHECK(fnv1a(heatmap_svg(t, 2, "diff_mean").data(), heatmap_svg(t, 2, "diff_mean").size()) ==
              fnv1a(heatmap_svg(t, 2, "diff_mean").data(), heatmap_svg(t, 2, "diff_mean").size()));
    }
    SUBCASE("1x1 table renders a single annotated cell") {
        Table small;
        small.columns = {"n", "d", "L", "diff_mean"};
        small.rows.push_back({std::int64_t{3}, std::int64_t{1}, 1e-3, 0.5});
        const std::string svg = heatmap_svg(small, 3, "diff_mean");
        CHECK(svg.find("0.5") != std::string::npos);
        CHECK(svg.find("d=1") != std::string::npos);
    }
    SUBCASE("missing slice rejected") {
        CHECK_THROWS_AS(heatmap_svg(t, 7, "diff_mean"), std::invalid_argument);
    }
    SUBCASE("loss curve polyline") {
        LossCurve curve;
        curve.n = 2;
        curve.d = 2;
        curve.l_value = 1.25e-3;
        for (int e = 0; e < 50; ++e) {
            curve.ideal_mean.push_back(std::pow(10.0, -0.1 * e));
            curve.leaky_mean.push_back(std::pow(10.0, -0.05 * e));
        }
        const std::string svg = loss_curve_svg(curve);
        CHECK(svg.find("<polyline") != std::string::npos);
        CHECK(svg.find("log10(mean loss)") != std::string::npos);
        const Table curves = loss_curves_table({curve});
        CHECK(curves.rows.size() == 50);
    }
}
