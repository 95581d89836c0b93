#include "leaky/sweep.hpp"

#include "leaky/expressibility.hpp"
#include "leaky/learn.hpp"
#include "leaky/parallel.hpp"
#include "leaky/rng.hpp"

#include <stdexcept>
#include <thread>

namespace leaky {

namespace {

int effective_jobs(const ExperimentConfig& cfg) {
    if (cfg.jobs > 0) return cfg.jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct Cell {
    int n = 0, d = 0;
    double l_value = 0.0;
};

std::vector<Cell> grid_cells(const ExperimentConfig& cfg) {
    std::vector<Cell> cells;
    for (int n : cfg.n_values)
        for (int d : cfg.d_values)
            for (double l : cfg.l_values) cells.push_back({n, d, l});
    return cells;
}

std::int64_t i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

// Paired Expr2 difference sweep: every (cell, rep) job evaluates the
// noiseless and the leaky arm with the same theta and uniform-sample seeds.
SweepOutput sweep_expressibility(const ExperimentConfig& cfg) {
    const std::vector<Cell> cells = grid_cells(cfg);
    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    struct Pair {
        double ideal = 0.0, leaky = 0.0;
    };
    std::vector<Pair> results(cells.size() * reps);
    parallel_for(results.size(), effective_jobs(cfg), [&](std::size_t idx) {
        const Cell& cell = cells[idx / reps];
        const int rep = static_cast<int>(idx % reps);
        const std::uint64_t seed = cell_seed(cfg.seed, cell.n, cell.d, cell.l_value, rep);
        const AnsatzSpec spec = cfg.ansatz(cell.n, cell.d);
        results[idx].ideal = expr2_once(spec, 0.0, cfg.beta, cfg.samples, seed);
        results[idx].leaky = expr2_once(spec, cell.l_value, cfg.beta, cfg.samples, seed);
    });

    SweepOutput out;
    out.table.columns = {"n",          "d",        "L",          "beta",     "samples",
                         "reps",       "cell_seed", "ideal_mean", "ideal_sem", "leaky_mean",
                         "leaky_sem",  "diff_mean", "diff_sem"};
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::vector<double> ideal(reps), leaky(reps), diff(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            ideal[r] = results[c * reps + r].ideal;
            leaky[r] = results[c * reps + r].leaky;
            diff[r] = ideal[r] - leaky[r];
        }
        const Estimate ei = aggregate(ideal), el = aggregate(leaky), ed = aggregate(diff);
        const Cell& cell = cells[c];
        out.table.rows.push_back({std::int64_t{cell.n}, std::int64_t{cell.d}, cell.l_value,
                                  cfg.beta, static_cast<std::int64_t>(cfg.samples),
                                  std::int64_t{cfg.reps},
                                  i64(cell_seed(cfg.seed, cell.n, cell.d, cell.l_value, 0)),
                                  ei.mean, ei.sem, el.mean, el.sem, ed.mean, ed.sem});
    }
    return out;
}

SweepOutput sweep_fit(const ExperimentConfig& cfg) {
    const std::vector<Cell> cells = grid_cells(cfg);
    SweepOutput out;
    out.table.columns = {"n",    "d",         "L",          "beta",         "epochs",
                         "reps", "cell_seed", "ratio_mean", "ratio_sem",    "floor_events"};
    const int jobs = effective_jobs(cfg);
    for (const Cell& cell : cells) {
        const RatioStats stats = loss_ratio_log10(cell.n, cell.d, cell.l_value, cfg.beta,
                                                  cfg.epochs, cfg.reps, cfg.seed, jobs);
        out.table.rows.push_back({std::int64_t{cell.n}, std::int64_t{cell.d}, cell.l_value,
                                  cfg.beta, std::int64_t{cfg.epochs}, std::int64_t{cfg.reps},
                                  i64(cell_seed(cfg.seed, cell.n, cell.d, cell.l_value, 0)),
                                  stats.mean, stats.sem, std::int64_t{stats.floor_events}});
        LossCurve curve;
        curve.n = cell.n;
        curve.d = cell.d;
        curve.l_value = cell.l_value;
        curve.ideal_mean = stats.ideal_trace_mean;
        curve.leaky_mean = stats.leaky_trace_mean;
        out.curves.push_back(std::move(curve));
    }
    return out;
}

SweepOutput sweep_iris(const ExperimentConfig& cfg) {
    const IrisDataset data = load_iris_binary(cfg.dataset);
    const std::vector<Cell> cells = grid_cells(cfg);
    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    struct Pair {
        double ideal = 0.0, leaky = 0.0;
    };
    std::vector<Pair> results(cells.size() * reps);
    parallel_for(results.size(), effective_jobs(cfg), [&](std::size_t idx) {
        const Cell& cell = cells[idx / reps];
        const int rep = static_cast<int>(idx % reps);
        const std::uint64_t seed = cell_seed(cfg.seed, cell.n, cell.d, cell.l_value, rep);
        ClassificationTask task;
        task.data = &data;
        task.d = cell.d;
        task.beta = cfg.beta;
        task.epochs = cfg.epochs;
        task.leak = 0.0;
        results[idx].ideal = iris_cv(task, seed).score;
        task.leak = cell.l_value;
        results[idx].leaky = iris_cv(task, seed).score;
    });

    SweepOutput out;
    out.table.columns = {"n",         "d",         "L",          "beta",      "epochs",
                         "reps",      "cell_seed", "ideal_mean", "ideal_sem", "leaky_mean",
                         "leaky_sem", "diff_mean", "diff_sem"};
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::vector<double> ideal(reps), leaky(reps), diff(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            ideal[r] = results[c * reps + r].ideal;
            leaky[r] = results[c * reps + r].leaky;
            diff[r] = ideal[r] - leaky[r];
        }
        const Estimate ei = aggregate(ideal), el = aggregate(leaky), ed = aggregate(diff);
        const Cell& cell = cells[c];
        out.table.rows.push_back({std::int64_t{cell.n}, std::int64_t{cell.d}, cell.l_value,
                                  cfg.beta, std::int64_t{cfg.epochs}, std::int64_t{cfg.reps},
                                  i64(cell_seed(cfg.seed, cell.n, cell.d, cell.l_value, 0)),
                                  ei.mean, ei.sem, el.mean, el.sem, ed.mean, ed.sem});
    }
    return out;
}

}  // namespace

SweepOutput run_sweep(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case ExperimentKind::Expressibility:
            return sweep_expressibility(cfg);
        case ExperimentKind::Fit:
            return sweep_fit(cfg);
        case ExperimentKind::Iris:
            return sweep_iris(cfg);
        case ExperimentKind::Topology:
            return SweepOutput{run_topology(cfg), {}};
    }
    throw std::logic_error("unknown experiment kind");
}

Table run_topology(const ExperimentConfig& cfg) {
    const int n = cfg.n_values.at(0);
    const int d = cfg.d_values.at(0);
    const double leaky_l = cfg.l_values.at(0);
    if (n != 9) throw std::invalid_argument("topology comparison runs on 9 qubits");

    struct Arm {
        Topology topology;
        double l_value;
    };
    const std::vector<Arm> arms = {
        {Topology::Chain, 0.0},   {Topology::Chain, leaky_l},   {Topology::Ladder, 0.0},
        {Topology::Ladder, leaky_l}, {Topology::Lattice, 0.0}, {Topology::Lattice, leaky_l},
    };

    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    std::vector<double> values(arms.size() * reps);
    parallel_for(values.size(), effective_jobs(cfg), [&](std::size_t idx) {
        const Arm& arm = arms[idx / reps];
        const int rep = static_cast<int>(idx % reps);
        AnsatzSpec spec;
        spec.n = n;
        spec.d = d;
        spec.entangler = EntanglerKind::CzTopology;
        spec.topology = arm.topology;
        if (arm.topology == Topology::Lattice) {
            spec.rows = 3;
            spec.cols = 3;
        }
        // One seed per repetition, shared by all six arms: differences
        // between arms then come only from the topology and from L.
        const std::uint64_t seed = cell_seed(cfg.seed, n, d, leaky_l, rep);
        values[idx] = expr2_once(spec, arm.l_value, cfg.beta, cfg.samples, seed);
    });

    Table table;
    table.columns = {"topology", "n",          "d",         "L",    "beta", "samples",
                     "reps",     "expr2_mean", "expr2_sem", "cell_seed"};
    for (std::size_t a = 0; a < arms.size(); ++a) {
        std::vector<double> reps_values(values.begin() + a * reps,
                                        values.begin() + (a + 1) * reps);
        const Estimate e = aggregate(reps_values);
        table.rows.push_back(
            {std::string(to_string(arms[a].topology)), std::int64_t{n}, std::int64_t{d},
             arms[a].l_value, cfg.beta, static_cast<std::int64_t>(cfg.samples),
             std::int64_t{cfg.reps}, e.mean, e.sem, i64(cell_seed(cfg.seed, n, d, leaky_l, 0))});
    }
    return table;
}

const char* heatmap_column(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Expressibility:
            return "diff_mean";
        case ExperimentKind::Fit:
            return "ratio_mean";
        case ExperimentKind::Iris:
            return "diff_mean";
        case ExperimentKind::Topology:
            return "expr2_mean";
    }
    return "diff_mean";
}

}  // namespace leaky
