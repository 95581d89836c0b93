#pragma once

#include "leaky/config.hpp"
#include "leaky/table.hpp"

#include <vector>

namespace leaky {

// Mean per-epoch training losses of the paired arms of one fit cell.
struct LossCurve {
    int n = 0, d = 0;
    double l_value = 0.0;
    std::vector<double> ideal_mean;
    std::vector<double> leaky_mean;
};

struct SweepOutput {
    Table table;
    std::vector<LossCurve> curves;  // fit experiment only
};

// Runs the configured grid: one row per cell, reps seeded repetitions per
// cell, aggregation in deterministic cell/rep order. Results are identical
// for any parallelism degree.
SweepOutput run_sweep(const ExperimentConfig& cfg);

// Expr2 for {chain, ladder, lattice} x {noiseless, leaky} at the
// configured (n, d); entangling layers are bare CZs on the topology edges.
Table run_topology(const ExperimentConfig& cfg);

// Statistic column used for heatmap slices of each experiment kind.
const char* heatmap_column(ExperimentKind kind);

}  // namespace leaky
