#pragma once

#include "leaky/ansatz.hpp"
#include "leaky/simulator.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

// Training harnesses: distribution fitting under the fidelity loss and Iris
// binary classification under an MSE cost, both trained with Adam on
// central finite-difference gradients.

namespace leaky {

// 1 - (sum_i sqrt(p_i q_i))^2; zero iff p == q.
double fidelity_loss(const PopulationVector& p, const PopulationVector& q);

using LossFn = std::function<double(std::span<const double>)>;

// Central finite differences, (f(t + e_k eps) - f(t - e_k eps)) / (2 eps).
std::vector<double> finite_diff_gradient(const LossFn& f, std::span<const double> theta,
                                         double eps = 1e-4);

struct AdamParams {
    double lr = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m, v;
    long t = 0;
};

void adam_step(std::vector<double>& theta, std::span<const double> grad, AdamState& state,
               const AdamParams& params = {});

struct LbfgsParams {
    int memory = 10;          // stored curvature pairs
    double armijo_c = 1e-4;   // sufficient-decrease constant
    int max_backtracks = 30;  // line-search halvings before giving up
};

// Full-batch L-BFGS with Armijo backtracking on finite-difference
// gradients. Monotone: an iteration that cannot find a decrease leaves the
// point unchanged. Returns the loss after every iteration.
std::vector<double> lbfgs_minimize(const LossFn& f, std::vector<double>& theta, int iterations,
                                   const LbfgsParams& params = {});

struct FittingTask {
    int n = 2, d = 2;
    double leak = 0.0;
    double beta = 0.0;
    PopulationVector target;  // a point of the 2^n simplex
    int epochs = 200;
};

struct TrainRecord {
    std::vector<double> loss_trace;  // one entry per epoch, recorded after the update
    std::vector<double> final_theta;
    std::uint64_t seed = 0;
};

// Draws theta0 uniform in [0, 2pi], starts from |+>^n, runs `epochs`
// full-gradient L-BFGS steps on the fidelity loss against task.target.
// The noiseless loss valley is too shallow for first-order steps: Adam
// stalls near 5e-4 at (n=6, d=6) where the reachable floor is below 1e-6.
TrainRecord train_fit(const FittingTask& task, std::uint64_t seed);

// Uniform-simplex target draw for a fitting task (seeded from the Target
// stream of `seed`).
PopulationVector draw_fit_target(int n, std::uint64_t seed);

struct RatioStats {
    double mean = 0.0;
    double sem = 0.0;
    int reps = 0;
    int floor_events = 0;  // ideal final losses clamped at the 1e-12 floor
    std::vector<double> values;
    // Per-epoch loss means over the paired repetitions.
    std::vector<double> ideal_trace_mean;
    std::vector<double> leaky_trace_mean;
};

// Mean log10(final leaky loss / final ideal loss) over paired repetitions:
// both arms share the target and theta0 of each repetition; only L differs.
RatioStats loss_ratio_log10(int n, int d, double leak, double beta, int epochs, int reps,
                            std::uint64_t base_seed, int jobs = 1);

// 100 Iris rows (versicolor/virginica), features amplitude-encoded into
// 2-qubit states, labels +-1.
struct IrisDataset {
    std::vector<QutritState> states;
    std::vector<double> labels;
};

IrisDataset load_iris_binary(const std::string& csv_path);

// Amplitude encoding of one nonzero 4-vector into a 2-qubit state.
QutritState encode_amplitudes(std::span<const double> features);

struct ClassificationTask {
    const IrisDataset* data = nullptr;
    int d = 3;
    double leak = 0.0;
    double beta = 0.0;
    int folds = 4;
    int epochs = 100;
};

// sum_i (<psi_i| U^dag Z x Z U |psi_i> - y_i)^2 over the selected rows,
// expectations taken through the misread channel.
double mse_cost(const AnsatzSpec& spec, std::span<const double> theta, double leak, double beta,
                const IrisDataset& data, std::span<const std::size_t> rows);

// Seeded shuffle into `folds` equal folds.
std::vector<std::vector<std::size_t>> k_fold_indices(std::size_t count, int folds,
                                                     std::uint64_t seed);

struct CvResult {
    std::vector<double> fold_accuracy;
    double score = 0.0;  // mean fold accuracy
};

// Trains on folds-1 folds, predicts sign(<Z x Z>) on the held-out fold.
CvResult iris_cv(const ClassificationTask& task, std::uint64_t seed);

}  // namespace leaky
