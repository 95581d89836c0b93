#pragma once

#include "leaky/ansatz.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

// Expressibility estimation. Expr2 is minus the MMD between the circuit's
// misread output distributions (under uniformly random parameters) and the
// flat distribution over the probability simplex; Expr1 is the
// KL-divergence of the noiseless fidelity histogram against the Haar
// density.

namespace leaky {

struct KernelParams {
    double sigma = 0.01;  // k(x, y) = exp(-|x - y|^2 / (4 sigma))
};

// N probability vectors of equal dimension, stored row-major.
struct SampleSet {
    int dim = 0;
    std::size_t count = 0;
    std::vector<double> data;

    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

struct Estimate {
    double mean = 0.0;
    double sem = 0.0;  // sample standard deviation / sqrt(reps)
    int reps = 0;
};

Estimate aggregate(std::span<const double> values);

// I.i.d. flat-Dirichlet samples over the full dim-component probability
// vector (normalized unit-rate exponentials).
SampleSet sample_uniform_simplex(int dim, std::size_t count, std::mt19937_64& rng);

// Misread output distributions of the ansatz for independent uniform
// [0, 2pi] parameter draws, starting from |+>^n.
SampleSet sample_circuit_outputs(const AnsatzSpec& spec, double leak, double beta,
                                 std::size_t count, std::mt19937_64& rng);

double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma);

// Biased V-statistic with diagonal terms:
//   (1/N^2) | sum_ij k(X_i,X_j) + k(Y_i,Y_j) - 2 k(X_i,Y_j) |.
// Exactly symmetric in its arguments and exactly 0 for X == Y. `jobs`
// parallelizes the kernel sums over fixed row blocks; the reduction order
// is pinned so results are bit-identical for any job count.
double mmd_biased(const SampleSet& x, const SampleSet& y, const KernelParams& kernel,
                  int jobs = 1);

// One Expr2 repetition: -MMD(circuit samples, uniform samples), both sets
// of size `samples`, seeded deterministically from `seed`.
double expr2_once(const AnsatzSpec& spec, double leak, double beta, std::size_t samples,
                  std::uint64_t seed, const KernelParams& kernel = {});

// Mean +- stderr of expr2_once over `reps` independent repetitions.
Estimate expr2(const AnsatzSpec& spec, double leak, double beta, std::size_t samples, int reps,
               std::uint64_t seed, const KernelParams& kernel = {});

// KL divergence of a fidelity histogram (equal-width bins on [0, 1])
// against the Haar overlap density f(F) = (D-1)(1-F)^(D-2) with D = 2^n,
// integrated analytically per bin. Empirical zero bins receive one
// pseudo-count.
double kl_vs_haar(std::span<const double> fidelities, int bins, int n_qubits);

// Expr1: KL of the pairwise output-overlap distribution against Haar for
// the noiseless ansatz started from |0...0>. Rejects leak > 0 (the measure
// assumes pure qubit outputs).
double expr1_kl(const AnsatzSpec& spec, double leak, std::size_t n_pairs, int bins,
                std::uint64_t seed);

// One row per sample, plain CSV, for external validation.
void write_samples_csv(const SampleSet& samples, const std::string& path);

}  // namespace leaky
