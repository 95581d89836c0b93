#include "leaky/expressibility.hpp"

#include "leaky/parallel.hpp"
#include "leaky/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace leaky {

namespace {

constexpr std::size_t kRowBlock = 64;

double sq_distance(std::span<const double> x, std::span<const double> y) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double diff = x[k] - y[k];
        d2 += diff * diff;
    }
    return d2;
}

}  // namespace

Estimate aggregate(std::span<const double> values) {
    Estimate e;
    e.reps = static_cast<int>(values.size());
    if (values.empty()) return e;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - e.mean) * (v - e.mean);
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        e.sem = sd / std::sqrt(static_cast<double>(values.size()));
    }
    return e;
}

SampleSet sample_uniform_simplex(int dim, std::size_t count, std::mt19937_64& rng) {
    if (dim < 2) throw std::invalid_argument("simplex dimension must be at least 2");
    if (count < 1) throw std::invalid_argument("sample count must be positive");
    SampleSet s;
    s.dim = dim;
    s.count = count;
    s.data.resize(count * static_cast<std::size_t>(dim));
    std::exponential_distribution<double> exp1(1.0);
    for (std::size_t i = 0; i < count; ++i) {
        double* row = s.data.data() + i * static_cast<std::size_t>(dim);
        double total = 0.0;
        for (int k = 0; k < dim; ++k) {
            row[k] = exp1(rng);
            total += row[k];
        }
        for (int k = 0; k < dim; ++k) row[k] /= total;
    }
    return s;
}

SampleSet sample_circuit_outputs(const AnsatzSpec& spec, double leak, double beta,
                                 std::size_t count, std::mt19937_64& rng) {
    if (count < 1) throw std::invalid_argument("sample count must be positive");
    SampleSet s;
    s.dim = static_cast<int>(pow2(spec.n));
    s.count = count;
    s.data.resize(count * static_cast<std::size_t>(s.dim));

    const QutritState initial = plus_state(spec.n);
    const ReadoutModel readout{beta};
    const LeakyCZParams cz{leak, 0.0};
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> theta(spec.param_count());
    for (std::size_t i = 0; i < count; ++i) {
        for (double& t : theta) t = angle(rng);
        const QutritState out = run_circuit(spec, theta, cz, initial);
        const PopulationVector read = misread(spec.n, qutrit_populations(out), readout);
        std::copy(read.p.begin(), read.p.end(),
                  s.data.begin() + static_cast<std::ptrdiff_t>(i * read.p.size()));
    }
    return s;
}

double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma) {
    return std::exp(-sq_distance(x, y) / (4.0 * sigma));
}

namespace {

// sum_ij k(A_i, A_j) = N + 2 * sum_{i<j} k, summed in fixed row order.
double within_sum(const SampleSet& a, double sigma, int jobs) {
    const double off_diag =
        parallel_block_sum(a.count, kRowBlock, jobs, [&](std::size_t lo, std::size_t hi) {
            double partial = 0.0;
            for (std::size_t i = lo; i < hi; ++i)
                for (std::size_t j = i + 1; j < a.count; ++j)
                    partial += gaussian_kernel(a.row(i), a.row(j), sigma);
            return partial;
        });
    return static_cast<double>(a.count) + 2.0 * off_diag;
}

// sum_ij k(A_i, B_j), grouped as diagonal + (i<j pairs taken both ways) so
// the floating-point result is exactly symmetric under swapping A and B.
double cross_sum(const SampleSet& a, const SampleSet& b, double sigma, int jobs) {
    double diag = 0.0;
    for (std::size_t i = 0; i < a.count; ++i) diag += gaussian_kernel(a.row(i), b.row(i), sigma);
    const double off =
        parallel_block_sum(a.count, kRowBlock, jobs, [&](std::size_t lo, std::size_t hi) {
            double partial = 0.0;
            for (std::size_t i = lo; i < hi; ++i)
                for (std::size_t j = i + 1; j < a.count; ++j)
                    partial += gaussian_kernel(a.row(i), b.row(j), sigma) +
                               gaussian_kernel(a.row(j), b.row(i), sigma);
            return partial;
        });
    return diag + off;
}

}  // namespace

double mmd_biased(const SampleSet& x, const SampleSet& y, const KernelParams& kernel, int jobs) {
    if (x.count == 0 || y.count == 0) throw std::invalid_argument("sample sets must be nonempty");
    if (x.count != y.count) throw std::invalid_argument("sample sets must have equal counts");
    if (x.dim != y.dim) throw std::invalid_argument("sample sets must have equal dimension");
    const double n = static_cast<double>(x.count);
    const double total = within_sum(x, kernel.sigma, jobs) + within_sum(y, kernel.sigma, jobs) -
                         2.0 * cross_sum(x, y, kernel.sigma, jobs);
    return std::abs(total) / (n * n);
}

double expr2_once(const AnsatzSpec& spec, double leak, double beta, std::size_t samples,
                  std::uint64_t seed, const KernelParams& kernel) {
    auto rng_theta = make_rng(seed, SeedStream::Theta);
    auto rng_uniform = make_rng(seed, SeedStream::Uniform);
    const SampleSet circuit = sample_circuit_outputs(spec, leak, beta, samples, rng_theta);
    const SampleSet uniform =
        sample_uniform_simplex(static_cast<int>(pow2(spec.n)), samples, rng_uniform);
    return -mmd_biased(circuit, uniform, kernel);
}

Estimate expr2(const AnsatzSpec& spec, double leak, double beta, std::size_t samples, int reps,
               std::uint64_t seed, const KernelParams& kernel) {
    if (reps < 1) throw std::invalid_argument("reps must be positive");
    std::vector<double> values(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r)
        values[r] = expr2_once(spec, leak, beta, samples,
                               seed_mix(seed, static_cast<std::uint64_t>(r)), kernel);
    return aggregate(values);
}

double kl_vs_haar(std::span<const double> fidelities, int bins, int n_qubits) {
    if (bins < 1) throw std::invalid_argument("bins must be positive");
    if (fidelities.empty()) throw std::invalid_argument("need at least one fidelity sample");

    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double f : fidelities) {
        int b = static_cast<int>(f * bins);
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;  // F = 1 lands in the last bin
        ++counts[static_cast<std::size_t>(b)];
    }
    // Empirical zero bins get one pseudo-count so the divergence is finite.
    std::size_t total = 0;
    for (auto& c : counts) {
        if (c == 0) c = 1;
        total += c;
    }

    const double dpow = static_cast<double>(pow2(n_qubits)) - 1.0;  // D - 1
    double kl = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double lo = static_cast<double>(b) / bins;
        const double hi = static_cast<double>(b + 1) / bins;
        const double haar = std::pow(1.0 - lo, dpow) - std::pow(1.0 - hi, dpow);
        const double emp = static_cast<double>(counts[static_cast<std::size_t>(b)]) /
                           static_cast<double>(total);
        kl += emp * std::log(emp / haar);
    }
    return kl;
}

double expr1_kl(const AnsatzSpec& spec, double leak, std::size_t n_pairs, int bins,
                std::uint64_t seed) {
    if (leak != 0.0)
        throw std::invalid_argument("Expr1 assumes pure qubit outputs; leak must be 0");
    if (n_pairs < 1) throw std::invalid_argument("need at least one fidelity pair");

    auto rng = make_rng(seed, SeedStream::HaarPairs);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const QutritState initial = QutritState::zero(spec.n);
    const LeakyCZParams cz{0.0, 0.0};
    std::vector<double> theta(spec.param_count());

    auto draw_output = [&] {
        for (double& t : theta) t = angle(rng);
        return run_circuit(spec, theta, cz, initial);
    };

    std::vector<double> fidelities(n_pairs);
    for (std::size_t i = 0; i < n_pairs; ++i) {
        const QutritState a = draw_output();
        const QutritState b = draw_output();
        cx ov{0.0, 0.0};
        for (std::size_t k = 0; k < a.amp.size(); ++k) ov += std::conj(a.amp[k]) * b.amp[k];
        fidelities[i] = std::norm(ov);
    }
    return kl_vs_haar(fidelities, bins, spec.n);
}

void write_samples_csv(const SampleSet& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < samples.count; ++i) {
        const auto row = samples.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out << ',';
            char buf[32];
            const auto res = std::to_chars(buf, buf + sizeof(buf), row[k]);
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
}

}  // namespace leaky
