#include "leaky/learn.hpp"

#include "leaky/expressibility.hpp"
#include "leaky/parallel.hpp"
#include "leaky/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace leaky {

namespace {

constexpr double kIdealLossFloor = 1e-12;

std::vector<double> draw_theta0(int count, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> theta(static_cast<std::size_t>(count));
    for (double& t : theta) t = angle(rng);
    return theta;
}

}  // namespace

double fidelity_loss(const PopulationVector& p, const PopulationVector& q) {
    if (p.p.size() != q.p.size()) throw std::invalid_argument("distribution length mismatch");
    double overlap = 0.0;
    for (std::size_t i = 0; i < p.p.size(); ++i) overlap += std::sqrt(p.p[i] * q.p[i]);
    return 1.0 - overlap * overlap;
}

std::vector<double> finite_diff_gradient(const LossFn& f, std::span<const double> theta,
                                         double eps) {
    if (eps <= 0.0) throw std::invalid_argument("finite-difference step must be positive");
    std::vector<double> point(theta.begin(), theta.end());
    std::vector<double> grad(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        const double orig = point[k];
        point[k] = orig + eps;
        const double fp = f(point);
        point[k] = orig - eps;
        const double fm = f(point);
        point[k] = orig;
        grad[k] = (fp - fm) / (2.0 * eps);
    }
    return grad;
}

void adam_step(std::vector<double>& theta, std::span<const double> grad, AdamState& state,
               const AdamParams& params) {
    if (state.m.empty()) {
        state.m.assign(theta.size(), 0.0);
        state.v.assign(theta.size(), 0.0);
    }
    if (grad.size() != theta.size() || state.m.size() != theta.size())
        throw std::invalid_argument("gradient/state size mismatch");
    ++state.t;
    const double bc1 = 1.0 - std::pow(params.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(params.beta2, static_cast<double>(state.t));
    for (std::size_t k = 0; k < theta.size(); ++k) {
        state.m[k] = params.beta1 * state.m[k] + (1.0 - params.beta1) * grad[k];
        state.v[k] = params.beta2 * state.v[k] + (1.0 - params.beta2) * grad[k] * grad[k];
        const double mhat = state.m[k] / bc1;
        const double vhat = state.v[k] / bc2;
        theta[k] -= params.lr * mhat / (std::sqrt(vhat) + params.eps);
    }
}

std::vector<double> lbfgs_minimize(const LossFn& f, std::vector<double>& theta, int iterations,
                                   const LbfgsParams& params) {
    const std::size_t dim = theta.size();
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho;

    std::vector<double> grad = finite_diff_gradient(f, theta);
    double fx = f(theta);
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(iterations));

    std::vector<double> direction(dim), candidate(dim), alpha;
    for (int it = 0; it < iterations; ++it) {
        // Two-loop recursion for H*grad.
        direction = grad;
        alpha.assign(s_hist.size(), 0.0);
        for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) dot += s_hist[i][k] * direction[k];
            alpha[i] = rho[i] * dot;
            for (std::size_t k = 0; k < dim; ++k) direction[k] -= alpha[i] * y_hist[i][k];
        }
        if (!s_hist.empty()) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                sy += s_hist.back()[k] * y_hist.back()[k];
                yy += y_hist.back()[k] * y_hist.back()[k];
            }
            if (yy > 0.0)
                for (double& v : direction) v *= sy / yy;
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) dot += y_hist[i][k] * direction[k];
            const double beta = rho[i] * dot;
            for (std::size_t k = 0; k < dim; ++k)
                direction[k] += s_hist[i][k] * (alpha[i] - beta);
        }

        double slope = 0.0;  // directional derivative along -direction
        for (std::size_t k = 0; k < dim; ++k) slope -= grad[k] * direction[k];
        if (slope > 0.0) {
            // Curvature information went stale; fall back to steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho.clear();
            direction = grad;
            slope = 0.0;
            for (std::size_t k = 0; k < dim; ++k) slope -= grad[k] * direction[k];
        }

        // Armijo backtracking; keep the point when no decrease is found.
        double step = 1.0;
        bool accepted = false;
        double f_new = fx;
        for (int ls = 0; ls < params.max_backtracks; ++ls) {
            for (std::size_t k = 0; k < dim; ++k) candidate[k] = theta[k] - step * direction[k];
            f_new = f(candidate);
            if (f_new <= fx + params.armijo_c * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (accepted) {
            const std::vector<double> grad_new = finite_diff_gradient(f, candidate);
            std::vector<double> s(dim), y(dim);
            double sy = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                s[k] = candidate[k] - theta[k];
                y[k] = grad_new[k] - grad[k];
                sy += s[k] * y[k];
            }
            theta = candidate;
            fx = f_new;
            grad = grad_new;
            if (sy > 1e-14) {
                s_hist.push_back(std::move(s));
                y_hist.push_back(std::move(y));
                rho.push_back(1.0 / sy);
                if (static_cast<int>(s_hist.size()) > params.memory) {
                    s_hist.pop_front();
                    y_hist.pop_front();
                    rho.pop_front();
                }
            }
        }
        trace.push_back(fx);
    }
    return trace;
}

PopulationVector draw_fit_target(int n, std::uint64_t seed) {
    auto rng = make_rng(seed, SeedStream::Target);
    const SampleSet s = sample_uniform_simplex(static_cast<int>(pow2(n)), 1, rng);
    return PopulationVector{n, {s.data.begin(), s.data.end()}};
}

TrainRecord train_fit(const FittingTask& task, std::uint64_t seed) {
    if (static_cast<int>(task.target.p.size()) != static_cast<int>(pow2(task.n)))
        throw std::invalid_argument("target length must be 2^n");
    AnsatzSpec spec;
    spec.n = task.n;
    spec.d = task.d;

    const QutritState initial = plus_state(task.n);
    const ReadoutModel readout{task.beta};
    const LeakyCZParams cz{task.leak, 0.0};
    const LossFn loss = [&](std::span<const double> theta) {
        const QutritState out = run_circuit(spec, theta, cz, initial);
        return fidelity_loss(misread(task.n, qutrit_populations(out), readout), task.target);
    };

    auto rng = make_rng(seed, SeedStream::Theta);
    std::vector<double> theta = draw_theta0(spec.param_count(), rng);
    TrainRecord record;
    record.seed = seed;
    record.loss_trace = lbfgs_minimize(loss, theta, task.epochs);
    record.final_theta = std::move(theta);
    return record;
}

RatioStats loss_ratio_log10(int n, int d, double leak, double beta, int epochs, int reps,
                            std::uint64_t base_seed, int jobs) {
    if (reps < 1) throw std::invalid_argument("reps must be positive");

    struct RepOut {
        double ratio = 0.0;
        bool floored = false;
        std::vector<double> ideal_trace, leaky_trace;
    };
    std::vector<RepOut> out(static_cast<std::size_t>(reps));
    parallel_for(static_cast<std::size_t>(reps), jobs, [&](std::size_t r) {
        const std::uint64_t seed = cell_seed(base_seed, n, d, leak, static_cast<int>(r));
        FittingTask task{n, d, 0.0, beta, draw_fit_target(n, seed), epochs};
        const TrainRecord ideal = train_fit(task, seed);
        task.leak = leak;
        const TrainRecord leaky = train_fit(task, seed);
        double ideal_final = ideal.loss_trace.back();
        if (ideal_final < kIdealLossFloor) {
            ideal_final = kIdealLossFloor;
            out[r].floored = true;
        }
        out[r].ratio = std::log10(std::max(leaky.loss_trace.back(), kIdealLossFloor) / ideal_final);
        out[r].ideal_trace = ideal.loss_trace;
        out[r].leaky_trace = leaky.loss_trace;
    });

    RatioStats stats;
    stats.reps = reps;
    stats.values.reserve(out.size());
    stats.ideal_trace_mean.assign(static_cast<std::size_t>(epochs), 0.0);
    stats.leaky_trace_mean.assign(static_cast<std::size_t>(epochs), 0.0);
    for (const RepOut& r : out) {
        stats.values.push_back(r.ratio);
        if (r.floored) ++stats.floor_events;
        for (int e = 0; e < epochs; ++e) {
            stats.ideal_trace_mean[e] += r.ideal_trace[e] / reps;
            stats.leaky_trace_mean[e] += r.leaky_trace[e] / reps;
        }
    }
    const Estimate agg = aggregate(stats.values);
    stats.mean = agg.mean;
    stats.sem = agg.sem;
    return stats;
}

QutritState encode_amplitudes(std::span<const double> features) {
    if (features.size() != 4) throw std::invalid_argument("amplitude encoding expects 4 features");
    double norm_sq = 0.0;
    for (double f : features) norm_sq += f * f;
    if (norm_sq <= 0.0) throw std::invalid_argument("cannot encode a zero feature vector");
    const double inv = 1.0 / std::sqrt(norm_sq);
    // Bitstrings 00,01,10,11 live at trit indices 0,1,3,4.
    std::vector<cx> amp(9, cx{0.0, 0.0});
    amp[0] = features[0] * inv;
    amp[1] = features[1] * inv;
    amp[3] = features[2] * inv;
    amp[4] = features[3] * inv;
    return QutritState::from_amplitudes(2, std::move(amp));
}

IrisDataset load_iris_binary(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open iris dataset: " + csv_path);
    IrisDataset data;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {  // header
            first = false;
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        double f[4];
        for (double& v : f) {
            if (!std::getline(ss, field, ',')) throw std::runtime_error("malformed iris row");
            v = std::stod(field);
        }
        if (!std::getline(ss, field)) throw std::runtime_error("malformed iris row");
        double label;
        if (field == "versicolor")
            label = 1.0;
        else if (field == "virginica")
            label = -1.0;
        else
            continue;  // other classes are not part of the binary task
        data.states.push_back(encode_amplitudes(f));
        data.labels.push_back(label);
    }
    if (data.labels.size() != 100)
        throw std::runtime_error("expected 100 versicolor/virginica rows");
    return data;
}

namespace {

double predict_zz(const AnsatzSpec& spec, std::span<const double> theta, const LeakyCZParams& cz,
                  const ReadoutModel& readout, const QutritState& input,
                  const DiagonalObservable& zz) {
    const QutritState out = run_circuit(spec, theta, cz, input);
    return expect_diagonal(out, zz, readout);
}

DiagonalObservable zz_observable() { return DiagonalObservable{{1.0, -1.0, -1.0, 1.0}}; }

}  // namespace

double mse_cost(const AnsatzSpec& spec, std::span<const double> theta, double leak, double beta,
                const IrisDataset& data, std::span<const std::size_t> rows) {
    const LeakyCZParams cz{leak, 0.0};
    const ReadoutModel readout{beta};
    const DiagonalObservable zz = zz_observable();
    double cost = 0.0;
    for (std::size_t row : rows) {
        const QutritState& input = data.states[row];
        if (std::abs(input.norm_sq() - 1.0) > 1e-9)
            throw std::invalid_argument("encoded input is not normalized");
        const double pred = predict_zz(spec, theta, cz, readout, input, zz);
        const double diff = pred - data.labels[row];
        cost += diff * diff;
    }
    return cost;
}

std::vector<std::vector<std::size_t>> k_fold_indices(std::size_t count, int folds,
                                                     std::uint64_t seed) {
    if (folds < 2 || count % static_cast<std::size_t>(folds) != 0)
        throw std::invalid_argument("count must split into equal folds");
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = make_rng(seed, SeedStream::Folds);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t per_fold = count / static_cast<std::size_t>(folds);
    std::vector<std::vector<std::size_t>> result(static_cast<std::size_t>(folds));
    for (int f = 0; f < folds; ++f)
        result[f].assign(order.begin() + f * per_fold, order.begin() + (f + 1) * per_fold);
    return result;
}

CvResult iris_cv(const ClassificationTask& task, std::uint64_t seed) {
    if (task.data == nullptr) throw std::invalid_argument("classification task needs a dataset");
    const IrisDataset& data = *task.data;
    AnsatzSpec spec;
    spec.n = 2;
    spec.d = task.d;
    const LeakyCZParams cz{task.leak, 0.0};
    const ReadoutModel readout{task.beta};
    const DiagonalObservable zz = zz_observable();

    const auto folds = k_fold_indices(data.labels.size(), task.folds, seed);
    CvResult result;
    result.fold_accuracy.reserve(folds.size());
    for (std::size_t held = 0; held < folds.size(); ++held) {
        std::vector<std::size_t> train_rows;
        for (std::size_t f = 0; f < folds.size(); ++f)
            if (f != held) train_rows.insert(train_rows.end(), folds[f].begin(), folds[f].end());

        const LossFn loss = [&](std::span<const double> theta) {
            return mse_cost(spec, theta, task.leak, task.beta, data, train_rows);
        };
        auto rng = make_rng(seed_mix(seed, held), SeedStream::Theta);
        std::vector<double> theta = draw_theta0(spec.param_count(), rng);
        AdamState adam;
        for (int epoch = 0; epoch < task.epochs; ++epoch) {
            const std::vector<double> grad = finite_diff_gradient(loss, theta);
            adam_step(theta, grad, adam);
        }

        std::size_t correct = 0;
        for (std::size_t row : folds[held]) {
            const double pred = predict_zz(spec, theta, cz, readout, data.states[row], zz);
            if ((pred >= 0.0 ? 1.0 : -1.0) == data.labels[row]) ++correct;
        }
        result.fold_accuracy.push_back(static_cast<double>(correct) /
                                       static_cast<double>(folds[held].size()));
    }
    for (double a : result.fold_accuracy) result.score += a;
    result.score /= static_cast<double>(result.fold_accuracy.size());
    return result;
}

}  // namespace leaky
