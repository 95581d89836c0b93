#include "leaky/simulator.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace leaky {

namespace {

constexpr double kUnitaryTol = 1e-10;

// Index of |t_first t_second> in the 9-dim two-site basis.
constexpr int kIdx11 = 4;  // 3*1 + 1
constexpr int kIdx02 = 2;  // 3*0 + 2

bool is_unitary(const Mat2& u, double tol) {
    return (u.adjoint() * u - Mat2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

void check_site(int site, int n) {
    if (site < 0 || site >= n) throw std::invalid_argument("gate site out of range");
}

}  // namespace

std::size_t pow3(int n) {
    std::size_t v = 1;
    for (int i = 0; i < n; ++i) v *= 3;
    return v;
}

std::size_t pow2(int n) { return std::size_t{1} << n; }

QutritState QutritState::zero(int n) {
    if (n < 1) throw std::invalid_argument("qutrit count must be positive");
    QutritState s;
    s.n = n;
    s.amp.assign(pow3(n), cx{0.0, 0.0});
    s.amp[0] = cx{1.0, 0.0};
    return s;
}

QutritState QutritState::from_amplitudes(int n, std::vector<cx> amplitudes) {
    if (n < 1) throw std::invalid_argument("qutrit count must be positive");
    if (amplitudes.size() != pow3(n)) throw std::invalid_argument("amplitude count must be 3^n");
    QutritState s;
    s.n = n;
    s.amp = std::move(amplitudes);
    return s;
}

double QutritState::norm_sq() const {
    double t = 0.0;
    for (const cx& a : amp) t += std::norm(a);
    return t;
}

double QutritState::leak_population() const {
    double total = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        std::size_t rest = i;
        bool leaked = false;
        for (int s = 0; s < n; ++s) {
            if (rest % 3 == 2) {
                leaked = true;
                break;
            }
            rest /= 3;
        }
        if (leaked) total += std::norm(amp[i]);
    }
    return total;
}

void apply_qubit_gate(QutritState& state, const Mat2& gate, int site) {
    check_site(site, state.n);
    if (!is_unitary(gate, kUnitaryTol)) throw std::invalid_argument("gate is not unitary");

    const std::size_t stride = pow3(state.n - 1 - site);
    const std::size_t dim = state.amp.size();
    const cx u00 = gate(0, 0), u01 = gate(0, 1), u10 = gate(1, 0), u11 = gate(1, 1);
    for (std::size_t block = 0; block < dim; block += 3 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = block + off;
            const std::size_t i1 = i0 + stride;
            const cx a0 = state.amp[i0];
            const cx a1 = state.amp[i1];
            state.amp[i0] = u00 * a0 + u01 * a1;
            state.amp[i1] = u10 * a0 + u11 * a1;
        }
    }
}

Mat9 build_leaky_cz(const LeakyCZParams& params) {
    if (params.leak < 0.0 || 4.0 * params.leak > 1.0)
        throw std::invalid_argument("leak probability must satisfy 0 <= 4L <= 1");

    const double keep = std::sqrt(1.0 - 4.0 * params.leak);
    const double swap = std::sqrt(4.0 * params.leak);
    const cx phase = std::polar(1.0, params.phi);

    Mat9 u = Mat9::Identity();
    // Ideal CZ contributes the -1 on the |11> column; the exchange then
    // rotates the {|11>, |02>} plane.
    u(kIdx11, kIdx11) = -keep;
    u(kIdx02, kIdx11) = -phase * swap;
    u(kIdx02, kIdx02) = keep;
    u(kIdx11, kIdx02) = -std::conj(phase) * swap;
    return u;
}

void apply_two_site(QutritState& state, const Mat9& u, int site_a, int site_b) {
    check_site(site_a, state.n);
    check_site(site_b, state.n);
    if (site_a == site_b) throw std::invalid_argument("two-site gate needs distinct sites");

    const std::size_t stride_a = pow3(state.n - 1 - site_a);
    const std::size_t stride_b = pow3(state.n - 1 - site_b);
    const std::size_t hi = std::max(stride_a, stride_b);
    const std::size_t lo = std::min(stride_a, stride_b);
    const std::size_t dim = state.amp.size();

    std::array<cx, 9> in;
    std::array<cx, 9> out;
    for (std::size_t top = 0; top < dim; top += 3 * hi) {
        for (std::size_t mid = 0; mid < hi; mid += 3 * lo) {
            for (std::size_t low = 0; low < lo; ++low) {
                const std::size_t base = top + mid + low;
                for (int ta = 0; ta < 3; ++ta)
                    for (int tb = 0; tb < 3; ++tb)
                        in[3 * ta + tb] = state.amp[base + ta * stride_a + tb * stride_b];
                out.fill(cx{0.0, 0.0});
                for (int c = 0; c < 9; ++c) {
                    const cx v = in[c];
                    for (int r = 0; r < 9; ++r) out[r] += u(r, c) * v;
                }
                for (int ta = 0; ta < 3; ++ta)
                    for (int tb = 0; tb < 3; ++tb)
                        state.amp[base + ta * stride_a + tb * stride_b] = out[3 * ta + tb];
            }
        }
    }
}

std::vector<double> qutrit_populations(const QutritState& state) {
    std::vector<double> p(state.amp.size());
    for (std::size_t i = 0; i < state.amp.size(); ++i) p[i] = std::norm(state.amp[i]);
    return p;
}

PopulationVector misread(int n, const std::vector<double>& populations, const ReadoutModel& model) {
    if (model.beta < 0.0 || model.beta > 1.0)
        throw std::invalid_argument("beta must lie in [0, 1]");
    if (populations.size() != pow3(n))
        throw std::invalid_argument("population vector must have length 3^n");

    // Contract one site at a time with the 2x3 readout matrix
    //   [1 0 beta; 0 1 1-beta],
    // reshaping (2^k, 3^(n-k)) -> (2^(k+1), 3^(n-k-1)).
    std::vector<double> cur = populations;
    std::vector<double> next;
    std::size_t bit_rows = 1;
    std::size_t trit_cols = pow3(n);
    for (int s = 0; s < n; ++s) {
        trit_cols /= 3;
        next.assign(bit_rows * 2 * trit_cols, 0.0);
        for (std::size_t r = 0; r < bit_rows; ++r) {
            for (std::size_t c = 0; c < trit_cols; ++c) {
                const double p0 = cur[(r * 3 + 0) * trit_cols + c];
                const double p1 = cur[(r * 3 + 1) * trit_cols + c];
                const double p2 = cur[(r * 3 + 2) * trit_cols + c];
                next[(r * 2 + 0) * trit_cols + c] = p0 + model.beta * p2;
                next[(r * 2 + 1) * trit_cols + c] = p1 + (1.0 - model.beta) * p2;
            }
        }
        cur.swap(next);
        bit_rows *= 2;
    }
    return PopulationVector{n, std::move(cur)};
}

double expect_diagonal(const QutritState& state, const DiagonalObservable& obs,
                       const ReadoutModel& model) {
    if (obs.eigenvalues.size() != pow2(state.n))
        throw std::invalid_argument("diagonal observable must have length 2^n");
    const PopulationVector read = misread(state.n, qutrit_populations(state), model);
    double e = 0.0;
    for (std::size_t b = 0; b < read.p.size(); ++b) e += obs.eigenvalues[b] * read.p[b];
    return e;
}

Diagonalization2x2 diagonalize_hermitian(const Mat2& hermitian) {
    if ((hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff() > kUnitaryTol)
        throw std::invalid_argument("observable must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat2> solver(hermitian);
    // Eigen returns ascending eigenvalues; the measurement convention here
    // assigns lambda0 to the larger one (so diag(1,-1) observables map to
    // V = I).
    Diagonalization2x2 d;
    d.lambda0 = solver.eigenvalues()(1);
    d.lambda1 = solver.eigenvalues()(0);
    Mat2 v;
    v.row(0) = solver.eigenvectors().col(1).adjoint();
    v.row(1) = solver.eigenvectors().col(0).adjoint();
    // Fix eigenvector phases so the rotation is deterministic: make the
    // largest-magnitude entry of each row real positive.
    for (int r = 0; r < 2; ++r) {
        const int c = std::abs(v(r, 0)) >= std::abs(v(r, 1)) ? 0 : 1;
        const double m = std::abs(v(r, c));
        if (m > 0.0) v.row(r) *= std::conj(v(r, c)) / m;
    }
    d.v = v;
    return d;
}

double expect_diagonalized(const QutritState& state, const Mat2& hermitian,
                           const ReadoutModel& model) {
    if (state.n != 1) throw std::invalid_argument("diagonalized measurement is single-qutrit");
    const Diagonalization2x2 diag = diagonalize_hermitian(hermitian);
    QutritState rotated = state;
    apply_qubit_gate(rotated, diag.v, 0);
    return expect_diagonal(rotated, DiagonalObservable{{diag.lambda0, diag.lambda1}}, model);
}

double expect_pauli(const QutritState& state, const PauliObservable1Q& obs,
                    const ReadoutModel& model) {
    if (state.n != 1) throw std::invalid_argument("Pauli measurement is single-qutrit");
    // The identity term reads 1 regardless of leakage (p0 + p1 = 1).
    double e = obs.h0;
    if (obs.h1 != 0.0) e += obs.h1 * expect_diagonalized(state, gates::pauli_x(), model);
    if (obs.h2 != 0.0) e += obs.h2 * expect_diagonalized(state, gates::pauli_y(), model);
    if (obs.h3 != 0.0) e += obs.h3 * expect_diagonalized(state, gates::pauli_z(), model);
    return e;
}

namespace gates {

Mat2 identity() { return Mat2::Identity(); }

Mat2 pauli_x() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}

Mat2 pauli_y() {
    Mat2 m;
    m << cx{0, 0}, cx{0, -1}, cx{0, 1}, cx{0, 0};
    return m;
}

Mat2 pauli_z() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}

Mat2 hadamard() {
    Mat2 m;
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

Mat2 rx(double theta) {
    Mat2 m;
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    m << cx{c, 0}, cx{0, -s}, cx{0, -s}, cx{c, 0};
    return m;
}

Mat2 ry(double theta) {
    Mat2 m;
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    m << c, -s, s, c;
    return m;
}

Mat2 rz(double theta) {
    Mat2 m;
    m << std::polar(1.0, -theta / 2.0), cx{0, 0}, cx{0, 0}, std::polar(1.0, theta / 2.0);
    return m;
}

}  // namespace gates

}  // namespace leaky
