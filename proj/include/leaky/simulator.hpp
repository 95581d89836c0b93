#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

// Exact pure-state simulation of n qutrits. Qubit gates act on the
// {|0>,|1>} subspace of a site and leave |2> alone; the only source of
// leakage is the two-qutrit CZ, which exchanges amplitude between |11> and
// |02> with probability 4L. Readout maps the 3^n populations onto 2^n
// bitstrings through the misread channel (a leaked site reads 0 with
// probability beta, 1 otherwise).

namespace leaky {

using cx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat9 = Eigen::Matrix<cx, 9, 9>;

std::size_t pow3(int n);
std::size_t pow2(int n);

// n-qutrit pure state. Amplitudes are ordered lexicographically over trit
// strings with site 0 most significant: index = sum_s trit[s] * 3^(n-1-s).
struct QutritState {
    int n = 0;
    std::vector<cx> amp;

    static QutritState zero(int n);
    static QutritState from_amplitudes(int n, std::vector<cx> amplitudes);

    double norm_sq() const;
    // Probability mass currently outside the qubit subspace (any trit = 2).
    double leak_population() const;
};

struct LeakyCZParams {
    double leak = 0.0;  // L, with 4L <= 1
    double phi = 0.0;   // transition phase
};

struct ReadoutModel {
    double beta = 0.0;  // P(leaked site reads 0)
};

// Readout distribution over 2^n bitstrings, lexicographic, site 0 most
// significant. Entries are nonnegative and sum to 1.
struct PopulationVector {
    int n = 0;
    std::vector<double> p;
};

// Real coefficients of H = h0*I + h1*X + h2*Y + h3*Z.
struct PauliObservable1Q {
    double h0 = 0.0, h1 = 0.0, h2 = 0.0, h3 = 0.0;
};

// Eigenvalue per computational bitstring (length 2^n).
struct DiagonalObservable {
    std::vector<double> eigenvalues;
};

// Applies a 2x2 unitary to the {|0>,|1>} subspace of one site, identity on
// |2>. Rejects non-unitary gates (tolerance 1e-10) and bad sites.
void apply_qubit_gate(QutritState& state, const Mat2& gate, int site);

// Leaky CZ: leak-exchange composed after the embedded ideal CZ.
//   ideal CZ: phase -1 on |11>, identity on every other basis state
//   exchange: |11> -> sqrt(1-4L)|11> + e^{i phi} sqrt(4L)|02>
//             |02> -> sqrt(1-4L)|02> - e^{-i phi} sqrt(4L)|11>
// Basis index of the pair is 3*t_first + t_second. Rejects 4L > 1.
Mat9 build_leaky_cz(const LeakyCZParams& params);

// Applies a 9x9 unitary to sites (a, b); a is the first (most significant)
// trit of the 9-dim basis index. Rejects overlapping or out-of-range sites.
void apply_two_site(QutritState& state, const Mat9& u, int site_a, int site_b);

// |amplitude|^2 per trit string; sums to 1 for a normalized state.
std::vector<double> qutrit_populations(const QutritState& state);

// Per-site independent relabeling of leaked populations: a site reading
// trit 2 is reported as 0 with probability beta, as 1 with probability
// 1-beta. Input length 3^n, output length 2^n.
PopulationVector misread(int n, const std::vector<double>& populations, const ReadoutModel& model);

// <O> for a diagonal observable, measured through the misread channel:
// sum_b lambda_b * p_misread(b).
double expect_diagonal(const QutritState& state, const DiagonalObservable& obs,
                       const ReadoutModel& model);

// Diagonalization method for a single-qutrit state: rotate by V with
// V H V^dag = diag(lambda0, lambda1), eigenvalues in descending order, then
// read through the misread channel.
double expect_diagonalized(const QutritState& state, const Mat2& hermitian,
                           const ReadoutModel& model);

// Pauli-decomposition method: each sigma_i term is measured by its own
// diagonalizing rotation followed by the misread channel.
double expect_pauli(const QutritState& state, const PauliObservable1Q& obs,
                    const ReadoutModel& model);

// Descending-eigenvalue diagonalization H = V^dag diag(l0, l1) V used by the
// measurement rotation; exposed for tests.
struct Diagonalization2x2 {
    Mat2 v;
    double lambda0 = 0.0, lambda1 = 0.0;  // lambda0 >= lambda1
};
Diagonalization2x2 diagonalize_hermitian(const Mat2& hermitian);

// Common 2x2 gates.
namespace gates {
Mat2 identity();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
Mat2 hadamard();
Mat2 rx(double theta);
Mat2 ry(double theta);
Mat2 rz(double theta);
}  // namespace gates

}  // namespace leaky
