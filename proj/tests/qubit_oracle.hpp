#pragma once

// Test-only plain 2-level statevector simulator. Independent of the qutrit
// kernel: its own indexing, gate application, and distributions. Consumes
// the ansatz gate list so the same circuit can be replayed at L = 0.

#include "leaky/ansatz.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace oracle {

using cx = std::complex<double>;

struct QubitState {
    int n = 0;
    std::vector<cx> amp;  // length 2^n, bit 0 of the string most significant

    static QubitState zero(int n) {
        QubitState s;
        s.n = n;
        s.amp.assign(std::size_t{1} << n, cx{0.0, 0.0});
        s.amp[0] = cx{1.0, 0.0};
        return s;
    }
};

inline void apply_1q(QubitState& s, const leaky::Mat2& u, int site) {
    const std::size_t stride = std::size_t{1} << (s.n - 1 - site);
    for (std::size_t block = 0; block < s.amp.size(); block += 2 * stride)
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = block + off, i1 = i0 + stride;
            const cx a0 = s.amp[i0], a1 = s.amp[i1];
            s.amp[i0] = u(0, 0) * a0 + u(0, 1) * a1;
            s.amp[i1] = u(1, 0) * a0 + u(1, 1) * a1;
        }
}

inline void apply_cz(QubitState& s, int a, int b) {
    const std::size_t sa = std::size_t{1} << (s.n - 1 - a);
    const std::size_t sb = std::size_t{1} << (s.n - 1 - b);
    for (std::size_t i = 0; i < s.amp.size(); ++i)
        if ((i & sa) && (i & sb)) s.amp[i] = -s.amp[i];
}

// Replays a gate list at L = 0 (every leaky CZ is the ideal CZ).
inline QubitState run_gates(const std::vector<leaky::GateOp>& ops, QubitState state) {
    for (const auto& op : ops) {
        if (const auto* g = std::get_if<leaky::QubitGateOp>(&op)) {
            apply_1q(state, g->u, g->site);
        } else {
            const auto& c = std::get<leaky::LeakyCzOp>(op);
            apply_cz(state, c.control, c.target);
        }
    }
    return state;
}

inline std::vector<double> probabilities(const QubitState& s) {
    std::vector<double> p(s.amp.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(s.amp[i]);
    return p;
}

inline QubitState plus_state(int n) {
    QubitState s = QubitState::zero(n);
    for (int q = 0; q < n; ++q) apply_1q(s, leaky::gates::hadamard(), q);
    return s;
}

// Brute-force misread: distributes each trit-string's probability over
// bitstrings by enumerating the per-site relabeling explicitly.
inline std::vector<double> brute_force_misread(int n, const std::vector<double>& trit_pops,
                                               double beta) {
    const std::size_t dim2 = std::size_t{1} << n;
    std::vector<double> out(dim2, 0.0);
    for (std::size_t t = 0; t < trit_pops.size(); ++t) {
        // Decode trits, site 0 most significant.
        std::vector<int> trits(n);
        std::size_t rest = t;
        for (int s = n - 1; s >= 0; --s) {
            trits[s] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        // Each leaked site splits into bit 0 (beta) and bit 1 (1 - beta).
        for (std::size_t mask = 0; mask < dim2; ++mask) {
            double weight = trit_pops[t];
            bool possible = true;
            for (int s = 0; s < n && possible; ++s) {
                const int bit = (mask >> (n - 1 - s)) & 1;
                if (trits[s] == 2)
                    weight *= bit == 0 ? beta : 1.0 - beta;
                else if (trits[s] != bit)
                    possible = false;
            }
            if (possible) out[mask] += weight;
        }
    }
    return out;
}

}  // namespace oracle
