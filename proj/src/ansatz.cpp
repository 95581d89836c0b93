#include "leaky/ansatz.hpp"

#include <algorithm>
#include <stdexcept>

namespace leaky {

int AnsatzSpec::param_count() const {
    return d * n * static_cast<int>(rotation_set.size());
}

std::vector<Edge> AnsatzSpec::entangling_edges() const {
    if (entangler == EntanglerKind::CnotChain) return edges_chain(n);
    switch (topology) {
        case Topology::Chain:
            return edges_chain(n);
        case Topology::Ladder:
            return edges_ladder(n);
        case Topology::Lattice:
            if (rows * cols != n)
                throw std::invalid_argument("lattice rows*cols must equal qubit count");
            return edges_lattice(rows, cols);
    }
    throw std::logic_error("unknown topology");
}

std::vector<Edge> edges_chain(int n) {
    if (n < 2) throw std::invalid_argument("chain needs at least 2 qubits");
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return edges;
}

std::vector<Edge> edges_ladder(int n) {
    if (n < 4) throw std::invalid_argument("ladder needs at least 4 qubits");
    const int top = (n + 1) / 2;  // row 0: qubits 0..top-1, row 1: top..n-1
    const int bottom = n / 2;
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < top; ++i) edges.emplace_back(i, i + 1);
    for (int i = 0; i + 1 < bottom; ++i) edges.emplace_back(top + i, top + i + 1);
    for (int i = 0; i < bottom; ++i) edges.emplace_back(i, top + i);
    return edges;
}

std::vector<Edge> edges_lattice(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("lattice dimensions must be positive");
    std::vector<Edge> edges;
    auto idx = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c + 1 < cols; ++c) edges.emplace_back(idx(r, c), idx(r, c + 1));
    for (int r = 0; r + 1 < rows; ++r)
        for (int c = 0; c < cols; ++c) edges.emplace_back(idx(r, c), idx(r + 1, c));
    return edges;
}

std::vector<Edge> entangling_order(const std::vector<Edge>& edges) {
    // Leaky CZs sharing a qubit do not commute, so the emission order is
    // pinned: even first endpoints first, construction order within groups.
    std::vector<Edge> ordered;
    ordered.reserve(edges.size());
    for (const Edge& e : edges)
        if (e.first % 2 == 0) ordered.push_back(e);
    for (const Edge& e : edges)
        if (e.first % 2 != 0) ordered.push_back(e);
    return ordered;
}

std::vector<GateOp> build_circuit(const AnsatzSpec& spec, std::span<const double> theta) {
    if (static_cast<int>(theta.size()) != spec.param_count())
        throw std::invalid_argument("parameter vector length must be d*n*|rotation_set|");

    const std::vector<Edge> edges = entangling_order(spec.entangling_edges());
    std::vector<GateOp> ops;
    const int per_qubit = static_cast<int>(spec.rotation_set.size());
    std::size_t k = 0;
    for (int layer = 0; layer < spec.d; ++layer) {
        for (int q = 0; q < spec.n; ++q) {
            for (int r = 0; r < per_qubit; ++r) {
                const double angle = theta[k++];
                Mat2 u;
                switch (spec.rotation_set[r]) {
                    case RotationAxis::X:
                        u = gates::rx(angle);
                        break;
                    case RotationAxis::Y:
                        u = gates::ry(angle);
                        break;
                    case RotationAxis::Z:
                        u = gates::rz(angle);
                        break;
                }
                ops.push_back(QubitGateOp{u, q});
            }
        }
        for (const Edge& e : edges) {
            if (spec.entangler == EntanglerKind::CnotChain) {
                ops.push_back(QubitGateOp{gates::hadamard(), e.second});
                ops.push_back(LeakyCzOp{e.first, e.second});
                ops.push_back(QubitGateOp{gates::hadamard(), e.second});
            } else {
                ops.push_back(LeakyCzOp{e.first, e.second});
            }
        }
    }
    return ops;
}

QutritState run_circuit(const AnsatzSpec& spec, std::span<const double> theta,
                        const LeakyCZParams& cz, const QutritState& initial) {
    if (initial.n != spec.n) throw std::invalid_argument("initial state size mismatch");
    const std::vector<GateOp> ops = build_circuit(spec, theta);
    const Mat9 cz_matrix = build_leaky_cz(cz);
    QutritState state = initial;
    for (const GateOp& op : ops) {
        if (const auto* g = std::get_if<QubitGateOp>(&op)) {
            apply_qubit_gate(state, g->u, g->site);
        } else {
            const auto& c = std::get<LeakyCzOp>(op);
            apply_two_site(state, cz_matrix, c.control, c.target);
        }
    }
    return state;
}

QutritState plus_state(int n) {
    QutritState s = QutritState::zero(n);
    for (int q = 0; q < n; ++q) apply_qubit_gate(s, gates::hadamard(), q);
    return s;
}

const char* to_string(Topology t) {
    switch (t) {
        case Topology::Chain:
            return "chain";
        case Topology::Ladder:
            return "ladder";
        case Topology::Lattice:
            return "lattice";
    }
    return "?";
}

const char* to_string(EntanglerKind e) {
    return e == EntanglerKind::CnotChain ? "cnot_chain" : "cz_topology";
}

}  // namespace leaky
