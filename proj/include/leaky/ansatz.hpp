#pragma once

#include "leaky/simulator.hpp"

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Hardware-efficient layered circuits: trainable Ry/Rz rotations on every
// qubit alternating with a fixed entangling layer, either CNOTs along a
// chain (CNOT = (I x H) CZ (I x H)) or bare CZs on a topology's
// nearest-neighbor edges.

namespace leaky {

using Edge = std::pair<int, int>;

enum class Topology { Chain, Ladder, Lattice };
enum class EntanglerKind { CnotChain, CzTopology };
enum class RotationAxis { X, Y, Z };

struct AnsatzSpec {
    int n = 2;  // qubit count
    int d = 1;  // layers
    // Rz then Ry on every qubit: phase spread followed by amplitude mixing.
    // With the opposite order, shallow leaky circuits score *higher* Expr2
    // than noiseless ones, inverting the expected degradation sign.
    std::vector<RotationAxis> rotation_set{RotationAxis::Z, RotationAxis::Y};
    EntanglerKind entangler = EntanglerKind::CnotChain;
    Topology topology = Topology::Chain;
    int rows = 0, cols = 0;  // lattice shape (rows*cols == n)

    int param_count() const;
    // Undirected nearest-neighbor edges of the declared topology, each pair
    // once, (low, high) order.
    std::vector<Edge> entangling_edges() const;
};

std::vector<Edge> edges_chain(int n);
// Two rows of ceil(n/2) and floor(n/2) qubits, numbered row-major; rail
// edges along each row plus rungs between vertically adjacent pairs.
std::vector<Edge> edges_ladder(int n);
std::vector<Edge> edges_lattice(int rows, int cols);

struct QubitGateOp {
    Mat2 u;
    int site = 0;
};
struct LeakyCzOp {
    int control = 0, target = 0;
};
using GateOp = std::variant<QubitGateOp, LeakyCzOp>;

// Expands spec + parameters into the gate list. Per layer: Ry(theta),
// Rz(theta') on every qubit, then the entangling layer with edges emitted
// even-first (edges whose first endpoint is even) then odd, in construction
// order within each group.
std::vector<GateOp> build_circuit(const AnsatzSpec& spec, std::span<const double> theta);

// Orders a topology's edges for emission in an entangling layer.
std::vector<Edge> entangling_order(const std::vector<Edge>& edges);

QutritState run_circuit(const AnsatzSpec& spec, std::span<const double> theta,
                        const LeakyCZParams& cz, const QutritState& initial);

// |+>^n, prepared by a Hadamard on every qubit of |0...0>.
QutritState plus_state(int n);

const char* to_string(Topology t);
const char* to_string(EntanglerKind e);

}  // namespace leaky
