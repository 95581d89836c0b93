#include "leaky/ansatz.hpp"

#include "qubit_oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>
#include <set>

using namespace leaky;

namespace {

int count_cz(const std::vector<GateOp>& ops) {
    int c = 0;
    for (const auto& op : ops)
        if (std::holds_alternative<LeakyCzOp>(op)) ++c;
    return c;
}

int count_hadamard(const std::vector<GateOp>& ops) {
    int c = 0;
    for (const auto& op : ops) {
        const auto* g = std::get_if<QubitGateOp>(&op);
        if (g && (g->u - gates::hadamard()).cwiseAbs().maxCoeff() < 1e-15) ++c;
    }
    return c;
}

std::set<Edge> edge_set(const std::vector<Edge>& edges) {
    std::set<Edge> s;
    for (const Edge& e : edges) {
        const Edge norm = e.first < e.second ? e : Edge{e.second, e.first};
        CHECK(s.insert(norm).second);  // each undirected pair once
    }
    return s;
}

}  // namespace

TEST_CASE("topology edge sets") {
    SUBCASE("chain") {
        CHECK(edges_chain(2) == std::vector<Edge>{{0, 1}});
        CHECK(edges_chain(3) == std::vector<Edge>{{0, 1}, {1, 2}});
        CHECK(edges_chain(9).size() == 8);
        CHECK_THROWS_AS(edges_chain(1), std::invalid_argument);
    }
    SUBCASE("ladder") {
        CHECK(edges_ladder(4).size() == 4);   // 2x2 grid
        CHECK(edges_ladder(6).size() == 7);   // 2x3 grid
        CHECK(edges_ladder(9).size() == 11);  // rows of 5 and 4
        CHECK_THROWS_AS(edges_ladder(3), std::invalid_argument);
        // n = 4 explicitly: rails (0,1), (2,3); rungs (0,2), (1,3).
        const auto e4 = edge_set(edges_ladder(4));
        CHECK(e4 == std::set<Edge>{{0, 1}, {2, 3}, {0, 2}, {1, 3}});
    }
    SUBCASE("lattice") {
        CHECK(edges_lattice(3, 3).size() == 12);
        AnsatzSpec mismatched;
        mismatched.n = 2;
        mismatched.entangler = EntanglerKind::CzTopology;
        mismatched.topology = Topology::Lattice;
        mismatched.rows = 3;
        mismatched.cols = 3;
        CHECK_THROWS_AS(mismatched.entangling_edges(), std::invalid_argument);
    }
    SUBCASE("degenerate lattices match chain and ladder") {
        CHECK(edge_set(edges_lattice(1, 5)) == edge_set(edges_chain(5)));
        CHECK(edge_set(edges_lattice(2, 4)) == edge_set(edges_ladder(8)));
    }
    SUBCASE("all edges in bounds") {
        for (int n : {4, 6, 9}) {
            for (const auto& edges : {edges_chain(n), edges_ladder(n)}) {
                for (const Edge& e : edges) {
                    CHECK(e.first >= 0);
                    CHECK(e.second < n);
                    CHECK(e.first != e.second);
                }
            }
        }
    }
}

TEST_CASE("circuit construction") {
    SUBCASE("n=2 d=1 CNOT chain structure") {
        AnsatzSpec spec;
        spec.n = 2;
        spec.d = 1;
        CHECK(spec.param_count() == 4);
        const std::vector<double> theta{0.1, 0.2, 0.3, 0.4};
        const auto ops = build_circuit(spec, theta);
        REQUIRE(ops.size() == 7);  // Rz,Ry q0; Rz,Ry q1; H q1; CZ; H q1
        const auto* r0 = std::get_if<QubitGateOp>(&ops[0]);
        REQUIRE(r0);
        CHECK(r0->site == 0);
        CHECK((r0->u - gates::rz(0.1)).cwiseAbs().maxCoeff() < 1e-15);
        const auto* r1 = std::get_if<QubitGateOp>(&ops[1]);
        CHECK((r1->u - gates::ry(0.2)).cwiseAbs().maxCoeff() < 1e-15);
        const auto* h0 = std::get_if<QubitGateOp>(&ops[4]);
        REQUIRE(h0);
        CHECK(h0->site == 1);
        CHECK((h0->u - gates::hadamard()).cwiseAbs().maxCoeff() < 1e-15);
        const auto* cz = std::get_if<LeakyCzOp>(&ops[5]);
        REQUIRE(cz);
        CHECK(cz->control == 0);
        CHECK(cz->target == 1);
    }
    SUBCASE("gate counts per layer") {
        for (int n : {3, 5, 6}) {
            AnsatzSpec spec;
            spec.n = n;
            spec.d = 4;
            const std::vector<double> theta(spec.param_count(), 0.0);
            const auto ops = build_circuit(spec, theta);
            CHECK(count_cz(ops) == spec.d * (n - 1));
            CHECK(count_hadamard(ops) == spec.d * 2 * (n - 1));
        }
    }
    SUBCASE("lattice topology parameter and gate counts") {
        AnsatzSpec spec;
        spec.n = 9;
        spec.d = 5;
        spec.entangler = EntanglerKind::CzTopology;
        spec.topology = Topology::Lattice;
        spec.rows = 3;
        spec.cols = 3;
        CHECK(spec.param_count() == 90);
        const std::vector<double> theta(90, 0.0);
        const auto ops = build_circuit(spec, theta);
        CHECK(count_cz(ops) == 60);
        CHECK(count_hadamard(ops) == 0);
    }
    SUBCASE("entangling order is even pairs then odd pairs") {
        const auto ordered = entangling_order(edges_chain(5));
        CHECK(ordered ==
              std::vector<Edge>{{0, 1}, {2, 3}, {1, 2}, {3, 4}});
    }
    SUBCASE("parameter count mismatch rejected") {
        AnsatzSpec spec;
        spec.n = 2;
        spec.d = 2;
        CHECK_THROWS_AS(build_circuit(spec, std::vector<double>(7)), std::invalid_argument);
    }
    SUBCASE("parameter count formula over the grid") {
        for (int n = 2; n <= 6; ++n)
            for (int d = 1; d <= 6; ++d) {
                AnsatzSpec spec;
                spec.n = n;
                spec.d = d;
                CHECK(spec.param_count() == 2 * n * d);
            }
    }
}

TEST_CASE("circuit execution") {
    SUBCASE("theta = 0, L = 0 fixes |0...0>") {
        AnsatzSpec spec;
        spec.n = 3;
        spec.d = 2;
        const std::vector<double> theta(spec.param_count(), 0.0);
        const QutritState out = run_circuit(spec, theta, {0.0, 0.0}, QutritState::zero(3));
        CHECK(std::abs(out.amp[0]) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("plus state preparation") {
        const QutritState plus = plus_state(2);
        for (int i : {0, 1, 3, 4})
            CHECK(std::abs(plus.amp[i] - cx{0.5, 0.0}) < 1e-15);
        CHECK(plus.leak_population() == 0.0);
    }
    SUBCASE("leak population is exactly zero at L = 0") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        AnsatzSpec spec;
        spec.n = 3;
        spec.d = 3;
        std::vector<double> theta(spec.param_count());
        for (double& t : theta) t = angle(rng);
        const QutritState out = run_circuit(spec, theta, {0.0, 0.0}, plus_state(3));
        CHECK(out.leak_population() == 0.0);
    }
    SUBCASE("L = 0 runs match the qubit oracle from |+>^n") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        for (int n = 2; n <= 4; ++n) {
            AnsatzSpec spec;
            spec.n = n;
            spec.d = 3;
            std::vector<double> theta(spec.param_count());
            for (double& t : theta) t = angle(rng);
            const QutritState out = run_circuit(spec, theta, {0.0, 0.0}, plus_state(n));
            const PopulationVector read = misread(n, qutrit_populations(out), {0.0});
            const auto ref = oracle::probabilities(
                oracle::run_gates(build_circuit(spec, theta), oracle::plus_state(n)));
            for (std::size_t b = 0; b < ref.size(); ++b)
                CHECK(read.p[b] == doctest::Approx(ref[b]).epsilon(1e-10));
        }
    }
    SUBCASE("leaky runs populate the leak subspace") {
        AnsatzSpec spec;
        spec.n = 2;
        spec.d = 2;
        const std::vector<double> theta(spec.param_count(), 0.7);
        const QutritState out = run_circuit(spec, theta, {0.0125, 0.0}, plus_state(2));
        CHECK(out.leak_population() > 0.0);
        CHECK(std::abs(out.norm_sq() - 1.0) < 1e-12);
    }
}
