#pragma once

#include "leaky/ansatz.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace leaky {

enum class ExperimentKind { Expressibility, Fit, Iris, Topology };

enum class RunMode { Desk, Paper };

// Parse failure with the offending line number.
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& what_)
        : std::runtime_error("config line " + std::to_string(line_) + ": " + what_),
          line(line_) {}
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Expressibility;
    RunMode mode = RunMode::Desk;
    std::vector<int> n_values;
    std::vector<int> d_values;
    std::vector<double> l_values;
    double beta = 0.0;
    double phi = 0.0;
    std::size_t samples = 0;  // Expr2 sample-set size N
    int reps = 0;
    int epochs = 0;  // fit/iris training length
    std::uint64_t seed = 1;
    int jobs = 0;  // 0 = hardware concurrency
    std::string out_dir = "results";
    std::string dataset = "data/iris.csv";
    std::string dump_samples;  // optional sample-set CSV path

    EntanglerKind entangler = EntanglerKind::CnotChain;
    Topology topology = Topology::Chain;
    int rows = 0, cols = 0;

    AnsatzSpec ansatz(int n, int d) const;
};

// Geometric L grid; defaults give ratio 10^0.2 between consecutive values.
std::vector<double> l_grid(double min = 1.25e-4, double max = 1.25e-2, int points = 11);

// Parses the key = value config format; unknown keys, bad ranges and 4L > 1
// are rejected with line-precise messages. `mode_override` replaces the
// config's mode before defaults are resolved.
ExperimentConfig parse_config(std::istream& in,
                              std::optional<RunMode> mode_override = std::nullopt);
ExperimentConfig parse_config_file(const std::string& path,
                                   std::optional<RunMode> mode_override = std::nullopt);

const char* to_string(ExperimentKind k);
const char* to_string(RunMode m);

// Round-trip of the ansatz-shaped keys (entangler/topology/rows/cols),
// used by the manifest and by config serialization tests.
std::string ansatz_config_block(const AnsatzSpec& spec);
AnsatzSpec ansatz_from_config_block(const std::string& block);

}  // namespace leaky
