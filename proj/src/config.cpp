#include "leaky/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace leaky {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(line, "expected an integer, got '" + s + "'");
    }
}

double parse_double(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(line, "expected a number, got '" + s + "'");
    }
}

std::uint64_t parse_u64(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(line, "expected an unsigned integer, got '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep)) parts.push_back(trim(cur));
    return parts;
}

// "a:b" inclusive range or comma list.
std::vector<int> parse_int_list(const std::string& s, int line) {
    std::vector<int> out;
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 2) throw ConfigError(line, "range must be start:end");
        const int a = parse_int(parts[0], line);
        const int b = parse_int(parts[1], line);
        if (b < a) throw ConfigError(line, "range end before start");
        for (int v = a; v <= b; ++v) out.push_back(v);
    } else {
        for (const auto& part : split(s, ',')) out.push_back(parse_int(part, line));
    }
    if (out.empty()) throw ConfigError(line, "empty list");
    return out;
}

std::vector<double> parse_l_values(const std::string& s, int line) {
    if (s == "grid") return l_grid();
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_double(part, line));
    if (out.empty()) throw ConfigError(line, "empty list");
    return out;
}

}  // namespace

std::vector<double> l_grid(double min, double max, int points) {
    if (min <= 0.0 || max <= 0.0) throw std::invalid_argument("L grid bounds must be positive");
    if (min >= max) throw std::invalid_argument("L grid needs min < max");
    if (points < 2) throw std::invalid_argument("L grid needs at least 2 points");
    std::vector<double> values(static_cast<std::size_t>(points));
    const double step = std::log10(max / min) / (points - 1);
    for (int i = 0; i < points; ++i) values[i] = min * std::pow(10.0, step * i);
    values.front() = min;
    values.back() = max;
    return values;
}

AnsatzSpec ExperimentConfig::ansatz(int n, int d) const {
    AnsatzSpec spec;
    spec.n = n;
    spec.d = d;
    spec.entangler = entangler;
    spec.topology = topology;
    spec.rows = rows;
    spec.cols = cols;
    return spec;
}

ExperimentConfig parse_config(std::istream& in, std::optional<RunMode> mode_override) {
    ExperimentConfig cfg;
    std::map<std::string, int> seen;  // key -> line, for duplicate detection
    bool has_experiment = false;
    bool has_samples = false, has_reps = false, has_epochs = false;
    bool has_n = false, has_d = false, has_l = false;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string text = raw;
        if (const auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, "missing key");
        if (value.empty()) throw ConfigError(line, "missing value for '" + key + "'");
        if (const auto prev = seen.find(key); prev != seen.end())
            throw ConfigError(line, "duplicate key '" + key + "' (first on line " +
                                        std::to_string(prev->second) + ")");
        seen[key] = line;

        if (key == "experiment") {
            if (value == "expressibility")
                cfg.experiment = ExperimentKind::Expressibility;
            else if (value == "fit")
                cfg.experiment = ExperimentKind::Fit;
            else if (value == "iris")
                cfg.experiment = ExperimentKind::Iris;
            else if (value == "topology")
                cfg.experiment = ExperimentKind::Topology;
            else
                throw ConfigError(line, "unknown experiment '" + value + "'");
            has_experiment = true;
        } else if (key == "mode") {
            if (value == "desk")
                cfg.mode = RunMode::Desk;
            else if (value == "paper")
                cfg.mode = RunMode::Paper;
            else
                throw ConfigError(line, "mode must be desk or paper");
        } else if (key == "n") {
            cfg.n_values = parse_int_list(value, line);
            has_n = true;
        } else if (key == "d") {
            cfg.d_values = parse_int_list(value, line);
            has_d = true;
        } else if (key == "L") {
            cfg.l_values = parse_l_values(value, line);
            for (double l : cfg.l_values)
                if (l < 0.0 || 4.0 * l > 1.0)
                    throw ConfigError(line, "L values must satisfy 0 <= 4L <= 1");
            has_l = true;
        } else if (key == "beta") {
            cfg.beta = parse_double(value, line);
            if (cfg.beta < 0.0 || cfg.beta > 1.0)
                throw ConfigError(line, "beta must lie in [0, 1]");
        } else if (key == "phi") {
            cfg.phi = parse_double(value, line);
        } else if (key == "samples") {
            const int v = parse_int(value, line);
            if (v < 1) throw ConfigError(line, "samples must be positive");
            cfg.samples = static_cast<std::size_t>(v);
            has_samples = true;
        } else if (key == "reps") {
            cfg.reps = parse_int(value, line);
            if (cfg.reps < 1) throw ConfigError(line, "reps must be at least 1");
            has_reps = true;
        } else if (key == "epochs") {
            cfg.epochs = parse_int(value, line);
            if (cfg.epochs < 1) throw ConfigError(line, "epochs must be positive");
            has_epochs = true;
        } else if (key == "seed") {
            cfg.seed = parse_u64(value, line);
        } else if (key == "jobs") {
            cfg.jobs = parse_int(value, line);
            if (cfg.jobs < 0) throw ConfigError(line, "jobs must be nonnegative");
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "dataset") {
            cfg.dataset = value;
        } else if (key == "dump_samples") {
            cfg.dump_samples = value;
        } else if (key == "entangler") {
            if (value == "cnot_chain") {
                cfg.entangler = EntanglerKind::CnotChain;
            } else if (value == "cz_chain") {
                cfg.entangler = EntanglerKind::CzTopology;
                cfg.topology = Topology::Chain;
            } else if (value == "cz_ladder") {
                cfg.entangler = EntanglerKind::CzTopology;
                cfg.topology = Topology::Ladder;
            } else if (value == "cz_lattice") {
                cfg.entangler = EntanglerKind::CzTopology;
                cfg.topology = Topology::Lattice;
            } else {
                throw ConfigError(line, "unknown entangler '" + value + "'");
            }
        } else if (key == "rows") {
            cfg.rows = parse_int(value, line);
        } else if (key == "cols") {
            cfg.cols = parse_int(value, line);
        } else {
            throw ConfigError(line, "unknown key '" + key + "'");
        }
    }

    if (!has_experiment) throw ConfigError(line, "missing required key 'experiment'");
    if (mode_override) cfg.mode = *mode_override;

    const bool paper = cfg.mode == RunMode::Paper;
    if (!has_samples) cfg.samples = paper ? 10000 : 2000;
    switch (cfg.experiment) {
        case ExperimentKind::Expressibility:
            if (!has_n) cfg.n_values = {2, 3, 4, 5, 6};
            if (!has_d) cfg.d_values = {1, 2, 3, 4, 5, 6};
            if (!has_l) cfg.l_values = l_grid();
            if (!has_reps) cfg.reps = paper ? 20 : 5;
            break;
        case ExperimentKind::Fit:
            if (!has_n) cfg.n_values = {2, 3, 4, 5, 6};
            if (!has_d) cfg.d_values = {1, 2, 3, 4, 5, 6};
            if (!has_l) cfg.l_values = l_grid();
            if (!has_reps) cfg.reps = paper ? 100 : 20;
            if (!has_epochs) cfg.epochs = 200;
            break;
        case ExperimentKind::Iris:
            if (!has_n) cfg.n_values = {2};
            if (cfg.n_values != std::vector<int>{2})
                throw ConfigError(seen.count("n") ? seen["n"] : line,
                                  "the iris experiment runs on n = 2");
            if (!has_d) cfg.d_values = {1, 2, 3, 4, 5, 6};
            if (!has_l) cfg.l_values = l_grid();
            if (!has_reps) cfg.reps = paper ? 100 : 20;
            if (!has_epochs) cfg.epochs = 100;
            break;
        case ExperimentKind::Topology:
            if (!has_n) cfg.n_values = {9};
            if (cfg.n_values != std::vector<int>{9})
                throw ConfigError(seen.count("n") ? seen["n"] : line,
                                  "the topology experiment runs on n = 9 (3x3 lattice)");
            if (!has_d) cfg.d_values = {5};
            if (cfg.d_values.size() != 1)
                throw ConfigError(seen.count("d") ? seen["d"] : line,
                                  "the topology experiment uses a single depth");
            if (!has_l) cfg.l_values = {1.25e-3};
            if (cfg.l_values.size() != 1)
                throw ConfigError(seen.count("L") ? seen["L"] : line,
                                  "the topology experiment uses a single leaky L");
            if (!has_reps) cfg.reps = paper ? 20 : 5;
            break;
    }
    if (cfg.n_values.empty() || cfg.d_values.empty() || cfg.l_values.empty())
        throw ConfigError(line, "grids must be nonempty");
    for (int n : cfg.n_values)
        if (n < 2 || n > 12) throw ConfigError(line, "n must lie in [2, 12]");
    for (int d : cfg.d_values)
        if (d < 0) throw ConfigError(line, "d must be nonnegative");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path, std::optional<RunMode> mode_override) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(f, mode_override);
}

const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Expressibility:
            return "expressibility";
        case ExperimentKind::Fit:
            return "fit";
        case ExperimentKind::Iris:
            return "iris";
        case ExperimentKind::Topology:
            return "topology";
    }
    return "?";
}

const char* to_string(RunMode m) { return m == RunMode::Desk ? "desk" : "paper"; }

std::string ansatz_config_block(const AnsatzSpec& spec) {
    std::ostringstream out;
    out << "n = " << spec.n << "\n";
    out << "d = " << spec.d << "\n";
    if (spec.entangler == EntanglerKind::CnotChain) {
        out << "entangler = cnot_chain\n";
    } else {
        out << "entangler = cz_" << to_string(spec.topology) << "\n";
        if (spec.topology == Topology::Lattice)
            out << "rows = " << spec.rows << "\ncols = " << spec.cols << "\n";
    }
    return out.str();
}

AnsatzSpec ansatz_from_config_block(const std::string& block) {
    std::istringstream in("experiment = expressibility\n" + block);
    const ExperimentConfig cfg = parse_config(in);
    if (cfg.n_values.size() != 1 || cfg.d_values.size() != 1)
        throw std::invalid_argument("ansatz block must have scalar n and d");
    return cfg.ansatz(cfg.n_values[0], cfg.d_values[0]);
}

}  // namespace leaky
