#pragma once

#include "leaky/config.hpp"
#include "leaky/sweep.hpp"
#include "leaky/table.hpp"

#include <string>

namespace leaky {

// d-vs-L colored grid for the rows of `table` with the given n, with a
// color legend and per-cell value annotations. Throws if the slice is not
// present.
std::string heatmap_svg(const Table& table, int n_slice, const std::string& value_column);
void emit_heatmap(const Table& table, int n_slice, const std::string& value_column,
                  const std::string& path);

// Fig-style training curve: log10 of the mean loss per epoch, one polyline
// per arm.
std::string loss_curve_svg(const LossCurve& curve);
void emit_loss_curve(const LossCurve& curve, const std::string& path);

Table loss_curves_table(const std::vector<LossCurve>& curves);

// Plain-text run manifest: tool version, config hash, seed, mode, jobs.
void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    const std::string& config_text);

}  // namespace leaky
