#pragma once

#include <string>

#include "contactdg/diagnostics.hpp"
#include "contactdg/integrators.hpp"

namespace contactdg::io {

/// Shortest round-trip decimal form, 17 significant digits, locale-free.
std::string format_double(double v);

/**
 * CSV with header "t,<component names>,H,S_total,T_1[,T_2]" and one row per
 * trajectory state. Byte-identical across runs for identical inputs.
 */
std::string trajectory_csv(const Trajectory& traj);

/// Law audit as a JSON document (includes residual and temperature series).
std::string law_report_json(const LawReport& report, const std::string& model_name,
                            const std::string& method_label);

void write_file(const std::string& path, const std::string& content);

}  // namespace contactdg::io
