#include "contactdg/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace contactdg::io {

std::string format_double(double v) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    for (const auto& name : traj.layout.component_names()) out += "," + name;
    out += ",H,S_total";
    for (int a = 0; a < traj.layout.subsystems(); ++a)
        out += ",T_" + std::to_string(a + 1);
    out += "\n";

    for (int k = 0; k < traj.size(); ++k) {
        out += format_double(traj.times[k]);
        for (double c : traj.states[k]) out += "," + format_double(c);
        out += "," + format_double(traj.energy[k]);
        out += "," + format_double(traj.total_entropy[k]);
        for (double t : traj.temperatures[k]) out += "," + format_double(t);
        out += "\n";
    }
    return out;
}

std::string law_report_json(const LawReport& report, const std::string& model_name,
                            const std::string& method_label) {
    nlohmann::json j;
    j["model"] = model_name;
    j["method"] = method_label;
    j["tolerances"] = {{"energy", report.tol_energy}, {"entropy", report.tol_entropy}};
    j["energy_reference"] = report.energy_reference;
    j["max_energy_drift"] = report.max_energy_drift;
    j["min_entropy_increment"] = report.min_entropy_increment;
    j["max_first_law_residual"] = report.max_first_law_residual;
    j["first_law_residual"] = report.first_law_residual;
    j["temperature_series"] = report.temperature_series;
    j["first_law_pass"] = report.first_law_pass;
    j["second_law_pass"] = report.second_law_pass;
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace contactdg::io
