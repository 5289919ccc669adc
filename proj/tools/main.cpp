#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "contactdg/ensemble.hpp"
#include "contactdg/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Structure-preserving simulation of isolated thermodynamic systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool strict = false;
    std::uint64_t seed = 1;
    bool corrupt_matrix = false;
    std::vector<std::string> batch_paths;

    auto* run = app.add_subcommand("run", "Run one experiment described by a config file");
    run->add_option("--config", config_path, "Experiment config path")->required();
    run->add_option("--out", out_dir, "Directory for CSV/JSON/summary artifacts");
    run->add_flag("--strict", strict, "Exit nonzero when a law audit fails");

    auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suites");
    selftest->add_option("--seed", seed, "Seed for the randomized property suites");
    selftest
        ->add_flag("--corrupt-structure-matrix", corrupt_matrix,
                   "Fault-injection hook: corrupt a matrix copy to exercise the skew check")
        ->group("");  // test hook, hidden from --help

    auto* batch = app.add_subcommand("batch", "Run several configs, concurrently when possible");
    batch->add_option("configs", batch_paths, "Config paths")->required()->expected(-1);
    batch->add_option("--out", out_dir, "Directory for all artifacts");
    batch->add_flag("--strict", strict, "Exit nonzero when any law audit fails");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        std::string message;
        const int code = contactdg::run_config_file(config_path, out_dir, strict, std::cout, message);
        if (code != contactdg::kExitOk) std::cerr << "error: " << message << "\n";
        return code;
    }

    if (selftest->parsed()) {
        contactdg::SelftestOptions opt;
        opt.seed = seed;
        opt.corrupt_structure_matrix = corrupt_matrix;
        const auto results = contactdg::run_selftest(opt);
        for (const auto& r : results) {
            if (r.pass)
                std::cout << r.name << ": pass\n";
            else
                std::cout << r.name << ": FAIL (" << r.detail << ")\n";
        }
        return contactdg::selftest_exit_code(results);
    }

    const auto items = contactdg::run_batch(batch_paths, out_dir, strict);
    int worst = contactdg::kExitOk;
    for (const auto& item : items) {
        std::cout << item.config_path << ": "
                  << (item.exit_code == contactdg::kExitOk ? "ok" : item.message) << "\n";
        worst = std::max(worst, item.exit_code);
    }
    return worst;
}
