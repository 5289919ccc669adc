#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifdef __unix__
#include <sys/wait.h>
#endif

// Drives the installed binary exactly the way a user would: through argv,
// exit codes, and the files it leaves behind.

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

int decode_system_status(int status) {
#ifdef __unix__
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
#else
    return status;
#endif
}

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path capture = fs::path("cli_test_artifacts") / ("capture_" + std::to_string(counter++) + ".txt");
    fs::create_directories(capture.parent_path());
    const std::string cmd =
        std::string(CLI_BINARY_PATH) + " " + args + " > " + capture.string() + " 2>&1";
    CliResult r;
    r.exit_code = decode_system_status(std::system(cmd.c_str()));
    std::ifstream in(capture);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

std::string config_path(const std::string& name) {
    return (fs::path(CONFIG_DIR) / name).string();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "missing file: ", path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        REQUIRE_MESSAGE(false, "no column named ", name);
        return -1;
    }
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    REQUIRE(std::getline(in, line));
    std::istringstream head(line);
    std::string cell;
    while (std::getline(head, cell, ',')) csv.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        REQUIRE(row.size() == csv.header.size());
        csv.rows.push_back(row);
    }
    return csv;
}

fs::path fresh_dir(const std::string& leaf) {
    fs::path dir = fs::path("cli_test_artifacts") / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("run: oscillator config conserves energy and writes all artifacts") {
    const fs::path dir = fresh_dir("fig1");
    const CliResult r =
        run_cli("run --config " + config_path("fig1_dho.cfg") + " --out " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "first law: pass"));
    CHECK(contains(r.output, "second law: pass"));
    CHECK(contains(r.output, "status: completed"));

    const std::string text = slurp(dir / "fig1_dho_trajectory.csv");
    const Csv csv = parse_csv(text);
    CHECK(csv.header == std::vector<std::string>{"t", "q1", "p1", "S1", "H", "S_total", "T_1"});
    REQUIRE(csv.rows.size() == 501);

    const int h_col = csv.column("H");
    const int s_col = csv.column("S_total");
    double max_drift = 0.0;
    double min_increment = 1e300;
    for (std::size_t k = 0; k < csv.rows.size(); ++k) {
        max_drift = std::max(max_drift, std::abs(csv.rows[k][h_col] - 50.0));
        if (k > 0) min_increment = std::min(min_increment, csv.rows[k][s_col] - csv.rows[k - 1][s_col]);
    }
    CHECK(max_drift <= 1e-9);
    CHECK(min_increment >= -1e-12);

    CHECK(contains(slurp(dir / "fig1_dho_laws.json"), "\"first_law_pass\": true"));
    CHECK(contains(slurp(dir / "fig1_dho_summary.txt"), "model: damped_harmonic_oscillator"));
}

TEST_CASE("run: thermal pair equilibrates with monotone entropy") {
    const fs::path dir = fresh_dir("fig3");
    const CliResult r =
        run_cli("run --config " + config_path("fig3_particles.cfg") + " --out " + dir.string());
    CHECK(r.exit_code == 0);

    const Csv csv = parse_csv(slurp(dir / "fig3_particles_trajectory.csv"));
    CHECK(csv.header ==
          std::vector<std::string>{"t", "S1", "S2", "H", "S_total", "T_1", "T_2"});
    const int s_col = csv.column("S_total");
    const int t1_col = csv.column("T_1");
    const int t2_col = csv.column("T_2");
    for (std::size_t k = 1; k < csv.rows.size(); ++k) {
        CHECK(csv.rows[k][s_col] - csv.rows[k - 1][s_col] >= -1e-12);
        const double gap_prev = std::abs(csv.rows[k - 1][t1_col] - csv.rows[k - 1][t2_col]);
        const double gap = std::abs(csv.rows[k][t1_col] - csv.rows[k][t2_col]);
        CHECK(gap <= gap_prev + 1e-12);
    }
    // Equal capacities and exact discrete energy conservation pin the final
    // temperature at the arithmetic mean; the gap itself decays like e^-2t.
    CHECK(csv.rows.back()[t1_col] == doctest::Approx(286.575).epsilon(1e-9));
    CHECK(csv.rows.back()[t2_col] == doctest::Approx(286.575).epsilon(1e-9));
}

TEST_CASE("run: variational config reports its entropy dips honestly") {
    const fs::path dir = fresh_dir("fig5");
    const std::string base_args =
        "run --config " + config_path("fig5_herglotz.cfg") + " --out " + dir.string();

    // Without --strict the run completes and the audit verdict lives in the
    // artifacts; with --strict the failed second-law audit becomes the exit
    // code. The dips are a property of the scheme, not a solver fault.
    const CliResult relaxed = run_cli(base_args);
    CHECK(relaxed.exit_code == 0);
    CHECK(contains(relaxed.output, "second law: FAIL"));
    CHECK(contains(slurp(dir / "fig5_herglotz_laws.json"), "\"second_law_pass\": false"));
    CHECK(contains(slurp(dir / "fig5_herglotz_laws.json"), "\"first_law_pass\": false"));

    const CliResult strict = run_cli(base_args + " --strict");
    CHECK(strict.exit_code == 4);
    CHECK(contains(strict.output, "error: law audit failure"));
}

TEST_CASE("run: config problems exit with code 2 and a useful message") {
    const fs::path dir = fresh_dir("badcfg");
    const fs::path bad = dir / "bad.cfg";
    std::ofstream(bad) << "[model]\nname = damped_harmonic_oscillator\n";  // gamma missing

    const CliResult parse = run_cli("run --config " + bad.string() + " --out " + dir.string());
    CHECK(parse.exit_code == 2);
    CHECK(contains(parse.output, "error: missing required key 'gamma' in [model]"));

    const CliResult absent =
        run_cli("run --config " + (dir / "nope.cfg").string() + " --out " + dir.string());
    CHECK(absent.exit_code == 2);
    CHECK(contains(absent.output, "cannot open config file"));
}

TEST_CASE("run: reruns of the same config are byte-identical") {
    const fs::path dir_a = fresh_dir("repeat_a");
    const fs::path dir_b = fresh_dir("repeat_b");
    CHECK(run_cli("run --config " + config_path("fig3_particles.cfg") + " --out " + dir_a.string())
              .exit_code == 0);
    CHECK(run_cli("run --config " + config_path("fig3_particles.cfg") + " --out " + dir_b.string())
              .exit_code == 0);
    CHECK(slurp(dir_a / "fig3_particles_trajectory.csv") ==
          slurp(dir_b / "fig3_particles_trajectory.csv"));
    CHECK(slurp(dir_a / "fig3_particles_laws.json") == slurp(dir_b / "fig3_particles_laws.json"));
}

TEST_CASE("selftest: all suites pass and the fault hook is observable") {
    const CliResult ok = run_cli("selftest");
    CHECK(ok.exit_code == 0);
    for (const char* suite :
         {"field_identities", "bracket_decomposition", "projector_identities",
          "discrete_gradient_identities", "structure_matrix_skew", "entropy_increment_identity"})
        CHECK_MESSAGE(contains(ok.output, std::string(suite) + ": pass"), ok.output);

    CHECK(run_cli("selftest --seed 7").exit_code == 0);

    const CliResult corrupt = run_cli("selftest --corrupt-structure-matrix");
    CHECK(corrupt.exit_code == 1);
    CHECK(contains(corrupt.output, "structure_matrix_skew: FAIL"));
    CHECK(contains(corrupt.output, "skew-symmetry violated"));
}

TEST_CASE("batch: reports per-config results and the worst exit code") {
    const fs::path dir = fresh_dir("batch");
    const fs::path broken = dir / "broken.cfg";
    std::ofstream(broken) << "[model]\nname = nonsense\n";

    const CliResult r = run_cli("batch " + config_path("fig1_dho.cfg") + " " + broken.string() +
                                " --out " + dir.string());
    CHECK(r.exit_code == 2);
    CHECK(contains(r.output, "fig1_dho.cfg: ok"));
    CHECK(contains(r.output, "unknown model name 'nonsense'"));
    CHECK(fs::exists(dir / "fig1_dho_trajectory.csv"));
}

TEST_CASE("argument errors and help do not collide with tool exit codes") {
    const CliResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(contains(help.output, "Usage"));
    CHECK(contains(help.output, "selftest"));

    const CliResult missing = run_cli("run");
    CHECK(missing.exit_code != 0);
    CHECK(missing.exit_code != 2);
    CHECK(missing.exit_code != 3);
    CHECK(missing.exit_code != 4);
}
