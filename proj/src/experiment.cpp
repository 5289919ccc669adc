#include "contactdg/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "contactdg/geom_core.hpp"
#include "contactdg/io.hpp"

namespace contactdg {

// ---------------------------------------------------------------------------
// config parsing

namespace {

struct RawEntry {
    int line = 0;
    std::string value;
    bool used = false;
};

using RawSections = std::map<std::string, std::map<std::string, RawEntry>>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

RawSections tokenize_config(const std::string& text) {
    RawSections sections;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                fail_line(line_no, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail_line(line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail_line(line_no, "empty key");
        if (value.empty()) fail_line(line_no, "empty value for key '" + key + "'");
        if (section.empty()) fail_line(line_no, "key '" + key + "' appears before any [section]");
        auto [it, inserted] = sections[section].emplace(key, RawEntry{line_no, value, false});
        if (!inserted)
            fail_line(line_no, "duplicate key '" + key + "' in [" + section + "] (first at line " +
                                   std::to_string(it->second.line) + ")");
    }
    return sections;
}

double parse_number(const std::string& token, int line) {
    double v = 0.0;
    const char* b = token.data();
    const char* e = b + token.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        fail_line(line, "cannot parse number '" + token + "'");
    return v;
}

std::vector<double> parse_number_list(const std::string& value, int line) {
    std::vector<double> out;
    std::string token;
    std::istringstream in(value);
    std::string cleaned = value;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream words(cleaned);
    while (words >> token) out.push_back(parse_number(token, line));
    if (out.empty()) fail_line(line, "empty number list");
    return out;
}

/// Typed access over the raw sections; tracks which keys were consumed so
/// that leftovers can be reported with their line numbers.
class Fields {
public:
    explicit Fields(RawSections sections) : sections_(std::move(sections)) {}

    bool present(const std::string& sec, const std::string& key) const {
        auto s = sections_.find(sec);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    int line_of(const std::string& sec, const std::string& key) const {
        return sections_.at(sec).at(key).line;
    }

    std::string str(const std::string& sec, const std::string& key) {
        return fetch(sec, key).value;
    }
    std::string str_or(const std::string& sec, const std::string& key, const std::string& def) {
        return present(sec, key) ? str(sec, key) : def;
    }

    double num(const std::string& sec, const std::string& key) {
        RawEntry& e = fetch(sec, key);
        return parse_number(e.value, e.line);
    }
    double num_or(const std::string& sec, const std::string& key, double def) {
        return present(sec, key) ? num(sec, key) : def;
    }

    int integer(const std::string& sec, const std::string& key) {
        RawEntry& e = fetch(sec, key);
        const double v = parse_number(e.value, e.line);
        if (v != std::floor(v) || std::abs(v) > 1e9) fail_line(e.line, "'" + key + "' must be an integer");
        return static_cast<int>(v);
    }
    int integer_or(const std::string& sec, const std::string& key, int def) {
        return present(sec, key) ? integer(sec, key) : def;
    }

    std::vector<double> list(const std::string& sec, const std::string& key) {
        RawEntry& e = fetch(sec, key);
        return parse_number_list(e.value, e.line);
    }

    [[noreturn]] void missing(const std::string& sec, const std::string& key) {
        throw ConfigError("missing required key '" + key + "' in [" + sec + "]");
    }

    void finish() const {
        for (const auto& [sec, entries] : sections_)
            for (const auto& [key, entry] : entries)
                if (!entry.used)
                    fail_line(entry.line, "unknown key '" + key + "' in [" + sec + "]");
    }

private:
    RawEntry& fetch(const std::string& sec, const std::string& key) {
        auto s = sections_.find(sec);
        if (s == sections_.end() || s->second.find(key) == s->second.end()) missing(sec, key);
        RawEntry& e = s->second.at(key);
        e.used = true;
        return e;
    }

    RawSections sections_;
};

bool is_simple_model(const std::string& name) {
    return name == "damped_system" || name == "damped_harmonic_oscillator";
}

void read_model_section(Fields& f, ExperimentConfig& cfg) {
    if (!f.present("model", "name")) f.missing("model", "name");
    cfg.model_name = f.str("model", "name");
    auto& p = cfg.model_params;
    if (cfg.model_name == "damped_system") {
        p["gamma"] = f.num("model", "gamma");
        p["mass"] = f.num_or("model", "mass", 1.0);
        p["k_spring"] = f.num_or("model", "k_spring", 1.0);
    } else if (cfg.model_name == "damped_harmonic_oscillator") {
        p["gamma"] = f.num("model", "gamma");
    } else if (cfg.model_name == "thermo_particles") {
        p["c_a"] = f.num("model", "c_a");
        p["c_b"] = f.num("model", "c_b");
        p["k"] = f.num("model", "k");
    } else if (cfg.model_name == "thermo_springs") {
        p["m_a"] = f.num("model", "m_a");
        p["m_b"] = f.num("model", "m_b");
        p["c_a"] = f.num("model", "c_a");
        p["c_b"] = f.num("model", "c_b");
        p["k"] = f.num("model", "k");
        p["k_spring"] = f.num_or("model", "k_spring", 1.0);
    } else if (cfg.model_name == "quadratic_composed") {
        p["t_ref_a"] = f.num("model", "t_ref_a");
        p["t_ref_b"] = f.num("model", "t_ref_b");
        p["c_a"] = f.num("model", "c_a");
        p["c_b"] = f.num("model", "c_b");
        p["k"] = f.num("model", "k");
    } else {
        fail_line(f.line_of("model", "name"), "unknown model name '" + cfg.model_name + "'");
    }
}

void read_initial_section(Fields& f, ExperimentConfig& cfg) {
    auto& init = cfg.initial;
    auto take_list = [&](const char* key) { init[key] = f.list("initial", key); };
    auto take_scalar = [&](const char* key) {
        auto v = f.list("initial", key);
        if (v.size() != 1) fail_line(f.line_of("initial", key), std::string(key) + " must be a single number");
        init[key] = v;
    };
    auto take_thermal_pair = [&]() {
        const bool has_s = f.present("initial", "S_a") || f.present("initial", "S_b");
        const bool has_t = f.present("initial", "T_a") || f.present("initial", "T_b");
        if (has_s == has_t)
            throw ConfigError("[initial] needs either S_a/S_b or T_a/T_b, not both or neither");
        take_scalar(has_s ? "S_a" : "T_a");
        take_scalar(has_s ? "S_b" : "T_b");
    };

    if (is_simple_model(cfg.model_name)) {
        if (cfg.method == "herglotz") {
            take_list("q0");
            take_list("q1");
            take_scalar("S");
            if (init["q0"].size() != init["q1"].size())
                throw ConfigError("[initial] q0 and q1 must have the same length");
        } else {
            take_list("q");
            take_list("p");
            take_scalar("S");
            if (init["q"].size() != init["p"].size())
                throw ConfigError("[initial] q and p must have the same length");
        }
        const std::size_t n = init.count("q") ? init["q"].size() : init["q0"].size();
        if (cfg.model_name == "damped_harmonic_oscillator" && n != 1)
            throw ConfigError("damped_harmonic_oscillator is one-dimensional");
    } else if (cfg.model_name == "thermo_particles") {
        take_thermal_pair();
    } else {
        take_list("q_a");
        take_list("p_a");
        take_list("q_b");
        take_list("p_b");
        take_thermal_pair();
        if (init["q_a"].size() != init["p_a"].size() || init["q_b"].size() != init["p_b"].size())
            throw ConfigError("[initial] q/p lists must match in length per subsystem");
        if (cfg.model_name == "thermo_springs" && init["q_a"].size() != init["q_b"].size())
            throw ConfigError("the spring coupling needs equal mechanical dimensions");
        if (cfg.model_name == "quadratic_composed" &&
            (init["q_a"].size() != 1 || init["q_b"].size() != 1))
            throw ConfigError("quadratic_composed is one-dimensional per subsystem");
    }
}

void read_run_and_output(Fields& f, ExperimentConfig& cfg) {
    cfg.method = f.str_or("run", "method", cfg.method);
    try {
        (void)method_from_name(cfg.method);
    } catch (const std::invalid_argument& e) {
        if (f.present("run", "method")) fail_line(f.line_of("run", "method"), e.what());
        throw ConfigError(e.what());
    }
    cfg.h = f.num_or("run", "h", cfg.h);
    cfg.n_steps = f.integer_or("run", "n_steps", cfg.n_steps);
    cfg.solver = f.str_or("run", "solver", cfg.solver);
    cfg.tol_solve = f.num_or("run", "tol_solve", cfg.tol_solve);
    cfg.max_iter = f.integer_or("run", "max_iter", cfg.max_iter);
    cfg.tol_energy = f.num_or("run", "tol_energy", cfg.tol_energy);
    cfg.tol_entropy = f.num_or("run", "tol_entropy", cfg.tol_entropy);
    cfg.prefix = f.str_or("output", "prefix", cfg.prefix);

    if (!(cfg.h > 0.0)) throw ConfigError("[run] h must be positive");
    if (cfg.n_steps < 0) throw ConfigError("[run] n_steps must be nonnegative");
    if (!(cfg.tol_solve > 0.0)) throw ConfigError("[run] tol_solve must be positive");
    if (cfg.max_iter < 1) throw ConfigError("[run] max_iter must be at least 1");
    if (cfg.solver != "fixed_point" && cfg.solver != "newton")
        throw ConfigError("[run] solver must be fixed_point or newton");
    if (cfg.prefix.find('/') != std::string::npos || cfg.prefix.find("..") != std::string::npos)
        throw ConfigError("[output] prefix must be a plain file name fragment");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    Fields f(tokenize_config(text));
    ExperimentConfig cfg;
    read_model_section(f, cfg);
    // The method decides the [initial] key schema, so peek at it first.
    if (f.present("run", "method")) cfg.method = f.str("run", "method");
    read_initial_section(f, cfg);
    read_run_and_output(f, cfg);
    f.finish();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

// ---------------------------------------------------------------------------
// experiment assembly and execution

namespace {

double thermal_entropy(const ExperimentConfig& cfg, const char* which) {
    // which is "a" or "b"; accepts S_x directly or converts a temperature.
    const std::string s_key = std::string("S_") + which;
    const std::string t_key = std::string("T_") + which;
    const double c = cfg.model_params.at(std::string("c_") + which);
    if (cfg.initial.count(s_key)) return cfg.initial.at(s_key)[0];
    const double T = cfg.initial.at(t_key)[0];
    if (cfg.model_name == "quadratic_composed") {
        // T = t_ref + S/c, affine rather than exponential.
        return c * (T - cfg.model_params.at(std::string("t_ref_") + which));
    }
    return entropy_for_temperature(c, T);
}

}  // namespace

BuiltExperiment build_experiment(const ExperimentConfig& cfg) {
    BuiltExperiment built;
    const auto& p = cfg.model_params;
    const auto& init = cfg.initial;

    if (cfg.model_name == "damped_system") {
        const auto& q = init.count("q") ? init.at("q") : init.at("q0");
        const int n = static_cast<int>(q.size());
        built.model = damped_system(p.at("mass"), p.at("gamma"), n,
                                    harmonic_potential(p.at("k_spring"), n));
    } else if (cfg.model_name == "damped_harmonic_oscillator") {
        built.model = damped_harmonic_oscillator(p.at("gamma"));
    } else if (cfg.model_name == "thermo_particles") {
        built.model = thermo_particles(p.at("c_a"), p.at("c_b"), p.at("k"));
    } else if (cfg.model_name == "thermo_springs") {
        const int n = static_cast<int>(init.at("q_a").size());
        const double ks = p.at("k_spring");
        Potential V;  // coupling spring between the two blocks
        V.value = [ks, n](const Vec& q) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d = q[i] - q[n + i];
                s += d * d;
            }
            return 0.5 * ks * s;
        };
        V.grad = [ks, n](const Vec& q) {
            Vec g(q.size(), 0.0);
            for (int i = 0; i < n; ++i) {
                const double d = ks * (q[i] - q[n + i]);
                g[i] = d;
                g[n + i] = -d;
            }
            return g;
        };
        built.model = thermo_springs(p.at("m_a"), p.at("m_b"), p.at("c_a"), p.at("c_b"),
                                     p.at("k"), n, n, V);
    } else if (cfg.model_name == "quadratic_composed") {
        built.model = quadratic_composed_system(p.at("t_ref_a"), p.at("t_ref_b"), p.at("c_a"),
                                                p.at("c_b"), p.at("k"));
    } else {
        throw ConfigError("unknown model name '" + cfg.model_name + "'");
    }

    built.method = method_from_name(cfg.method);
    built.stepper.h = cfg.h;
    built.stepper.solver = cfg.solver == "newton" ? SolverKind::Newton : SolverKind::FixedPoint;
    built.stepper.tol_solve = cfg.tol_solve;
    built.stepper.max_iter = cfg.max_iter;
    built.n_steps = cfg.n_steps;

    const StateLayout& lay = built.model.layout;
    built.x0.assign(lay.dim(), 0.0);

    if (lay.subsystems() == 1) {
        const int n = lay.n_mech[0];
        if (built.method.family == MethodFamily::Herglotz) {
            const auto& q0 = init.at("q0");
            const auto& q1 = init.at("q1");
            const double mass =
                cfg.model_name == "damped_harmonic_oscillator" ? 1.0 : p.at("mass");
            for (int i = 0; i < n; ++i) {
                built.x0[lay.q_index(0, i)] = q0[i];
                built.x0[lay.p_index(0, i)] = mass * (q1[i] - q0[i]) / cfg.h;
            }
            built.x0[lay.s_index(0)] = init.at("S")[0];
            built.herglotz_q1 = Vec(q1);
        } else {
            for (int i = 0; i < n; ++i) {
                built.x0[lay.q_index(0, i)] = init.at("q")[i];
                built.x0[lay.p_index(0, i)] = init.at("p")[i];
            }
            built.x0[lay.s_index(0)] = init.at("S")[0];
        }
    } else {
        const char* subs[2] = {"a", "b"};
        for (int a = 0; a < 2; ++a) {
            for (int i = 0; i < lay.n_mech[a]; ++i) {
                built.x0[lay.q_index(a, i)] = init.at(std::string("q_") + subs[a])[i];
                built.x0[lay.p_index(a, i)] = init.at(std::string("p_") + subs[a])[i];
            }
            built.x0[lay.s_index(a)] = thermal_entropy(cfg, subs[a]);
        }
    }
    return built;
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, bool strict,
                   std::ostream& log) {
    BuiltExperiment built = build_experiment(cfg);
    Trajectory traj = simulate(built.model, built.method, built.x0, built.stepper, built.n_steps,
                               built.herglotz_q1);
    LawReport report = audit_laws(traj, built.model, cfg.tol_energy, cfg.tol_entropy);

    std::filesystem::create_directories(out_dir);
    const std::string base = out_dir + "/" + cfg.prefix;
    io::write_file(base + "_trajectory.csv", io::trajectory_csv(traj));
    io::write_file(base + "_laws.json", io::law_report_json(report, built.model.name, cfg.method));

    std::string summary;
    summary += "model: " + built.model.name + "\n";
    summary += "method: " + cfg.method + "\n";
    summary += "steps: " + std::to_string(cfg.n_steps) + " (h = " + io::format_double(cfg.h) +
               "), rows: " + std::to_string(traj.size()) + "\n";
    summary += "H(x0) = " + io::format_double(report.energy_reference) + "\n";
    summary += "max |H - H(x0)| = " + io::format_double(report.max_energy_drift) + "\n";
    summary += "min entropy increment = " + io::format_double(report.min_entropy_increment) + "\n";
    summary += std::string("first law: ") + (report.first_law_pass ? "pass" : "FAIL") +
               " (tol " + io::format_double(report.tol_energy) + ")\n";
    summary += std::string("second law: ") + (report.second_law_pass ? "pass" : "FAIL") +
               " (tol " + io::format_double(report.tol_entropy) + ")\n";
    if (traj.failure) {
        summary += "status: step " + std::to_string(traj.failure->step) +
                   " failed: " + traj.failure->message + "\n";
    } else {
        summary += "status: completed\n";
    }
    io::write_file(base + "_summary.txt", summary);
    log << summary;

    if (traj.failure) return kExitStepFailure;
    if (strict && (!report.first_law_pass || !report.second_law_pass)) return kExitLawFailure;
    return kExitOk;
}

int run_config_file(const std::string& path, const std::string& out_dir, bool strict,
                    std::ostream& log, std::string& message) {
    try {
        ExperimentConfig cfg = parse_config_file(path);
        const int code = run_experiment(cfg, out_dir, strict, log);
        message = code == kExitOk           ? "ok"
                  : code == kExitStepFailure ? "step failure"
                                             : "law audit failure";
        return code;
    } catch (const ConfigError& e) {
        message = e.what();
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        message = e.what();
        return kExitConfigError;
    } catch (const std::exception& e) {
        message = e.what();
        return kExitStepFailure;
    }
}

std::vector<BatchItem> run_batch(const std::vector<std::string>& config_paths,
                                 const std::string& out_dir, bool strict) {
    const int count = static_cast<int>(config_paths.size());
    std::vector<BatchItem> items(config_paths.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < count; ++i) {
        items[i].config_path = config_paths[i];
        std::ostringstream sink;
        items[i].exit_code =
            run_config_file(config_paths[i], out_dir, strict, sink, items[i].message);
    }
    return items;
}

// ---------------------------------------------------------------------------
// selftest

namespace {

struct Rng {
    std::mt19937_64 engine;
    std::uniform_real_distribution<double> unit{-1.0, 1.0};
    double sym() { return unit(engine); }                   // [-1, 1]
    double pos(double lo, double hi) { return lo + (hi - lo) * 0.5 * (sym() + 1.0); }
};

Vec random_state(Rng& rng, int dim, double amplitude = 1.0) {
    Vec x(dim);
    for (double& v : x) v = amplitude * rng.sym();
    return x;
}

/// Cubic polynomial with pairwise couplings; gradient is analytic so all
/// identity checks are free of differentiation error.
ScalarField random_cubic_field(Rng& rng, int dim) {
    Vec a(dim), b(dim), c(dim);
    std::vector<double> w(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) {
        a[i] = rng.sym();
        b[i] = rng.sym();
        c[i] = rng.sym();
        for (int j = i + 1; j < dim; ++j) w[static_cast<std::size_t>(i) * dim + j] = rng.sym();
    }
    const double c0 = rng.sym();
    ScalarField f;
    f.value = [=](const Vec& x) {
        double v = c0;
        for (int i = 0; i < dim; ++i) {
            v += a[i] * x[i] + b[i] * x[i] * x[i] + c[i] * x[i] * x[i] * x[i];
            for (int j = i + 1; j < dim; ++j) v += w[static_cast<std::size_t>(i) * dim + j] * x[i] * x[j];
        }
        return v;
    };
    f.grad = [=](const Vec& x) {
        Covector g(dim, 0.0);
        // g[j] accumulates cross terms from earlier rows, so only add here.
        for (int i = 0; i < dim; ++i) {
            g[i] += a[i] + 2.0 * b[i] * x[i] + 3.0 * c[i] * x[i] * x[i];
            for (int j = i + 1; j < dim; ++j) {
                g[i] += w[static_cast<std::size_t>(i) * dim + j] * x[j];
                g[j] += w[static_cast<std::size_t>(i) * dim + j] * x[i];
            }
        }
        return g;
    };
    return f;
}

std::string describe(const char* identity, double err, int trial) {
    return std::string(identity) + " violated: |error| = " + io::format_double(err) +
           " at trial " + std::to_string(trial);
}

SuiteResult suite_field_identities(Rng& rng) {
    SuiteResult r{"field_identities", true, ""};
    for (int trial = 0; trial < 200 && r.pass; ++trial) {
        const int n = 1 + trial % 3;
        const int dim = 2 * n + 1;
        Vec x = random_state(rng, dim);
        ScalarField H = random_cubic_field(rng, dim);
        const double Hx = H(x);
        Covector g = H.gradient(x);
        const double scale = (1.0 + std::abs(Hx) + norm_inf(g)) * (1.0 + norm_inf(x));
        const double tol = 1e-12 * scale;

        Tangent E = geom::evolution_vf(H, x);
        Tangent X = geom::hamiltonian_vf(H, x);
        Tangent R = geom::reeb(x);

        auto check = [&](const char* what, double err) {
            if (r.pass && std::abs(err) > tol) r = {r.name, false, describe(what, err, trial)};
        };
        check("eta(evolution field) = 0", geom::contact_form(x, E));
        check("eta(hamiltonian field) = -H", geom::contact_form(x, X) + Hx);
        check("evolution field conserves H", dot(g, E));
        check("hamiltonian field dissipates H at rate -dH/dS * H", dot(g, X) + g[dim - 1] * Hx);
        for (int i = 0; i < dim && r.pass; ++i)
            check("evolution = hamiltonian + H * reeb", E[i] - X[i] - Hx * R[i]);
    }
    return r;
}

SuiteResult suite_bracket_decomposition(Rng& rng) {
    SuiteResult r{"bracket_decomposition", true, ""};
    using geom::BracketKind;
    for (int trial = 0; trial < 200 && r.pass; ++trial) {
        const int n = 1 + trial % 3;
        const int dim = 2 * n + 1;
        Vec x = random_state(rng, dim);
        ScalarField f = random_cubic_field(rng, dim);
        ScalarField g = random_cubic_field(rng, dim);
        const double scale =
            (1.0 + std::abs(f(x)) + std::abs(g(x)) + norm_inf(f.gradient(x)) +
             norm_inf(g.gradient(x))) *
            (1.0 + norm_inf(x)) * (1.0 + norm_inf(x));
        const double tol = 1e-12 * scale;

        const double cartan = geom::bracket(BracketKind::Cartan, f, g, x);
        const double poisson = geom::bracket(BracketKind::Poisson0, f, g, x);
        const double dq = geom::bracket(BracketKind::DeltaQ, f, g, x);
        if (std::abs(cartan - poisson - dq) > tol) {
            r = {r.name, false, describe("cartan = poisson + thermal part", cartan - poisson - dq, trial)};
            break;
        }
        for (auto kind : {BracketKind::Jacobi, BracketKind::Cartan, BracketKind::Poisson0,
                          BracketKind::DeltaQ}) {
            const double fg = geom::bracket(kind, f, g, x);
            const double gf = geom::bracket(kind, g, f, x);
            if (std::abs(fg + gf) > tol) {
                r = {r.name, false, describe("bracket skew-symmetry", fg + gf, trial)};
                break;
            }
        }
    }
    return r;
}

SuiteResult suite_projector_identities(Rng& rng) {
    SuiteResult r{"projector_identities", true, ""};
    for (int trial = 0; trial < 200 && r.pass; ++trial) {
        const int n = 1 + trial % 3;
        const int dim = 2 * n + 1;
        Vec x = random_state(rng, dim);
        Tangent v = random_state(rng, dim);
        const double scale = (1.0 + norm_inf(v)) * (1.0 + norm_inf(x));
        const double tol = 1e-12 * scale;

        Tangent h = geom::project(x, v, geom::Projection::Horizontal);
        Tangent w = geom::project(x, v, geom::Projection::Vertical);
        Tangent hh = geom::project(x, h, geom::Projection::Horizontal);
        Tangent ww = geom::project(x, w, geom::Projection::Vertical);
        auto check = [&](const char* what, double err) {
            if (r.pass && std::abs(err) > tol) r = {r.name, false, describe(what, err, trial)};
        };
        for (int i = 0; i < dim && r.pass; ++i) {
            check("projectors sum to identity", h[i] + w[i] - v[i]);
            check("horizontal projector is idempotent", hh[i] - h[i]);
            check("vertical projector is idempotent", ww[i] - w[i]);
        }
        check("horizontal part lies in ker eta", geom::contact_form(x, h));
    }
    return r;
}

SuiteResult suite_discrete_gradient_identities(Rng& rng) {
    SuiteResult r{"discrete_gradient_identities", true, ""};
    for (int trial = 0; trial < 200 && r.pass; ++trial) {
        const int dim = 2 + trial % 4;
        Vec x = random_state(rng, dim);
        Vec xp = random_state(rng, dim);
        ScalarField H = random_cubic_field(rng, dim);
        const double dH = H(xp) - H(x);
        const double scale = 1.0 + std::abs(H(x)) + std::abs(H(xp));
        for (auto kind : {DiscreteGradientKind::MeanValue, DiscreteGradientKind::Midpoint,
                          DiscreteGradientKind::CoordinateIncrement}) {
            Covector gbar = discrete_gradient(kind, H, x, xp);
            double lhs = 0.0;
            for (int i = 0; i < dim; ++i) lhs += gbar[i] * (xp[i] - x[i]);
            if (std::abs(lhs - dH) > 1e-10 * scale) {
                r = {r.name, false,
                     describe(("energy identity, rule " + discrete_gradient_kind_name(kind)).c_str(),
                              lhs - dH, trial)};
                break;
            }
            Covector at_x = discrete_gradient(kind, H, x, x);
            Covector exact = H.gradient(x);
            for (int i = 0; i < dim; ++i) {
                if (std::abs(at_x[i] - exact[i]) > 1e-10 * (1.0 + norm_inf(exact))) {
                    r = {r.name, false,
                         describe(("consistency at coincident points, rule " +
                                   discrete_gradient_kind_name(kind))
                                      .c_str(),
                                  at_x[i] - exact[i], trial)};
                    break;
                }
            }
            if (!r.pass) break;
        }
    }
    return r;
}

SuiteResult suite_structure_matrix_skew(Rng& rng, bool corrupt) {
    SuiteResult r{"structure_matrix_skew", true, ""};
    for (int trial = 0; trial < 100 && r.pass; ++trial) {
        ModelSpec model;
        Vec x;
        if (trial % 2 == 0) {
            model = damped_harmonic_oscillator(rng.pos(0.05, 1.0));
            x = random_state(rng, 3, 2.0);
        } else {
            model = thermo_particles(rng.pos(0.5, 2.0), rng.pos(0.5, 2.0), rng.pos(0.5, 2.0));
            x = random_state(rng, 2, 1.0);
        }
        StructureMatrix A = structure_matrix(model, x);
        const int d = A.dim();
        std::vector<double> M(static_cast<std::size_t>(d) * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) M[static_cast<std::size_t>(i) * d + j] = A(i, j);
        if (corrupt) M[1] += 1e-3;  // break the (0,1)/(1,0) mirror pair

        for (int i = 0; i < d && r.pass; ++i)
            for (int j = 0; j < d; ++j) {
                const double sum =
                    M[static_cast<std::size_t>(i) * d + j] + M[static_cast<std::size_t>(j) * d + i];
                if (std::abs(sum) > 1e-15 * (1.0 + norm_inf(x))) {
                    r = {r.name, false,
                         "skew-symmetry violated at entry (" + std::to_string(i) + "," +
                             std::to_string(j) + "): A_ij + A_ji = " + io::format_double(sum) +
                             " for model " + model.name};
                    break;
                }
            }
    }
    return r;
}

SuiteResult suite_entropy_increment_identity(Rng& rng) {
    SuiteResult r{"entropy_increment_identity", true, ""};
    StepperConfig cfg;
    cfg.h = 0.05;
    cfg.tol_solve = 1e-13;
    for (int trial = 0; trial < 100 && r.pass; ++trial) {
        ModelSpec model = quadratic_composed_system(rng.pos(1.0, 3.0), rng.pos(1.0, 3.0),
                                                    rng.pos(0.5, 2.0), rng.pos(0.5, 2.0),
                                                    rng.pos(0.5, 2.0));
        Vec x(6);
        for (int i = 0; i < 6; ++i) x[i] = 0.4 * rng.sym();
        Vec xp = dg_step(model, DiscreteGradientKind::Midpoint, x, cfg);
        const double actual = (xp[2] + xp[5]) - (x[2] + x[5]);
        const double expected = predicted_entropy_increment(model, x, xp, cfg.h);
        if (std::abs(actual - expected) > 1e-10 * (1.0 + std::abs(expected))) {
            r = {r.name, false,
                 describe("two-component entropy increment identity", actual - expected, trial)};
        }
    }
    return r;
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt) {
    Rng rng;
    rng.engine.seed(opt.seed);
    std::vector<SuiteResult> results;
    results.push_back(suite_field_identities(rng));
    results.push_back(suite_bracket_decomposition(rng));
    results.push_back(suite_projector_identities(rng));
    results.push_back(suite_discrete_gradient_identities(rng));
    results.push_back(suite_structure_matrix_skew(rng, opt.corrupt_structure_matrix));
    results.push_back(suite_entropy_increment_identity(rng));
    return results;
}

int selftest_exit_code(const std::vector<SuiteResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return 1;
    return 0;
}

}  // namespace contactdg
