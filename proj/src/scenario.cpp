#include "kdv5/scenario.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "kdv5/control_ops.hpp"
#include "kdv5/random_field.hpp"
#include "kdv5/verify.hpp"
#include "kdv5/version.hpp"

namespace kdv5 {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

namespace {

SpectralField build_field(const ScenarioConfig::DataCfg& d, const PeriodicGrid& grid,
                          unsigned long long seed) {
    SpectralField f(grid);
    if (!d.modes.empty()) {
        for (const auto& row : d.modes) {
            const int k = static_cast<int>(std::llround(row[0]));
            if (std::abs(k) > grid.n_modes())
                throw ConfigError("config: data mode |k| exceeds grid.K");
            f.at(k) += cdouble(row[1], row[2]);
        }
        f.symmetrize();
        return f;
    }
    if (d.name == "sine") {
        f.at(d.k) = cdouble(0.0, -0.5 * d.amplitude);
        f.at(-d.k) = cdouble(0.0, 0.5 * d.amplitude);
    } else if (d.name == "cosine") {
        f.at(d.k) = cdouble(0.5 * d.amplitude, 0.0);
        f.at(-d.k) = cdouble(0.5 * d.amplitude, 0.0);
    } else if (d.name == "two_mode") {
        f.at(d.k) = cdouble(0.0, -0.5 * d.amplitude);
        f.at(-d.k) = cdouble(0.0, 0.5 * d.amplitude);
        const int k2 = std::min(d.k + 1, grid.n_modes());
        f.at(k2) += cdouble(0.25 * d.amplitude, 0.0);
        f.at(-k2) += cdouble(0.25 * d.amplitude, 0.0);
    } else if (d.name == "random") {
        std::mt19937_64 rng(seed);
        f = random_field(grid, rng, 2.0, 0, d.amplitude);
    }
    return f;
}

struct Emitter {
    fs::path dir;
    bool csv = true;
    bool json_fmt = true;
    std::vector<std::string> written;

    std::ofstream open(const std::string& name) {
        const fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw IoError("cannot open output file: " + p.string());
        written.push_back(name);
        return out;
    }
};

void write_trajectory_csv(Emitter& em, const Trajectory& traj, const ScenarioConfig& cfg) {
    if (!em.csv) return;
    auto out = em.open("trajectory.csv");
    const PeriodicGrid& grid = traj.grid();
    out << "t";
    if (cfg.output.trajectory_kind == "physical") {
        for (int j = 0; j < grid.n_points(); ++j) out << ",u" << j;
    } else {
        for (int k = 0; k <= grid.n_modes(); ++k) out << ",abs_u" << k;
    }
    out << "\n";
    for (int n = 0; n < traj.size(); n += cfg.output.stride) {
        out << fmt_g17(n * traj.dt());
        if (cfg.output.trajectory_kind == "physical") {
            for (double v : to_physical(traj[n])) out << "," << fmt_g17(v);
        } else {
            for (int k = 0; k <= grid.n_modes(); ++k)
                out << "," << fmt_g17(std::abs(traj[n].at(k)));
        }
        out << "\n";
    }
}

void write_norms_csv(Emitter& em, const Trajectory& traj, const ScenarioConfig& cfg) {
    if (!em.csv) return;
    auto out = em.open("norms.csv");
    out << "t";
    for (double s : cfg.output.norms_s) out << ",h" << s;
    out << ",mean\n";
    for (int n = 0; n < traj.size(); n += cfg.output.stride) {
        out << fmt_g17(n * traj.dt());
        const SpectralField centered = project_mean_zero(traj[n]);
        for (double s : cfg.output.norms_s) out << "," << fmt_g17(sobolev_norm(centered, s));
        out << "," << fmt_g17(mean(traj[n])) << "\n";
    }
}

void write_json_file(Emitter& em, const std::string& name, const json& j) {
    if (!em.json_fmt) return;
    auto out = em.open(name);
    out << j.dump(2) << "\n";
}

json ledger_json(const LedgerReport& rep) {
    json j;
    for (const auto& [k, v] : rep.terms) j[k] = v;
    j["residual"] = rep.residual;
    return j;
}

LinearModel build_linear_model(const ScenarioConfig& cfg, const PeriodicGrid& grid) {
    ControlProfile profile = cfg.profile.uniform
                                 ? make_uniform_profile(grid)
                                 : make_profile(grid, cfg.profile.center, cfg.profile.radius);
    LinearModel m(std::move(profile));
    m.eps = cfg.model.eps;
    m.beta0 = cfg.model.beta0;
    m.beta1 = cfg.model.beta1;
    m.order_l = cfg.model.l;
    m.feedback_on = cfg.model.feedback;
    return m;
}

NonlinearModel build_nonlinear_model(const ScenarioConfig& cfg, const PeriodicGrid& grid) {
    NonlinearModel m(build_linear_model(cfg, grid));
    m.c0 = cfg.model.c0;
    m.c1 = cfg.model.c1;
    m.c2 = cfg.model.c2;
    m.c3 = cfg.model.c3;
    m.hierarchy_term = cfg.model.hierarchy;
    return m;
}

void run_simulate_or_stabilize(const ScenarioConfig& cfg, Emitter& em, bool stabilize) {
    const PeriodicGrid grid(cfg.grid.K, cfg.grid.n_points);
    NonlinearModel model = build_nonlinear_model(cfg, grid);
    const SpectralField u0 = build_field(cfg.initial_data, grid, cfg.run.seed);
    RunDiagnostics diag;
    NonlinearOptions nopts;
    nopts.guard_s = cfg.run.s;
    Trajectory traj = evolve_nonlinear(model, u0, cfg.run.T, cfg.run.dt, nopts, &diag);
    if (diag.small_data_warning)
        std::cerr << "warning: initial data exceeds the small-data radius "
                  << nopts.small_data_radius << " in H^" << cfg.run.s << "\n";
    write_trajectory_csv(em, traj, cfg);
    write_norms_csv(em, traj, cfg);
    const LedgerReport ledger = energy_ledger(model.linear, traj);
    write_json_file(em, "ledger.json", ledger_json(ledger));
    if (stabilize) {
        const DecayFit fit = fit_decay(traj, cfg.run.s);
        json dj;
        dj["lambda_hat"] = fit.lambda_hat;
        dj["c_hat"] = fit.c_hat;
        dj["conclusive"] = fit.conclusive;
        dj["s"] = cfg.run.s;
        dj["spectral_abscissa"] =
            spectral_abscissa(assemble_generator(model.linear, grid));
        write_json_file(em, "decay.json", dj);
    }
}

void run_control(const ScenarioConfig& cfg, Emitter& em) {
    const PeriodicGrid grid(cfg.grid.K, cfg.grid.n_points);
    const SpectralField v0 = cfg.initial_data.present
                                 ? build_field(cfg.initial_data, grid, cfg.run.seed)
                                 : SpectralField(grid);
    const SpectralField vT = build_field(cfg.target_data, grid, cfg.run.seed + 1);
    if (std::abs(mean(v0)) > 1e-14 || std::abs(mean(vT)) > 1e-14)
        std::cerr << "warning: steering acts on the mean-zero parts; data means are dropped "
                     "(reduce by the mean substitution upstream)\n";
    json rj;
    if (cfg.run.linear) {
        LinearModel model = build_linear_model(cfg, grid);
        LinearControlOptions lopts;
        lopts.threads = cfg.threads;
        const LinearControlResult res = solve_linear_control(
            model, project_mean_zero(v0), project_mean_zero(vT), cfg.run.T, cfg.run.dt,
            cfg.run.s, lopts);
        if (em.csv) {
            write_signal_csv(res.signal, (em.dir / "signal.csv").string());
            em.written.push_back("signal.csv");
        }
        write_trajectory_csv(em, res.resimulated, cfg);
        rj["resimulation_error"] = res.resimulation_error;
        rj["lambda_min"] = res.lambda_min_estimate;
        rj["solver_iterations"] = res.solver_iterations;
        rj["signal_l2h0"] = res.signal.l2hs_norm(0.0);
    } else {
        NonlinearModel model = build_nonlinear_model(cfg, grid);
        NonlinearControlOptions nopts;
        nopts.threads = cfg.threads;
        const NonlinearControlResult res = solve_nonlinear_control(
            model, project_mean_zero(v0), project_mean_zero(vT), cfg.run.T, cfg.run.dt,
            cfg.run.s, cfg.run.tol, nopts);
        if (res.small_data_warning)
            std::cerr << "warning: data exceeds the small-data radius " << nopts.delta << "\n";
        if (em.csv) {
            write_signal_csv(res.signal, (em.dir / "signal.csv").string());
            em.written.push_back("signal.csv");
        }
        write_trajectory_csv(em, res.controlled, cfg);
        std::vector<double> hsq(res.physical_control.size());
        for (size_t i = 0; i < res.physical_control.size(); ++i) {
            const double n = sobolev_norm(res.physical_control[i], cfg.run.s - 1.5);
            hsq[i] = n * n;
        }
        rj["endpoint_error"] = res.endpoint_error;
        rj["iterations"] = res.iterations;
        rj["iterate_distances"] = res.iterate_distances;
        rj["signal_l2hs"] = res.signal.l2hs_norm(cfg.run.s);
        rj["physical_control_l2hs"] = std::sqrt(time_quad(hsq, cfg.run.dt));
    }
    write_json_file(em, "report.json", rj);
}

void run_observability(const ScenarioConfig& cfg, Emitter& em) {
    const PeriodicGrid grid(cfg.grid.K, cfg.grid.n_points);
    LinearModel model = build_linear_model(cfg, grid);
    const ObservabilityReport rep =
        observability_report(model, cfg.run.T, cfg.run.dt, grid, cfg.threads);
    json j;
    j["lambda_min"] = rep.lambda_min;
    j["lambda_max"] = rep.lambda_max;
    j["condition"] = rep.condition;
    j["c_hat"] = rep.c_hat;
    j["worst_mode"] = rep.worst_mode;
    j["symmetry_defect"] = rep.symmetry_defect;
    j["spectrum"] = rep.spectrum;
    write_json_file(em, "observability.json", j);
}

int run_verify(const ScenarioConfig& cfg, Emitter& em) {
    VerifyOptions vopts;
    vopts.K = cfg.grid.K;
    vopts.T = cfg.run.T;
    vopts.dt = cfg.run.dt;
    vopts.s = cfg.run.s;
    vopts.tol = cfg.run.tol;
    vopts.seed = cfg.run.seed ? cfg.run.seed : 12345;
    if (!cfg.profile.uniform) {
        vopts.center = cfg.profile.center;
        vopts.radius = cfg.profile.radius;
    }
    vopts.threads = cfg.threads;
    const auto results = run_verification(vopts);
    json j = json::array();
    int failures = 0;
    for (const auto& r : results) {
        json e;
        e["name"] = r.name;
        e["pass"] = r.pass;
        e["value"] = r.value;
        e["threshold"] = r.threshold;
        j.push_back(e);
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  value=" << fmt_g17(r.value)
                  << "  threshold=" << fmt_g17(r.threshold) << "\n";
        if (!r.pass) ++failures;
    }
    write_json_file(em, "verify.json", j);
    return failures;
}

}  // namespace

void write_signal_csv(const ControlSignal& k, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    const int K = k.grid.n_modes();
    out << "t";
    for (int m = 1; m <= K; ++m) out << ",re_k" << m << ",im_k" << m;
    out << "\n";
    for (int n = 0; n < k.size(); ++n) {
        out << fmt_g17(n * k.dt);
        for (int m = 1; m <= K; ++m)
            out << "," << fmt_g17(k.values[n].at(m).real()) << ","
                << fmt_g17(k.values[n].at(m).imag());
        out << "\n";
    }
}

ControlSignal read_signal_csv(const std::string& path, const PeriodicGrid& grid) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open signal file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("signal file is empty: " + path);
    std::vector<double> times;
    ControlSignal sig(grid, 1.0);
    const int K = grid.n_modes();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        size_t pos = 0;
        while (pos <= line.size()) {
            size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            row.push_back(std::strtod(line.substr(pos, next - pos).c_str(), nullptr));
            pos = next + 1;
        }
        if (static_cast<int>(row.size()) != 1 + 2 * K)
            throw IoError("signal file row width mismatch: " + path);
        times.push_back(row[0]);
        SpectralField f(grid);
        for (int m = 1; m <= K; ++m) {
            f.at(m) = cdouble(row[2 * m - 1], row[2 * m]);
            f.at(-m) = std::conj(f.at(m));
        }
        sig.values.push_back(std::move(f));
    }
    if (times.size() >= 2) sig.dt = times[1] - times[0];
    return sig;
}

int run_scenario(const std::string& config_path, const ScenarioOverrides& overrides) {
    try {
        ScenarioConfig cfg = load_config(config_path);
        if (overrides.command && *overrides.command != cfg.run.command)
            throw ConfigError("config: run.command \"" + cfg.run.command +
                              "\" does not match the CLI subcommand \"" + *overrides.command +
                              "\"");
        if (overrides.out_dir) cfg.output.directory = *overrides.out_dir;
        if (overrides.threads) cfg.threads = *overrides.threads;

        Emitter em;
        em.dir = cfg.output.directory;
        em.csv = std::find(cfg.output.formats.begin(), cfg.output.formats.end(), "csv") !=
                 cfg.output.formats.end();
        em.json_fmt = std::find(cfg.output.formats.begin(), cfg.output.formats.end(), "json") !=
                      cfg.output.formats.end();
        std::error_code ec;
        fs::create_directories(em.dir, ec);
        if (ec) throw IoError("cannot create output directory: " + em.dir.string());

        int verify_failures = 0;
        if (cfg.run.command == "simulate")
            run_simulate_or_stabilize(cfg, em, false);
        else if (cfg.run.command == "stabilize")
            run_simulate_or_stabilize(cfg, em, true);
        else if (cfg.run.command == "control")
            run_control(cfg, em);
        else if (cfg.run.command == "observability")
            run_observability(cfg, em);
        else
            verify_failures = run_verify(cfg, em);

        json manifest;
        manifest["tool"] = "kdv5";
        manifest["version"] = kVersion;
        manifest["command"] = cfg.run.command;
        manifest["config_hash"] = config_hash(cfg);
        manifest["config"] = json::parse(cfg.raw);
        manifest["threads"] = cfg.threads;
        manifest["outputs"] = em.written;
        auto out = em.open("manifest.json");
        out << manifest.dump(2) << "\n";

        if (verify_failures > 0) {
            std::cerr << "verify: " << verify_failures << " check(s) failed\n";
            return kExitNumerical;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const DimensionError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace kdv5
