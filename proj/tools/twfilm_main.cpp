// Command-line front end: solve / phase / verify / sweep.
//
// Exit codes: 0 success, 2 invalid parameters or unreadable input,
// 3 non-convergence, 4 isotherm not admissible for the requested regime,
// 5 verification failure.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "twfilm/closed_form.hpp"
#include "twfilm/phase_plane.hpp"
#include "twfilm/profile_io.hpp"
#include "twfilm/shooting.hpp"
#include "twfilm/surface_tension.hpp"
#include "twfilm/verify.hpp"
#include "twfilm/version.hpp"

namespace {

using namespace twfilm;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitNonCompliant = 4;
constexpr int kExitVerifyFailed = 5;

struct SolveConfig {
    std::string sigma = "szyszkowski:1:1";
    double G = 1.0;
    double D = 1.0;
    double hstar = 1.0;
    double xi_min = -30.0;
    double xi_max = 30.0;
    std::size_t samples = 4001;
    double gamma_anchor = 0.5;
    double tol_bisect = 1e-12;
    double eps_saddle = 1e-3;
    std::string out = "profile.csv";
    std::string meta_out;
};

struct SolveResult {
    Profile profile;
    VerificationReport report;
    bool weak_skipped = false;
};

SolveResult solve_dispatch(const SolveConfig& cfg) {
    SurfaceTension model = SurfaceTension::parse(cfg.sigma);
    RegimeParams params{cfg.G, cfg.D, cfg.hstar};
    params.validate();
    if (!(cfg.xi_min < cfg.xi_max)) throw DomainError("xi_min must be less than xi_max");

    SolveResult res;
    switch (params.regime()) {
        case Regime::G0_D0:
            res.profile = solve_G0_D0(model, params, cfg.xi_min, cfg.xi_max, cfg.samples);
            break;
        case Regime::G0_Dpos:
            res.profile = solve_G0_Dpos(model, params, cfg.gamma_anchor, cfg.xi_min, cfg.xi_max,
                                        cfg.samples);
            break;
        case Regime::Gpos_D0:
            res.profile = solve_Gpos_D0(model, params, cfg.xi_min, cfg.xi_max, cfg.samples);
            break;
        case Regime::Gpos_Dpos: {
            ShootingOptions opts;
            opts.tol_bisect = cfg.tol_bisect;
            opts.eps_saddle = cfg.eps_saddle;
            // The sample window bounds the assembled branches; shooting
            // trials keep their own long span so exits stay classifiable.
            double window = std::max(std::abs(cfg.xi_min), std::abs(cfg.xi_max));
            opts.xi_span_max = std::max(200.0, window);
            opts.min_half_span = std::min(22.0, window);
            opts.sample_spacing =
                (cfg.xi_max - cfg.xi_min) / static_cast<double>(cfg.samples - 1);
            res.profile = heteroclinic(model, params, opts).profile;
            break;
        }
    }

    res.report.ode_residual_max = ode_residual(res.profile, model, params);
    try {
        res.report.weak_residual_max =
            weak_residual(res.profile, model, params, default_bump_battery(res.profile));
    } catch (const DomainError&) {
        res.weak_skipped = true;  // window too small for the battery
    }
    return res;
}

void print_solve_summary(const SolveResult& res) {
    const Profile& p = res.profile;
    const double Hs = p.meta.params.H_star;
    double end_left = std::abs(p.H.front() - 2.0 * Hs) + std::abs(1.0 - p.Gamma.front());
    double end_right = std::abs(p.H.back() - Hs) + p.Gamma.back();
    std::ostringstream line;
    line << "regime=" << regime_name(p.meta.params.regime());
    if (const double* gs = p.meta.find_extra("gamma_star")) {
        line << " gamma_star=" << format_shortest(*gs);
    }
    line << " endpoint_left=" << format_shortest(end_left)
         << " endpoint_right=" << format_shortest(end_right)
         << " ode_residual=" << format_shortest(res.report.ode_residual_max)
         << " weak_residual="
         << (res.weak_skipped ? std::string("skipped")
                              : format_shortest(res.report.weak_residual_max));
    std::cout << line.str() << "\n";
}

std::string derived_path(const std::string& base, const std::string& suffix) {
    auto slash = base.find_last_of('/');
    auto dot = base.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return base + suffix;
    }
    return base.substr(0, dot) + suffix;
}

void write_report_lines(std::ostream& out, const VerificationReport& rep) {
    auto flag = [](bool b) { return b ? "true" : "false"; };
    out << "ode_residual_max: " << format_shortest(rep.ode_residual_max) << '\n';
    out << "weak_residual_max: " << format_shortest(rep.weak_residual_max) << '\n';
    out << "monotone_ok: " << flag(rep.monotone_ok) << '\n';
    out << "bounds_ok: " << flag(rep.bounds_ok) << '\n';
    out << "ode_ok: " << flag(rep.ode_ok) << '\n';
    out << "weak_ok: " << flag(rep.weak_ok) << '\n';
    out << "asymptotics_checked: " << flag(rep.asymptotics_checked) << '\n';
    if (rep.asymptotics_checked) {
        out << "endpoint_left_H: " << format_shortest(rep.asymptotics.end_left_H) << '\n';
        out << "endpoint_left_Gamma: " << format_shortest(rep.asymptotics.end_left_Gamma) << '\n';
        out << "endpoint_right_H: " << format_shortest(rep.asymptotics.end_right_H) << '\n';
        out << "endpoint_right_Gamma: " << format_shortest(rep.asymptotics.end_right_Gamma)
            << '\n';
        out << "endpoints_ok: " << flag(rep.endpoints_ok) << '\n';
        out << "envelope_checked: " << flag(rep.asymptotics.envelope_checked) << '\n';
        if (rep.asymptotics.envelope_checked) {
            out << "envelope_ok: " << flag(rep.asymptotics.envelope_ok) << '\n';
            out << "delta0: " << format_shortest(rep.asymptotics.delta0) << '\n';
        }
    }
    out << "kink_count: " << rep.regularity.kinks.size() << '\n';
    for (std::size_t i = 0; i < rep.regularity.kinks.size(); ++i) {
        const KinkRecord& k = rep.regularity.kinks[i];
        std::string p = "kink_" + std::to_string(i) + "_";
        out << p << "xi: " << format_shortest(k.xi) << '\n';
        out << p << "H_jump: " << format_shortest(k.H_jump) << '\n';
        out << p << "dH_jump: " << format_shortest(k.dH_jump) << '\n';
        out << p << "dGamma_jump: " << format_shortest(k.dGamma_jump) << '\n';
    }
    out << "max_interior_jump: " << format_shortest(rep.regularity.max_interior_jump) << '\n';
    out << "regime_expectation_met: " << flag(rep.regularity.regime_expectation_met) << '\n';
    out << "all_ok: " << flag(rep.all_ok) << '\n';
}

int map_exception() {
    try {
        throw;
    } catch (const ComplianceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonCompliant;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const NoBracketError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const QuadDepthError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what();
        if (e.line > 0) std::cerr << " (line " << e.line << ")";
        std::cerr << "\n";
        return kExitInvalid;
    } catch (const InvariantError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}

int cmd_solve(const SolveConfig& cfg) {
    try {
        SolveResult res = solve_dispatch(cfg);
        write_profile(res.profile, cfg.out, cfg.meta_out);
        print_solve_summary(res);
        return kExitOk;
    } catch (...) {
        return map_exception();
    }
}

struct PhaseConfig {
    std::string sigma = "szyszkowski:1:1";
    double G = 1.0;
    double D = 1.0;
    double hstar = 1.0;
    int grid = 101;
    std::string out = "phase.csv";
    std::string nullcline_out;
    std::string points_out;
};

int cmd_phase(const PhaseConfig& cfg) {
    try {
        SurfaceTension model = SurfaceTension::parse(cfg.sigma);
        RegimeParams params{cfg.G, cfg.D, cfg.hstar};
        params.validate();
        if (!(params.G > 0.0 && params.D > 0.0)) {
            throw DomainError("phase requires G > 0 and D > 0");
        }
        if (cfg.grid < 2) throw DomainError("grid must be at least 2");
        PhaseGeometry geo = select_gamma_bar(model, params);

        const int n = cfg.grid;
        const double Hs = params.H_star;
        {
            std::ofstream out(cfg.out, std::ios::binary);
            if (!out) throw Error("cannot open '" + cfg.out + "' for writing");
            out << "H,Gamma,f1,f2,quadrant\n";
            for (int i = 0; i < n; ++i) {
                double H = Hs + Hs * static_cast<double>(i) / (n - 1);
                for (int j = 1; j <= n; ++j) {
                    double Gm = static_cast<double>(j) / (n + 1);
                    out << format_shortest(H) << ',' << format_shortest(Gm) << ','
                        << format_shortest(f1(model, params, H, Gm)) << ','
                        << format_shortest(f2(model, params, H, Gm)) << ','
                        << quadrant_name(classify_quadrant(geo, params, H, Gm)) << '\n';
                }
            }
        }
        {
            std::string path =
                cfg.nullcline_out.empty() ? derived_path(cfg.out, ".nullcline.csv")
                                          : cfg.nullcline_out;
            std::ofstream out(path, std::ios::binary);
            if (!out) throw Error("cannot open '" + path + "' for writing");
            out << "Gamma,H_c\n";
            for (int j = 0; j < n; ++j) {
                double Gm = 0.005 + (0.995 - 0.005) * static_cast<double>(j) / (n - 1);
                out << format_shortest(Gm) << ','
                    << format_shortest(critical_height(model, params, Gm)) << '\n';
            }
        }
        {
            std::string path = cfg.points_out.empty() ? derived_path(cfg.out, ".points.txt")
                                                      : cfg.points_out;
            double g0s = gamma_0s(model, params, geo, 1e-10);
            ShootingOutcome het = heteroclinic(model, params);
            std::ofstream out(path, std::ios::binary);
            if (!out) throw Error("cannot open '" + path + "' for writing");
            out << "gamma_bar: " << format_shortest(geo.gamma_bar) << '\n';
            out << "H_bar: " << format_shortest(geo.H_bar) << '\n';
            out << "mu: " << format_shortest(geo.mu) << '\n';
            out << "gamma_0s: " << format_shortest(g0s) << '\n';
            out << "gamma_star: " << format_shortest(het.gamma_star) << '\n';
            out << "bracket_lo: " << format_shortest(het.bracket_lo) << '\n';
            out << "bracket_hi: " << format_shortest(het.bracket_hi) << '\n';
        }
        return kExitOk;
    } catch (...) {
        return map_exception();
    }
}

struct VerifyConfig {
    std::string in;
    std::string meta_in;
    std::string out;  // empty: stdout
};

int cmd_verify(const VerifyConfig& cfg) {
    try {
        Profile profile = read_profile(cfg.in, cfg.meta_in);
        if (profile.meta.model_spec.empty()) {
            throw ParseError("profile metadata sidecar with the model spec is required", 0);
        }
        SurfaceTension model = SurfaceTension::parse(profile.meta.model_spec);
        VerificationReport rep = run_verification(profile, model, profile.meta.params);
        if (cfg.out.empty()) {
            write_report_lines(std::cout, rep);
        } else {
            std::ofstream out(cfg.out, std::ios::binary);
            if (!out) throw Error("cannot open '" + cfg.out + "' for writing");
            write_report_lines(out, rep);
        }
        return rep.all_ok ? kExitOk : kExitVerifyFailed;
    } catch (...) {
        return map_exception();
    }
}

struct SweepConfig {
    std::string config_path;
    std::string out_dir = "sweep_out";
};

struct SweepRow {
    std::string sigma;
    double G = 0.0, D = 0.0, hstar = 1.0;
    bool ok = false;
    std::string status;
    std::string gamma_star = "";
    std::string end_left, end_right, ode_res, weak_res;
};

int cmd_sweep(const SweepConfig& cfg) {
    try {
        std::ifstream in(cfg.config_path);
        if (!in) throw Error("cannot open sweep config '" + cfg.config_path + "'");
        SolveConfig base;
        std::vector<std::string> sigmas{base.sigma};
        std::vector<double> Gs{base.G}, Ds{base.D}, hstars{base.hstar};
        std::string line;
        int lineno = 0;
        auto split_list = [](const std::string& v) {
            std::vector<std::string> items;
            std::string cur;
            for (char c : v) {
                if (c == ',') {
                    items.push_back(cur);
                    cur.clear();
                } else {
                    cur.push_back(c);
                }
            }
            items.push_back(cur);
            return items;
        };
        auto to_doubles = [&](const std::string& v, int ln) {
            std::vector<double> out;
            for (const std::string& item : split_list(v)) {
                try {
                    std::size_t pos = 0;
                    out.push_back(std::stod(item, &pos));
                    if (pos != item.size()) throw std::invalid_argument(item);
                } catch (const std::exception&) {
                    throw ParseError("bad numeric list item '" + item + "'", ln);
                }
            }
            return out;
        };
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
            std::string key = line.substr(0, eq);
            std::string value = line.substr(eq + 1);
            if (key == "sigma") {
                sigmas = split_list(value);
            } else if (key == "G") {
                Gs = to_doubles(value, lineno);
            } else if (key == "D") {
                Ds = to_doubles(value, lineno);
            } else if (key == "hstar") {
                hstars = to_doubles(value, lineno);
            } else if (key == "xi_min") {
                base.xi_min = to_doubles(value, lineno).at(0);
            } else if (key == "xi_max") {
                base.xi_max = to_doubles(value, lineno).at(0);
            } else if (key == "samples") {
                base.samples = static_cast<std::size_t>(to_doubles(value, lineno).at(0));
            } else if (key == "gamma_anchor") {
                base.gamma_anchor = to_doubles(value, lineno).at(0);
            } else if (key == "tol_bisect") {
                base.tol_bisect = to_doubles(value, lineno).at(0);
            } else if (key == "eps_saddle") {
                base.eps_saddle = to_doubles(value, lineno).at(0);
            } else {
                throw ParseError("unknown sweep key '" + key + "'", lineno);
            }
        }

        std::vector<SolveConfig> combos;
        for (const std::string& s : sigmas) {
            for (double g : Gs) {
                for (double d : Ds) {
                    for (double h : hstars) {
                        SolveConfig c = base;
                        c.sigma = s;
                        c.G = g;
                        c.D = d;
                        c.hstar = h;
                        combos.push_back(c);
                    }
                }
            }
        }
        if (combos.empty()) throw DomainError("sweep: empty combination set");

        std::filesystem::create_directories(cfg.out_dir);
        std::vector<SweepRow> rows(combos.size());

        unsigned threads = std::thread::hardware_concurrency();
        if (const char* env = std::getenv("TWFILM_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end && *end == '\0' && v >= 1) threads = static_cast<unsigned>(v);
        }
        threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(combos.size())));

        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= combos.size()) return;
                SolveConfig c = combos[i];
                char dirname[32];
                std::snprintf(dirname, sizeof dirname, "run_%03zu", i);
                std::filesystem::path dir = std::filesystem::path(cfg.out_dir) / dirname;
                SweepRow& row = rows[i];
                row.sigma = c.sigma;
                row.G = c.G;
                row.D = c.D;
                row.hstar = c.hstar;
                try {
                    std::filesystem::create_directories(dir);
                    c.out = (dir / "profile.csv").string();
                    c.meta_out.clear();
                    SolveResult res = solve_dispatch(c);
                    write_profile(res.profile, c.out);
                    SurfaceTension model = SurfaceTension::parse(c.sigma);
                    RegimeParams params{c.G, c.D, c.hstar};
                    VerificationReport rep = run_verification(res.profile, model, params);
                    {
                        std::ofstream rout(dir / "report.txt", std::ios::binary);
                        write_report_lines(rout, rep);
                    }
                    const Profile& p = res.profile;
                    double Hs = params.H_star;
                    row.ok = true;
                    row.status = "ok";
                    if (const double* gs = p.meta.find_extra("gamma_star")) {
                        row.gamma_star = format_shortest(*gs);
                    }
                    row.end_left = format_shortest(std::abs(p.H.front() - 2.0 * Hs) +
                                                   std::abs(1.0 - p.Gamma.front()));
                    row.end_right =
                        format_shortest(std::abs(p.H.back() - Hs) + p.Gamma.back());
                    row.ode_res = format_shortest(rep.ode_residual_max);
                    row.weak_res = format_shortest(rep.weak_residual_max);
                } catch (const std::exception& e) {
                    row.ok = false;
                    std::string msg = e.what();
                    for (char& ch : msg) {
                        if (ch == ',' || ch == '\n') ch = ';';
                    }
                    row.status = "error: " + msg;
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        std::ofstream sum(std::filesystem::path(cfg.out_dir) / "summary.csv",
                          std::ios::binary);
        if (!sum) throw Error("cannot write sweep summary");
        sum << "index,sigma,G,D,hstar,status,gamma_star,endpoint_left,endpoint_right,"
               "ode_residual,weak_residual\n";
        bool all_ok = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const SweepRow& r = rows[i];
            all_ok = all_ok && r.ok;
            sum << i << ',' << r.sigma << ',' << format_shortest(r.G) << ','
                << format_shortest(r.D) << ',' << format_shortest(r.hstar) << ',' << r.status
                << ',' << r.gamma_star << ',' << r.end_left << ',' << r.end_right << ','
                << r.ode_res << ',' << r.weak_res << '\n';
        }
        return all_ok ? kExitOk : kExitNoConvergence;
    } catch (...) {
        return map_exception();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traveling-wave profiles for a thin film with insoluble surfactant"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    SolveConfig solve_cfg;
    CLI::App* solve = app.add_subcommand("solve", "compute a traveling-wave profile");
    solve->add_option("--sigma", solve_cfg.sigma, "isotherm spec, e.g. szyszkowski:1:1");
    solve->add_option("--G", solve_cfg.G, "gravity number (>= 0)");
    solve->add_option("--D", solve_cfg.D, "surface diffusion (>= 0)");
    solve->add_option("--hstar", solve_cfg.hstar, "far-field film height H*");
    solve->add_option("--xi-min", solve_cfg.xi_min, "left end of the sample window");
    solve->add_option("--xi-max", solve_cfg.xi_max, "right end of the sample window");
    solve->add_option("--samples", solve_cfg.samples, "sample count");
    solve->add_option("--gamma-anchor", solve_cfg.gamma_anchor,
                      "Gamma(0) anchor for the G=0, D>0 regime");
    solve->add_option("--tol-bisect", solve_cfg.tol_bisect, "shooting bisection width");
    solve->add_option("--eps-saddle", solve_cfg.eps_saddle, "saddle/sink ball radius");
    solve->add_option("--out", solve_cfg.out, "profile CSV path");
    solve->add_option("--meta-out", solve_cfg.meta_out, "metadata sidecar path");

    PhaseConfig phase_cfg;
    CLI::App* phase = app.add_subcommand("phase", "emit phase-plane data (G>0, D>0)");
    phase->add_option("--sigma", phase_cfg.sigma, "isotherm spec");
    phase->add_option("--G", phase_cfg.G, "gravity number (> 0)");
    phase->add_option("--D", phase_cfg.D, "surface diffusion (> 0)");
    phase->add_option("--hstar", phase_cfg.hstar, "far-field film height H*");
    phase->add_option("--grid", phase_cfg.grid, "grid points per axis");
    phase->add_option("--out", phase_cfg.out, "field grid CSV path");
    phase->add_option("--nullcline-out", phase_cfg.nullcline_out, "nullcline CSV path");
    phase->add_option("--points-out", phase_cfg.points_out, "special-points path");

    VerifyConfig verify_cfg;
    CLI::App* verify = app.add_subcommand("verify", "verify a stored profile");
    verify->add_option("--in", verify_cfg.in, "profile CSV path")->required();
    verify->add_option("--meta-in", verify_cfg.meta_in, "metadata sidecar path");
    verify->add_option("--out", verify_cfg.out, "report path (default: stdout)");

    SweepConfig sweep_cfg;
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("--config", sweep_cfg.config_path, "sweep config file")->required();
    sweep->add_option("--out", sweep_cfg.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    if (solve->parsed()) return cmd_solve(solve_cfg);
    if (phase->parsed()) return cmd_phase(phase_cfg);
    if (verify->parsed()) return cmd_verify(verify_cfg);
    if (sweep->parsed()) return cmd_sweep(sweep_cfg);
    return kExitInvalid;
}
