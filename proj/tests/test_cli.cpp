// End-to-end checks of the command-line tool; argv[1] is the binary path.
#define DOCTEST_CONFIG_IMPLEMENT
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "twfilm/phase_plane.hpp"
#include "twfilm/profile_io.hpp"
#include "twfilm/verify.hpp"
#include "twfilm/version.hpp"

namespace {

std::string g_binary;
std::filesystem::path g_dir;

int run(const std::string& args) {
    std::string cmd = "\"" + g_binary + "\" " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string at(const std::string& name) { return (g_dir / name).string(); }

}  // namespace

TEST_CASE("solve writes the piecewise profile with its kink") {
    int rc = run("solve --sigma szyszkowski:1:1 --G 0 --D 0 --hstar 0.5 --xi-min -10 "
                 "--xi-max 5 --out " + at("w.csv"));
    CHECK(rc == 0);
    std::string body = slurp(at("w.csv"));
    CHECK(body.find("kink_left") != std::string::npos);
    CHECK(body.find("kink_right") != std::string::npos);
    std::string meta = slurp(at("w.meta"));
    CHECK(meta.find("regime: G0_D0") != std::string::npos);
}

TEST_CASE("solve succeeds with only the core flags") {
    CHECK(run("solve --sigma szyszkowski:1:1 --G 0 --D 1 --hstar 1 --out " + at("core.csv")) ==
          0);
    CHECK(std::filesystem::exists(at("core.csv")));
    CHECK(std::filesystem::exists(at("core.meta")));
}

TEST_CASE("non-compliant isotherm for an ODE regime exits 4") {
    CHECK(run("solve --sigma linear:1 --G 1 --D 1 --hstar 1 --out " + at("lin.csv")) == 4);
    CHECK(run("solve --sigma sheludko:1:1 --G 0 --D 0 --hstar 1 --out " + at("sh.csv")) == 4);
}

TEST_CASE("invalid parameters exit 2") {
    CHECK(run("solve --sigma szyszkowski:1:1 --G 1 --D -1 --hstar 1 --out " + at("bad.csv")) ==
          2);
    CHECK(run("solve --sigma szyszkowski:1 --G 1 --D 1 --hstar 1 --out " + at("bad.csv")) == 2);
    CHECK(run("solve --no-such-flag") == 2);
}

TEST_CASE("heteroclinic solve stores the section ordinate") {
    int rc = run("solve --sigma szyszkowski:1:1 --G 1 --D 1 --hstar 1 --out " + at("het.csv"));
    CHECK(rc == 0);
    auto p = twfilm::read_profile(at("het.csv"));
    const double* gs = p.meta.find_extra("gamma_star");
    const double* gb = p.meta.find_extra("gamma_bar");
    REQUIRE(gs != nullptr);
    REQUIRE(gb != nullptr);
    CHECK(*gs > 0.0);
    CHECK(*gs < *gb);
}

TEST_CASE("identical solve runs are byte identical") {
    REQUIRE(run("solve --sigma szyszkowski:1:1 --G 1 --D 1 --hstar 1 --samples 2001 "
                "--xi-min -25 --xi-max 25 --out " + at("r1.csv")) == 0);
    REQUIRE(run("solve --sigma szyszkowski:1:1 --G 1 --D 1 --hstar 1 --samples 2001 "
                "--xi-min -25 --xi-max 25 --out " + at("r2.csv")) == 0);
    CHECK(slurp(at("r1.csv")) == slurp(at("r2.csv")));
    CHECK(slurp(at("r1.meta")) == slurp(at("r2.meta")));
}

TEST_CASE("phase emits the grid, nullcline and special points") {
    int rc = run("phase --sigma szyszkowski:1:1 --G 1 --D 1 --hstar 1 --out " + at("ph.csv"));
    CHECK(rc == 0);

    std::string grid = slurp(at("ph.csv"));
    std::size_t rows = 0;
    for (char c : grid) rows += (c == '\n');
    CHECK(rows == 101 * 101 + 1);

    // nullcline rows satisfy |f1| < 1e-8
    auto model = twfilm::SurfaceTension::szyszkowski(1.0, 1.0);
    twfilm::RegimeParams prm{1.0, 1.0, 1.0};
    std::ifstream nc(g_dir / "ph.nullcline.csv");
    std::string line;
    std::getline(nc, line);
    CHECK(line == "Gamma,H_c");
    int checked = 0;
    while (std::getline(nc, line)) {
        auto comma = line.find(',');
        double g = std::stod(line.substr(0, comma));
        double hc = std::stod(line.substr(comma + 1));
        CHECK(std::abs(twfilm::f1(model, prm, hc, g)) < 1e-8);
        ++checked;
    }
    CHECK(checked == 101);

    std::string points = slurp(g_dir / "ph.points.txt");
    CHECK(points.find("gamma_bar: ") != std::string::npos);
    double gamma_bar = std::stod(points.substr(points.find("gamma_bar: ") + 11));
    CHECK(gamma_bar <= 0.5);
    CHECK(points.find("gamma_0s: ") != std::string::npos);
    CHECK(points.find("bracket_lo: ") != std::string::npos);

    CHECK(run("phase --sigma szyszkowski:1:1 --G 0 --D 1 --hstar 1 --out " + at("phx.csv")) ==
          2);
}

TEST_CASE("verify accepts fresh output and rejects corrupted input") {
    REQUIRE(run("solve --sigma szyszkowski:1:1 --G 0 --D 1 --hstar 1 --out " + at("v.csv")) ==
            0);
    CHECK(run("verify --in " + at("v.csv") + " --out " + at("v.report.txt")) == 0);
    std::string report = slurp(at("v.report.txt"));
    CHECK(report.find("all_ok: true") != std::string::npos);

    // corrupt one Gamma entry beyond the admissible range
    {
        std::ifstream in(at("v.csv"));
        std::vector<std::string> lines;
        std::string l;
        while (std::getline(in, l)) lines.push_back(l);
        auto fields_of = [](const std::string& s) {
            std::vector<std::string> f;
            std::string cur;
            for (char c : s) {
                if (c == ',') {
                    f.push_back(cur);
                    cur.clear();
                } else {
                    cur.push_back(c);
                }
            }
            f.push_back(cur);
            return f;
        };
        auto f = fields_of(lines[5]);
        f[2] = "1.2";
        lines[5] = f[0] + "," + f[1] + "," + f[2] + "," + f[3] + "," + f[4] + "," + f[5];
        std::ofstream out(at("vbad.csv"), std::ios::binary);
        for (const auto& s : lines) out << s << '\n';
        std::ofstream meta(at("vbad.meta"), std::ios::binary);
        meta << slurp(at("v.meta"));
    }
    CHECK(run("verify --in " + at("vbad.csv")) == 2);

    // the trivial constant solution verifies clean
    {
        twfilm::Profile cst;
        cst.meta.model_spec = "szyszkowski:1:1";
        cst.meta.params = twfilm::RegimeParams{0.0, 1.0, 1.0};
        cst.meta.anchor = "constant";
        cst.meta.tool_version = twfilm::kToolVersion;
        for (int i = 0; i <= 2000; ++i) {
            cst.xi.push_back(-25.0 + 50.0 * i / 2000.0);
            cst.H.push_back(1.0);
            cst.Gamma.push_back(0.0);
            cst.dH.push_back(0.0);
            cst.dGamma.push_back(0.0);
            cst.flags.push_back(twfilm::SampleFlag::Smooth);
        }
        twfilm::write_profile(cst, at("const.csv"));
    }
    CHECK(run("verify --in " + at("const.csv") + " --out " + at("const.report.txt")) == 0);
    std::string creport = slurp(at("const.report.txt"));
    CHECK(creport.find("ode_residual_max: 0") != std::string::npos);

    // a profile that loads cleanly but violates the equations exits 5
    {
        auto p = twfilm::read_profile(at("v.csv"));
        for (std::size_t i = 0; i < p.size(); ++i) p.H[i] += 0.05;
        twfilm::write_profile(p, at("voff.csv"));
    }
    CHECK(run("verify --in " + at("voff.csv")) == 5);
}

TEST_CASE("sweep runs the cartesian product and records failures") {
    {
        std::ofstream cfg(at("sweep.cfg"));
        cfg << "sigma=szyszkowski:1:1\n";
        cfg << "G=1\n";
        cfg << "D=0.5,1,2\n";
        cfg << "hstar=1\n";
        cfg << "samples=2001\n";
        cfg << "xi_min=-25\n";
        cfg << "xi_max=25\n";
    }
    CHECK(run("sweep --config " + at("sweep.cfg") + " --out " + at("sw")) == 0);
    std::string summary = slurp(g_dir / "sw" / "summary.csv");
    std::size_t rows = 0;
    for (char c : summary) rows += (c == '\n');
    CHECK(rows == 4);  // header + 3 combos
    CHECK(std::filesystem::exists(g_dir / "sw" / "run_000" / "profile.csv"));
    CHECK(std::filesystem::exists(g_dir / "sw" / "run_002" / "report.txt"));

    // reruns are byte-identical, also when the worker pool is capped
    {
        std::string cmd = "TWFILM_THREADS=1 \"" + g_binary + "\" sweep --config " +
                          at("sweep.cfg") + " --out " + at("sw_b") + " > /dev/null 2>&1";
        int status = std::system(cmd.c_str());
        REQUIRE(status != -1);
        CHECK(WEXITSTATUS(status) == 0);
    }
    CHECK(slurp(g_dir / "sw_b" / "summary.csv") == summary);
    CHECK(slurp(g_dir / "sw_b" / "run_001" / "profile.csv") ==
          slurp(g_dir / "sw" / "run_001" / "profile.csv"));

    // an invalid value is recorded per-row and flips the exit code
    {
        std::ofstream cfg(at("sweep_bad.cfg"));
        cfg << "sigma=szyszkowski:1:1\n";
        cfg << "G=1\n";
        cfg << "D=-1,1\n";
        cfg << "hstar=1\n";
        cfg << "samples=1001\n";
        cfg << "xi_min=-25\n";
        cfg << "xi_max=25\n";
    }
    CHECK(run("sweep --config " + at("sweep_bad.cfg") + " --out " + at("swbad")) == 3);
    std::string bad = slurp(g_dir / "swbad" / "summary.csv");
    CHECK(bad.find("error") != std::string::npos);
    CHECK(bad.find("ok") != std::string::npos);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-twfilm-binary>\n");
        return 1;
    }
    g_binary = argv[1];
    g_dir = std::filesystem::temp_directory_path() / "twfilm_cli_test";
    std::filesystem::remove_all(g_dir);
    std::filesystem::create_directories(g_dir);
    doctest::Context context;
    context.applyCommandLine(1, argv);
    return context.run();
}
