#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oscnet/scenario.hpp"

using namespace oscnet;
namespace fs = std::filesystem;

namespace {

const char* kSampleConfig = R"cfg(
# two suppressed reservoirs, odd cat in mode 1
name = "sample"
omega10 = 1.0
omega20 = 1.0
lambda = 1.5
F = 0.0
omega_drive = 0.0
gamma1 = 0.05
gamma2 = 0.02
spectral1 = {model = "lorentzian", eps_plus = 0.3, eps_minus = 0.2}
spectral2 = {model = "wide_lorentzian", eps_minus = 0.1}
state = {kind = "product_cat", alpha = 0.8, eta = 0.5, sign = "-"}
tmax_lambda = 6.0
samples = 41
observables = ["recurrence", "swap", "entropy_joint"]
oracle = {enabled = 0, trunc = 10, dt_lambda = 0.02, points = 5}
)cfg";

fs::path temp_dir(const std::string& leaf) {
    const fs::path dir = fs::temp_directory_path() / "oscnet_tests" / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("full example") {
        const Scenario s = parse_scenario_text(kSampleConfig, "sample.cfg");
        CHECK(s.name == "sample");
        CHECK(s.config.lambda == 1.5);
        CHECK(s.config.gamma_scale_1 == 0.05);
        CHECK(s.config.spectral_1.kind == SpectralKind::Lorentzian);
        CHECK(s.config.spectral_1.eps_minus == 0.2);
        CHECK(s.config.spectral_2.kind == SpectralKind::WideLorentzian);
        CHECK(s.state.sign == -1);
        CHECK(s.state.alpha == 0.8);
        CHECK(s.samples == 41);
        CHECK(s.observables.size() == 3);
        CHECK(s.oracle.truncation == 10);
        CHECK_FALSE(s.oracle.enabled);
    }

    SUBCASE("errors carry file and line context") {
        try {
            parse_scenario_text("lambda = 1.0\nbogus_key = 3\n", "bad.cfg");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("bad.cfg:2") != std::string::npos);
            CHECK(msg.find("bogus_key") != std::string::npos);
        }
    }

    SUBCASE("malformed values") {
        CHECK_THROWS_AS(parse_scenario_text("lambda = \n", "x"), ConfigError);
        CHECK_THROWS_AS(parse_scenario_text("name = \"unterminated\n", "x"), ConfigError);
        CHECK_THROWS_AS(parse_scenario_text("spectral1 = {model = \"nope\"}\n", "x"), ConfigError);
        CHECK_THROWS_AS(parse_scenario_text("state = {sign = \"*\"}\n", "x"), ConfigError);
        CHECK_THROWS_AS(parse_scenario_text("observables = [\"no_such\"]\nlambda = 1\n", "x"),
                        ConfigError);
    }

    SUBCASE("physics validation applies") {
        // coupling guard: lambda < 10 Gamma
        const std::string guarded = "lambda = 0.1\ngamma1 = 0.05\ngamma2 = 0.0\n";
        CHECK_THROWS_AS(parse_scenario_text(guarded, "x"), ConfigError);
        const std::string waived = guarded + "waive_coupling_guard = 1\n";
        CHECK_NOTHROW(parse_scenario_text(waived, "x"));
        // suppression factor out of range
        CHECK_THROWS_AS(
            parse_scenario_text(
                "lambda = 1\nspectral1 = {model = \"lorentzian\", eps_plus = 2.0}\n", "x"),
            ConfigError);
    }

    SUBCASE("file loading") {
        const fs::path dir = temp_dir("cfg");
        const fs::path path = dir / "scenario.cfg";
        std::ofstream(path) << kSampleConfig;
        const Scenario s = parse_scenario_file(path);
        CHECK(s.name == "sample");
        CHECK_THROWS_AS(parse_scenario_file(dir / "missing.cfg"), ConfigError);
    }
}

TEST_CASE("preset scenarios") {
    for (const auto& name : builtin_names()) {
        const Scenario s = builtin_scenario(name);
        CHECK(s.name == name);
        CHECK_NOTHROW(s.validate());
        CHECK_NOTHROW(derive_coefficients(s.config));
    }
    CHECK_THROWS_AS(builtin_scenario("fig99"), ConfigError);

    const Scenario f4f = builtin_scenario("fig4f");
    CHECK(f4f.notes.count("F_over_Omega_minus_lambda") == 1);
    CHECK(f4f.notes.at("F_over_omega20") == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("csv formatting") {
    TimeSeries series;
    series.label = "demo";
    series.times = {0.0, 1.0 / 3.0};
    series.values = {1.0, 0.1234567890123456789};
    const std::string csv = format_csv(series, 2.0);
    CHECK(csv.rfind("t,lambda_t,value\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    // 17 significant digits survive a parse round trip
    const size_t line2 = csv.find('\n', csv.find('\n') + 1) + 1;
    double t = 0, lt = 0, v = 0;
    CHECK(std::sscanf(csv.c_str() + line2, "%lf,%lf,%lf", &t, &lt, &v) == 3);
    CHECK(t == 1.0 / 3.0);
    CHECK(lt == 2.0 / 3.0);
    CHECK(v == 0.1234567890123456789);
}

TEST_CASE("scenario runs") {
    SUBCASE("recurrence peaks of the weak-coupling preset") {
        Scenario s = builtin_scenario("fig4a");
        s.samples = 2001;
        const TimeSeries pr = evaluate_observable(s, "recurrence");
        // P_R ~ 1 at lambda t = 0 and near lambda t = 2 pi
        CHECK(pr.values.front() == doctest::Approx(1.0).epsilon(1e-10));
        double best = 0.0;
        for (size_t i = 0; i < pr.times.size(); ++i) {
            const double lt = pr.times[i] * s.config.lambda;
            if (std::abs(lt - 2.0 * M_PI) < 0.3) best = std::max(best, pr.values[i]);
        }
        CHECK(best > 0.95);
    }

    SUBCASE("output bundle and manifest") {
        const fs::path dir = temp_dir("run");
        Scenario s = builtin_scenario("fig5");
        s.samples = 201;
        const RunResult res = run_scenario(s, dir);
        CHECK(fs::exists(res.out_dir / "manifest.json"));
        for (const auto& obs : s.observables) CHECK(fs::exists(res.out_dir / (obs + ".csv")));
        CHECK(res.manifest["figure_tag"] == "fig5");
        CHECK(res.manifest["coupling_guard_waived"] == true);
        // Gamma = 0.4 white noise: Phi = (gamma+ - gamma-)/2 = 0.05
        CHECK(res.manifest["coefficients"]["Phi"].get<double>() == doctest::Approx(0.05));
        CHECK(res.manifest["decoherence"]["ratio"].get<double>() ==
              doctest::Approx(4.0 / 3.0).epsilon(1e-12));
        CHECK(res.manifest["decoherence"]["tau_C"].is_number());
    }

    SUBCASE("byte-identical reruns") {
        const fs::path dir_a = temp_dir("det_a");
        const fs::path dir_b = temp_dir("det_b");
        Scenario s = builtin_scenario("fig8a");
        s.samples = 301;
        run_scenario(s, dir_a);
        run_scenario(s, dir_b);
        for (const auto& obs : s.observables) {
            std::ifstream fa(dir_a / s.name / (obs + ".csv"), std::ios::binary);
            std::ifstream fb(dir_b / s.name / (obs + ".csv"), std::ios::binary);
            const std::string a((std::istreambuf_iterator<char>(fa)), {});
            const std::string b((std::istreambuf_iterator<char>(fb)), {});
            CHECK(a == b);
            CHECK(!a.empty());
        }
    }

    SUBCASE("unbounded correlation time serialises as null plus flag") {
        const fs::path dir = temp_dir("unbounded");
        Scenario s;
        s.name = "flat";
        s.config.lambda = 1.0;
        s.config.gamma_scale_1 = s.config.gamma_scale_2 = 0.05;
        s.config.spectral_1 = s.config.spectral_2 = SpectralModel::lorentzian(0.4, 0.4);
        s.observables = {"coherence_joint"};
        s.samples = 11;
        const RunResult res = run_scenario(s, dir);
        CHECK(res.manifest["decoherence"]["tau_C"].is_null());
        CHECK(res.manifest["decoherence"]["tau_C_unbounded"] == true);
    }
}

TEST_CASE("oracle validation path") {
    SUBCASE("dissipationless scenario matches to integrator precision") {
        Scenario s;
        s.name = "free";
        s.config.lambda = 1.0;
        s.state.alpha = 0.5;
        s.state.eta = 0.4;
        s.observables = {"recurrence"};
        s.samples = 11;
        s.tmax_lambda = M_PI;
        s.oracle.enabled = true;
        // the 1e-8 target needs headroom beyond the coarse truncation guard
        s.oracle.truncation = 16;
        s.oracle.dt_lambda = 0.0025;
        s.oracle.points = 4;
        const ValidationReport rep = validate_scenario(s);
        CHECK(rep.passed);
        CHECK(rep.max_trace_distance < 1e-8);
        CHECK(rep.max_offdiag_deviation < 1e-8);
    }

    SUBCASE("undersized truncation is reported with the required size") {
        Scenario s;
        s.name = "tiny";
        s.config.lambda = 1.0;
        s.state.alpha = 1.0;
        s.observables = {"recurrence"};
        s.oracle.enabled = true;
        s.oracle.truncation = 3;
        try {
            validate_scenario(s);
            FAIL("expected TruncationError");
        } catch (const TruncationError& e) {
            CHECK(std::string(e.what()).find("15") != std::string::npos);
        }
    }

    SUBCASE("oracle section lands in the manifest") {
        const fs::path dir = temp_dir("oracle_run");
        Scenario s;
        s.name = "free_run";
        s.config.lambda = 1.0;
        s.state.alpha = 0.4;
        s.state.eta = 0.3;
        s.observables = {"recurrence"};
        s.samples = 5;
        s.tmax_lambda = 1.0;
        s.oracle.enabled = true;
        s.oracle.truncation = 16;
        s.oracle.dt_lambda = 0.0025;
        s.oracle.points = 2;
        const RunResult res = run_scenario(s, dir);
        CHECK(res.manifest["oracle"]["passed"] == true);
        CHECK(res.manifest["oracle"]["max_trace_distance"].get<double>() < 1e-8);
    }
}
