#include <catch2/catch_amalgamated.hpp>

#include "tmsq/analytics.hpp"
#include "tmsq/cli/config.hpp"
#include "tmsq/cli/report.hpp"
#include "tmsq/cli/runner.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace tmsq;
using namespace tmsq::cli;
using Catch::Approx;

namespace {

const std::string sim = TMSQ_SIM_PATH;
const std::filesystem::path scenarios = TMSQ_SCENARIO_DIR;

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "tmsq_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::filesystem::path write_config(const std::string& name, const json& doc) {
    const auto path = scratch_dir() / name;
    std::ofstream(path) << doc.dump(2);
    return path;
}

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome run_sim(const std::string& args) {
    const auto out_file = scratch_dir() / "stdout.txt";
    const std::string cmd = sim + " " + args + " > " + out_file.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    o.out = ss.str();
    return o;
}

std::string scenario(const std::string& name) { return (scenarios / name).string(); }

double row_value(const Report& r, const std::string& metric) {
    for (const auto& row : r.rows)
        if (std::get<std::string>(row[0]) == metric) return std::get<double>(row[1]);
    FAIL("missing metric " << metric);
    return 0.0;
}

json ideal_doc() {
    return json::parse(R"({"schema_version": "1", "model": "single-cavity-ideal",
        "parameters": {"beta": 100, "r": 0.8, "kappa_a": 120, "kappa_b": 120}})");
}

}  // namespace

TEST_CASE("config parsing", "[cli][config]") {
    SECTION("rates are kHz over 2 pi") {
        const auto cfg = parse_config(ideal_doc());
        CHECK(cfg.model == ModelKind::single_cavity_ideal);
        CHECK(real_param(cfg.params, "beta") == Approx(100.0));
        const auto sys = build_system(cfg.model, cfg.params);
        CHECK(std::abs(sys.hamiltonian().F(0, 2)) == Approx(khz(100)));
    }
    SECTION("unknown keys are rejected by name") {
        auto doc = ideal_doc();
        doc["parameters"]["kapa_a"] = 1.0;
        try {
            parse_config(doc);
            FAIL("accepted an unknown key");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("kapa_a") != std::string::npos);
        }
        auto top = ideal_doc();
        top["parameter"] = json::object();
        CHECK_THROWS_AS(parse_config(top), ValidationError);
        auto opt = ideal_doc();
        opt["options"] = {{"sweeps", 1}};
        CHECK_THROWS_AS(parse_config(opt), ValidationError);
    }
    SECTION("missing and malformed fields") {
        auto doc = ideal_doc();
        doc["parameters"].erase("kappa_b");
        CHECK_THROWS_AS(parse_config(doc), ValidationError);
        auto ver = ideal_doc();
        ver["schema_version"] = "2";
        CHECK_THROWS_AS(parse_config(ver), ValidationError);
        auto model = ideal_doc();
        model["model"] = "triple-cavity";
        CHECK_THROWS_AS(parse_config(model), ValidationError);
        auto kind = ideal_doc();
        kind["parameters"]["r"] = "0.8";
        CHECK_THROWS_AS(parse_config(kind), ValidationError);
    }
    SECTION("r >= 1 fails at system construction") {
        auto doc = ideal_doc();
        doc["parameters"]["r"] = 1.2;
        const auto cfg = parse_config(doc);
        CHECK_THROWS_AS(build_system(cfg.model, cfg.params), ValidationError);
    }
    SECTION("config task must agree with the requested task") {
        auto doc = ideal_doc();
        doc["task"] = "gap";
        const auto cfg = parse_config(doc);
        CHECK_THROWS_AS(run(Task::steady, cfg), ValidationError);
        CHECK_NOTHROW(run(Task::gap, cfg));
    }
}

TEST_CASE("steady task at the operating point", "[cli][steady]") {
    const auto cfg = load_config(scenario("operating_point.json"));
    const auto res = run(Task::steady, cfg);
    CHECK(res.exit_code == exit_ok);
    CHECK(row_value(res.report, "V_Xsum") == Approx(2.0 / 9.0).epsilon(1e-8));
    CHECK(row_value(res.report, "V_Pdiff") == Approx(2.0 / 9.0).epsilon(1e-8));
    CHECK(row_value(res.report, "dB_best") == Approx(-9.5424).margin(1e-3));
    CHECK(row_value(res.report, "purity") == Approx(1.0).epsilon(1e-8));
    CHECK(row_value(res.report, "n_cav_total") < 1e-10);
    const std::string csv = render(res.report, Format::csv);
    CHECK(csv.find("V_Xsum,0.222222222") != std::string::npos);
}

TEST_CASE("gap task", "[cli][gap]") {
    const auto res = run(Task::gap, load_config(scenario("operating_point.json")));
    const auto doc = json::parse(render(res.report, Format::json));
    bool found = false;
    for (const auto& row : doc["rows"])
        if (row["metric"] == "gap_kHz") {
            CHECK(row["value"].get<double>() == Approx(60.0).epsilon(1e-6));
            found = true;
        }
    CHECK(found);
}

TEST_CASE("sweep task", "[cli][sweep]") {
    const auto cfg = load_config(scenario("cascaded_sweep.json"));
    const auto res = run(Task::sweep, cfg, 2);
    REQUIRE(res.report.rows.size() == 19);
    CHECK(res.report.columns.front() == "r");
    std::size_t best = 0;
    double best_v = 1e300;
    for (std::size_t k = 0; k < res.report.rows.size(); ++k) {
        const double v = std::get<double>(res.report.rows[k][2]);  // V_Xdiff
        if (v < best_v) best_v = v, best = k;
    }
    const double r_best = std::get<double>(res.report.rows[best][0]);
    // kappa = 5 beta is outside the adiabatic regime: the minimum sits near r_opt
    // but above 2 sqrt(1 - eta)
    CHECK(r_best == Approx(0.8).margin(0.051));
    CHECK(best_v > analytics::v_min(0.96));
    CHECK(best_v < 0.6);

    // deeper in the adiabatic regime the minimum approaches the formula
    double previous = best_v;
    for (double kappa : {2000.0, 10000.0}) {
        auto deep = cfg;
        deep.params["kappa"] = kappa;
        deep.params["r"] = r_best;
        const auto sys = build_system(deep.model, deep.params);
        const double v = gaussian::epr_variances(gaussian_steady(sys), 4, 5).x_diff;
        INFO("kappa = " << kappa << " kHz: V = " << v);
        CHECK(v < previous);
        CHECK(v > analytics::v_epr_cascaded(r_best, 0.96) - 1e-9);
        previous = v;
    }
    CHECK(previous == Approx(analytics::v_epr_cascaded(r_best, 0.96)).epsilon(0.02));
}

TEST_CASE("evolve task reaches the steady state", "[cli][evolve]") {
    const auto res = run(Task::evolve, load_config(scenario("operating_point.json")));
    REQUIRE(res.report.rows.size() == 41);
    CHECK(std::get<double>(res.report.rows.front()[1]) == Approx(2.0));
    CHECK(std::get<double>(res.report.rows.back()[0]) == Approx(20.0));
    CHECK(std::get<double>(res.report.rows.back()[1]) == Approx(2.0 / 9.0).epsilon(1e-3));
}

TEST_CASE("params task", "[cli][params]") {
    const auto res = run(Task::params, load_config(scenario("physical.json")));
    CHECK(row_value(res.report, "beta_collective_kHz") == Approx(100.0).epsilon(1e-9));
    CHECK(row_value(res.report, "spont_rate_kHz") == Approx(0.024).epsilon(1e-9));
}

TEST_CASE("verify task", "[cli][verify]") {
    SECTION("reduced model passes") {
        const auto res = run(Task::verify, load_config(scenario("reduced.json")));
        CHECK(res.exit_code == exit_ok);
    }
    SECTION("cascaded formula outside the adiabatic regime fails") {
        auto doc = json::parse(std::ifstream(scenario("cascaded_sweep.json")));
        doc.erase("options");
        const auto res = run(Task::verify, parse_config(doc));
        CHECK(res.exit_code == exit_verification);
    }
}

TEST_CASE("sim exit codes", "[cli][process]") {
    CHECK(run_sim("steady --config " + scenario("operating_point.json")).code == 0);
    CHECK(run_sim("steady --config " + scenario("bad_r.json")).code == 2);
    CHECK(run_sim("steady --config /nonexistent/config.json").code == 2);
    CHECK(run_sim("bogus --config " + scenario("operating_point.json")).code == 2);
    CHECK(run_sim("steady").code == 2);
    CHECK(run_sim("steady --format xml --config " + scenario("operating_point.json")).code == 2);

    const auto unstable = write_config("unstable.json", json::parse(R"({"schema_version": "1", "model": "single-cavity-general",
        "parameters": {"beta_r1": 0.1, "beta_s1": 0.12, "beta_r2": 0.12, "beta_s2": 0.1,
                       "N1": 1000000, "N2": 1000000, "kappa_a": 120, "kappa_b": 120}})"));
    CHECK(run_sim("steady --config " + unstable.string()).code == 3);

    auto doc = json::parse(std::ifstream(scenario("cascaded_sweep.json")));
    doc.erase("options");
    const auto failing = write_config("cascaded_verify.json", doc);
    CHECK(run_sim("verify --config " + failing.string()).code == 4);
}

TEST_CASE("sim output is deterministic", "[cli][process][determinism]") {
    const std::string args = "sweep --format csv --config " + scenario("cascaded_sweep.json");
    const auto one = run_sim(args + " --jobs 1");
    const auto many = run_sim(args + " --jobs 4");
    const auto again = run_sim(args + " --jobs 4");
    REQUIRE(one.code == 0);
    CHECK(one.out == many.out);
    CHECK(many.out == again.out);
    for (const char* fmt : {"table", "json"}) {
        const std::string a = "steady --format " + std::string(fmt) + " --config " + scenario("operating_point.json");
        CHECK(run_sim(a).out == run_sim(a).out);
    }
}

TEST_CASE("report rendering", "[cli][report]") {
    Report r{"demo", "none", {"name", "x"}, {}, {"a note"}};
    r.add_row({std::string("one,two"), 0.1});
    r.add_row({std::string("nan"), std::nan("")});
    CHECK(render_csv(r) == "name,x\n\"one,two\",0.1\nnan,nan\n");
    const auto doc = json::parse(render_json(r));
    CHECK(doc["rows"][1]["x"].is_null());
    CHECK(doc["notes"][0] == "a note");
    CHECK(render_table(r).find("# demo (none)") == 0);
    CHECK_THROWS_AS(r.add_row({1.0}), Error);
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
}
