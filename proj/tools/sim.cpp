// sim <task> --config <file> [--format table|csv|json] [--out <file>] [--jobs N]

#include "tmsq/cli/config.hpp"
#include "tmsq/cli/report.hpp"
#include "tmsq/cli/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    using namespace tmsq::cli;

    CLI::App app{"Steady states, relaxation and verification of two-mode squeezing networks"};
    std::string task, config_path, format = "table", out_path;
    int jobs = 0;
    if (const char* env = std::getenv("SIM_JOBS")) jobs = std::atoi(env);
    app.add_option("task", task, "steady | evolve | gap | sweep | verify | params")->required();
    app.add_option("--config", config_path, "scenario JSON file")->required();
    app.add_option("--format", format, "table | csv | json");
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_option("--jobs", jobs, "parallel sweep workers (default: SIM_JOBS, else all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_validation;
    }

    try {
        const Format fmt = parse_format(format);
        const Task t = parse_task(task);
        if (jobs < 0) throw tmsq::ValidationError("--jobs: must be >= 0");
        const auto cfg = load_config(config_path);
        const auto result = run(t, cfg, jobs);
        const std::string text = render(result.report, fmt);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            if (!out) throw tmsq::ValidationError("--out: cannot write '" + out_path + "'");
            out << text;
        }
        if (result.exit_code == exit_verification) std::cerr << "verification failed\n";
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
