#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rodsim/errors.hpp"
#include "rodsim/runners.hpp"
#include "rodsim/scenario.hpp"

namespace {

// RODSIM_LOG = trace | debug | info | warn | error | critical | off; default warn.
void setup_logging() {
    auto logger = spdlog::stderr_color_mt("rodsim");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("RODSIM_LOG");
    spdlog::level::level_enum lvl = spdlog::level::warn;
    if (env && *env) {
        lvl = spdlog::level::from_str(env);
        if (lvl == spdlog::level::off && std::string(env) != "off") {
            lvl = spdlog::level::warn;
            spdlog::warn("RODSIM_LOG={} not recognized; using warn", env);
        }
    }
    spdlog::set_level(lvl);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace rodsim::cli;
    setup_logging();

    CLI::App app{"Kirchhoff rod statics, dynamics and verification oracles"};
    app.set_version_flag("--version", std::string("rodsim ") + kVersion);
    app.require_subcommand(1);

    std::string scenario_path;
    RunOptions opt;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory (default: output.dir of the scenario, else .)");
    run->add_flag("--deterministic", opt.deterministic, "Single-threaded, no timing fields in outputs");
    run->add_option("--convergence", opt.convergence, "Number of mesh levels, doubling the element count")
        ->check(CLI::Range(1, 12));
    run->add_option("--jobs", opt.jobs, "Mesh levels solved concurrently")->check(CLI::Range(1, 256));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kSchema;
    }

    try {
        const Scenario sc = load_scenario(scenario_path);
        opt.out_dir = !out_dir.empty() ? std::filesystem::path(out_dir)
                      : !sc.output_dir.empty() ? sc.output_dir
                                               : std::filesystem::path(".");
        opt.scenario_label = std::filesystem::path(scenario_path).filename().string();
        spdlog::info("scenario {} ({}) -> {}", sc.name, to_string(sc.mode), opt.out_dir.string());
        const RunOutcome out = run_scenario(sc, opt);
        if (out.exit_code == kNonConvergence) {
            fmt::print(stderr, "rodsim: solver did not converge: {}\n", out.message);
            fmt::print(stderr, "rodsim: see {}\n", (opt.out_dir / "report.json").string());
        }
        return out.exit_code;
    } catch (const SchemaError& e) {
        fmt::print(stderr, "rodsim: schema error at {}\n", e.what());
        return kSchema;
    } catch (const rodsim::ValidationError& e) {
        fmt::print(stderr, "rodsim: invalid input: {}\n", e.what());
        return kSchema;
    } catch (const rodsim::NotDetected& e) {
        fmt::print(stderr, "rodsim: {}\n", e.what());
        return kNonConvergence;
    } catch (const std::exception& e) {
        fmt::print(stderr, "rodsim: error: {}\n", e.what());
        return kFailure;
    }
}
