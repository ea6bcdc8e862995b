// Command-line front end: simulate | measure | recover | figure2 | sweep | info.
// Experiments are defined by a JSON config; flags only override paths, seed,
// trial count and verbosity. Exit codes: 0 success, 2 configuration error,
// 3 runtime error, 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cavity_cs/config.hpp"
#include "cavity_cs/outputs.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    int verbosity = 0;
    std::string command;
    std::string matrix_path;
    std::string schedules_path;
    std::string measurements_path;
};

cavity_cs::FullConfig load_config(const Options& opt) {
    cavity_cs::FullConfig cfg;
    if (opt.config_path.empty()) {
        cfg = cavity_cs::parse_config_json(nlohmann::json::object());
    } else {
        cfg = cavity_cs::parse_config(opt.config_path);
    }
    if (opt.seed) cfg.experiment.seed = *opt.seed;
    if (opt.trials) cfg.experiment.trials = *opt.trials;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressed-sensing measurement simulator for a driven cavity field"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "JSON experiment config");
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--seed", opt.seed, "master seed override");
    app.add_option("--trials", opt.trials, "trial count override");
    app.add_flag("-v", opt.verbosity, "increase verbosity");

    auto* simulate = app.add_subcommand("simulate", "synthesize drive, beta and alpha series");
    auto* measure = app.add_subcommand("measure", "build the sensing matrix and measurements");
    auto* recover = app.add_subcommand("recover", "recover beta/alpha from measurements");
    recover->add_option("--matrix", opt.matrix_path, "sensing matrix CSV (with --schedules)");
    recover->add_option("--schedules", opt.schedules_path, "flip schedule sidecar CSV");
    recover->add_option("--measurements", opt.measurements_path, "measurement vector CSV");
    auto* figure2 = app.add_subcommand("figure2", "full trajectory-recovery reproduction");
    auto* sweep = app.add_subcommand("sweep", "success-probability sweep over (M, K)");
    auto* info = app.add_subcommand("info", "print the resolved configuration summary");

    CLI11_PARSE(app, argc, argv);

    try {
        const cavity_cs::FullConfig cfg = load_config(opt);
        const std::filesystem::path dir = opt.out_dir;
        if (opt.verbosity > 0)
            std::cerr << "config resolved; command starting" << std::endl;

        if (simulate->parsed()) {
            cavity_cs::emit_simulate(cfg, dir);
            std::cout << "wrote simulation series to " << dir.string() << "\n";
        } else if (measure->parsed()) {
            cavity_cs::emit_measure(cfg, dir);
            std::cout << "wrote sensing matrix and measurements to " << dir.string() << "\n";
        } else if (recover->parsed()) {
            cavity_cs::RecoverInputs inputs;
            if (!opt.matrix_path.empty()) inputs.matrix = opt.matrix_path;
            if (!opt.schedules_path.empty()) inputs.schedules = opt.schedules_path;
            if (!opt.measurements_path.empty()) inputs.measurements = opt.measurements_path;
            cavity_cs::emit_recover(cfg, dir, inputs);
            std::cout << "wrote recovery outputs to " << dir.string() << "\n";
        } else if (figure2->parsed()) {
            const auto r = cavity_cs::emit_figure2(cfg, dir);
            std::printf("mse alpha re=%.6e im=%.6e (clean reference), max|alpha|^2=%.6e\n",
                        r.mse_alpha_re, r.mse_alpha_im, r.max_alpha_sq);
            std::cout << "wrote figure2 outputs to " << dir.string() << "\n";
        } else if (sweep->parsed()) {
            const auto report = cavity_cs::emit_sweep(cfg, dir);
            for (const auto& c : report.cells) {
                std::printf("M=%4d K=%4d  success %4d/%d  p=%.3f\n", c.measurements, c.flips,
                            c.successes, c.trials, c.probability);
            }
            std::cout << "wrote sweep outputs to " << dir.string() << "\n";
        } else if (info->parsed()) {
            std::cout << cavity_cs::info_text(cfg);
        }
        return 0;
    } catch (const cavity_cs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& e) {
        // writer failures mention paths; classify them as I/O
        const std::string what = e.what();
        const bool io_flavored = what.find("cannot open") != std::string::npos ||
                                 what.find("write failed") != std::string::npos ||
                                 what.find("rename failed") != std::string::npos ||
                                 what.find("cannot create output directory") != std::string::npos;
        std::cerr << (io_flavored ? "i/o error: " : "runtime error: ") << what << "\n";
        return io_flavored ? kExitIo : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
