// Command-line front end for the SEPM-QKD simulator.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sepm/attacks.hpp"
#include "sepm/config.hpp"
#include "sepm/keyrate.hpp"
#include "sepm/montecarlo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

std::string csv_string(std::span<const sepm::KeyRatePoint> points) {
    std::ostringstream os;
    sepm::write_csv(os, points);
    return os.str();
}

/// Config file path from --config, else the SEPM_CONFIG environment variable.
std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc - 1; ++i)
        if (std::string(argv[i]) == "--config") return argv[i + 1];
    if (const char* env = std::getenv("SEPM_CONFIG")) return env;
    return {};
}

void add_param_flags(CLI::App* cmd, sepm::RunConfig& cfg, std::string& dark_mode) {
    cmd->add_option("--gamma", cfg.params.gamma, "local-oscillator amplitude")
        ->capture_default_str();
    cmd->add_option("--eta-d", cfg.params.eta_d, "detector efficiency")
        ->capture_default_str();
    cmd->add_option("--p-dark", cfg.params.p_dark, "dark count probability per gate")
        ->capture_default_str();
    cmd->add_option("--e-d", cfg.params.e_d, "misalignment error fraction")
        ->capture_default_str();
    cmd->add_option("--f", cfg.params.f, "error-correction inefficiency")
        ->capture_default_str();
    cmd->add_option("--beta", cfg.params.beta_l, "fiber loss, dB/km")
        ->capture_default_str();
    cmd->add_option("--dark-mode", dark_mode, "dark count model: quadratic|literal")
        ->capture_default_str();
    cmd->add_flag("--bs,!--no-bs", cfg.params.include_bs_attack,
                  "include the beam-splitting attack term")
        ->capture_default_str();
}

void add_sweep_flags(CLI::App* cmd, sepm::RunConfig& cfg) {
    cmd->add_option("--x-min", cfg.sweep.x_min, "per-arm distance start, km")
        ->capture_default_str();
    cmd->add_option("--x-max", cfg.sweep.x_max, "per-arm distance end, km")
        ->capture_default_str();
    cmd->add_option("--step", cfg.sweep.step, "grid step, km")->capture_default_str();
}

int run(int argc, char** argv) {
    sepm::RunConfig cfg;
    const std::string config_path = find_config_path(argc, argv);
    if (!config_path.empty()) cfg = sepm::load_config(config_path);
    std::string dark_mode = sepm::to_string(cfg.params.dark_mode);

    CLI::App app{"SEPM-QKD simulator: key rates, attacks, Bell statistics"};
    app.require_subcommand(1);
    // let --config appear after the subcommand name as well
    app.fallthrough();
    std::string config_dummy;
    app.add_option("--config", config_dummy, "JSON config file (or SEPM_CONFIG env var)");
    std::string out_path;

    auto* keyrate_cmd = app.add_subcommand("keyrate", "distance sweep of the key-rate bound (CSV)");
    add_param_flags(keyrate_cmd, cfg, dark_mode);
    add_sweep_flags(keyrate_cmd, cfg);
    keyrate_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* mc_cmd = app.add_subcommand("montecarlo", "sampled protocol session (JSON report)");
    add_param_flags(mc_cmd, cfg, dark_mode);
    std::int64_t mc_n = 100000;
    double mc_eta = 0.01;
    int mc_workers = 1;
    std::string rounds_csv;
    mc_cmd->add_option("--n", mc_n, "number of coincidences")->capture_default_str();
    mc_cmd->add_option("--eta", mc_eta, "per-arm transmittance")->capture_default_str();
    mc_cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    mc_cmd->add_option("--workers", mc_workers, "worker threads")->capture_default_str();
    mc_cmd->add_option("--rounds-csv", rounds_csv, "also write per-round CSV here");
    mc_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* attack_cmd = app.add_subcommand("attack", "attack reports (JSON)");
    attack_cmd->require_subcommand(1);
    auto* collective_cmd = attack_cmd->add_subcommand("collective", "collective attack at given QBER");
    double qber = 0.0;
    collective_cmd->add_option("--qber", qber, "induced error rate e")->required();
    collective_cmd->add_option("--out", out_path, "output file (default stdout)");
    auto* bs_cmd = attack_cmd->add_subcommand("bs", "beam-splitting attack");
    double bs_eta = 0.5;
    bs_cmd->add_option("--eta", bs_eta, "per-arm transmittance")->required();
    bs_cmd->add_option("--gamma", cfg.params.gamma, "oscillator amplitude")
        ->capture_default_str();
    bs_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* bounds_cmd = app.add_subcommand("bounds", "PLOB / single-repeater bound table (CSV)");
    add_sweep_flags(bounds_cmd, cfg);
    bounds_cmd->add_option("--beta", cfg.params.beta_l, "fiber loss, dB/km")
        ->capture_default_str();
    bounds_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* figures_cmd = app.add_subcommand("figures", "key-rate curve family (one CSV per curve)");
    std::string fig_dir = ".";
    figures_cmd->add_option("--out", fig_dir, "output directory")->capture_default_str();
    add_sweep_flags(figures_cmd, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    cfg.params.dark_mode = sepm::dark_mode_from_string(dark_mode);
    cfg.validate();

    if (*keyrate_cmd) {
        const auto grid = sepm::distance_grid(cfg.sweep.x_min, cfg.sweep.x_max, cfg.sweep.step);
        write_text(out_path, csv_string(sepm::sweep(cfg.params, grid)));
    } else if (*mc_cmd) {
        sepm::McConfig mc{cfg.seed, mc_n, cfg.params, mc_eta, mc_workers};
        const auto records = sepm::run_session(mc);
        if (!rounds_csv.empty()) {
            std::ofstream rc(rounds_csv, std::ios::binary);
            if (!rc) throw std::runtime_error("cannot open output file: " + rounds_csv);
            sepm::write_rounds_csv(rc, records);
        }
        write_text(out_path, sepm::summarize(records).to_json() + "\n");
    } else if (*collective_cmd) {
        write_text(out_path,
                   sepm::collective_attack_report(qber).to_json(qber, cfg.params.gamma, true) + "\n");
    } else if (*bs_cmd) {
        write_text(out_path,
                   sepm::bs_attack_report(bs_eta, cfg.params.gamma)
                           .to_json(bs_eta, cfg.params.gamma, false) + "\n");
    } else if (*bounds_cmd) {
        std::ostringstream os;
        os << "x_km,total_km,eta_total,plob,srb\n";
        os << std::scientific;
        os.precision(9);
        for (double x : sepm::distance_grid(cfg.sweep.x_min, cfg.sweep.x_max, cfg.sweep.step)) {
            const double eta = sepm::transmittance(x, cfg.params.beta_l);
            os << x << ',' << 2.0 * x << ',' << eta * eta << ','
               << sepm::plob_bound(eta * eta) << ','
               << sepm::single_repeater_bound(eta * eta) << '\n';
        }
        write_text(out_path, os.str());
    } else if (*figures_cmd) {
        std::filesystem::create_directories(fig_dir);
        const auto grid = sepm::distance_grid(cfg.sweep.x_min, cfg.sweep.x_max, cfg.sweep.step);
        for (double gamma : {0.002, 0.001, 0.0005}) {
            for (bool bs : {true, false}) {
                sepm::ProtocolParams p = cfg.params;
                p.gamma = gamma;
                p.include_bs_attack = bs;
                std::ostringstream name;
                name << fig_dir << "/keyrate_gamma" << gamma
                     << (bs ? "_bs_on" : "_bs_off") << ".csv";
                write_text(name.str(), csv_string(sepm::sweep(p, grid)));
            }
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sepm::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
