// banditlab CLI: experiment runner, tuning calculator, hazard checker,
// penalty decomposition and sweeps over config directories.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "banditlab/distributions.hpp"
#include "banditlab/harness.hpp"
#include "banditlab/hazard.hpp"
#include "banditlab/tuning.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

banditlab::ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j;
    in >> j;
    banditlab::ExperimentConfig cfg = banditlab::ExperimentConfig::from_json(j);
    if (const char* env = std::getenv("BANDITLAB_MASTER_SEED")) {
        cfg.master_seed = std::strtoull(env, nullptr, 10);
    }
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path.string());
    out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool rounds,
            bool decompose) {
    banditlab::ExperimentConfig cfg = load_config(config_path);
    const banditlab::RegretReport report = banditlab::run_experiment(cfg, decompose);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        json manifest{{"config", cfg.to_json()}, {"report", report.to_json()}};
        write_text(fs::path(out_dir) / "report.json", manifest.dump(2) + "\n");
        std::ofstream csv(fs::path(out_dir) / "runs.csv");
        csv << "seed,regret\n";
        for (std::size_t s = 0; s < report.per_seed_regret.size(); ++s) {
            csv << s << ',' << report.per_seed_regret[s] << '\n';
        }
        if (rounds) {
            for (int s = 0; s < cfg.n_seeds; ++s) {
                const banditlab::EpisodeResult r =
                    banditlab::run_episode(cfg, static_cast<std::uint64_t>(s), true);
                std::ofstream rcsv(fs::path(out_dir) / ("rounds_" + std::to_string(s) + ".csv"));
                banditlab::write_round_log_csv(rcsv, r.rounds);
            }
        }
    }
    std::cout << report.to_json().dump(2) << "\n";
    return 0;
}

int cmd_tune(const std::string& kind, double param, int n_arms, long horizon) {
    using banditlab::DistKind;
    banditlab::TuningResult result;
    const double n = n_arms, t = static_cast<double>(horizon);
    const DistKind k = banditlab::dist_kind_from_name(kind);
    switch (k) {
        case DistKind::uniform01:
        case DistKind::bounded_table:
            result = banditlab::eta_uniform(n, t);
            break;
        case DistKind::gaussian:
            result = banditlab::eta_gaussian(n, t);
            break;
        default: {
            // generalized-hazard schedule with a numerically estimated sup
            banditlab::DistributionSpec d = [&]() {
                switch (k) {
                    case DistKind::gumbel: return banditlab::DistributionSpec::gumbel();
                    case DistKind::exponential: return banditlab::DistributionSpec::exponential(param);
                    case DistKind::pareto: return banditlab::DistributionSpec::pareto(param);
                    case DistKind::weibull: return banditlab::DistributionSpec::weibull(param);
                    case DistKind::frechet: return banditlab::DistributionSpec::frechet(param);
                    case DistKind::exp_power: return banditlab::DistributionSpec::exp_power(param);
                    default: throw std::invalid_argument("unsupported kind for tune");
                }
            }();
            const bool bounded_hazard = k == DistKind::gumbel || k == DistKind::exponential ||
                                        k == DistKind::pareto || k == DistKind::frechet;
            const double alpha = bounded_hazard ? 0.0 : 0.5;
            const double zmax = d.quantile(1.0 - 1e-9);
            const banditlab::HazardReport hz =
                banditlab::sup_generalized_hazard(d, alpha, {d.quantile(1e-9), zmax}, 4001);
            const double q = d.has_emax_bound() ? d.emax_bound(n) - d.mean() : 0.0;
            if (!(q > 0.0)) throw std::runtime_error("tune: no certified EMAX envelope for " + kind);
            result = banditlab::eta_master(hz.sup_estimate, alpha, n, t, q);
            break;
        }
    }
    std::cout << result.to_json().dump(2) << "\n";
    return 0;
}

int cmd_check_hazard(const std::string& dist_json, double alpha, double zmin, double zmax,
                     int points) {
    const banditlab::DistributionSpec d =
        banditlab::DistributionSpec::from_json(json::parse(dist_json));
    const banditlab::HazardReport report =
        banditlab::sup_generalized_hazard(d, alpha, {zmin, zmax}, points);
    std::cout << report.to_json().dump(2) << "\n";
    return 0;
}

int cmd_decompose(const std::string& config_path) {
    banditlab::ExperimentConfig cfg = load_config(config_path);
    json out = json::array();
    for (int s = 0; s < cfg.n_seeds; ++s) {
        const banditlab::PenaltyDecomposition d =
            banditlab::decompose_penalties(cfg, static_cast<std::uint64_t>(s));
        json row = d.to_json();
        row["seed"] = s;
        out.push_back(row);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_dir, int jobs, const std::string& out_dir,
              bool decompose) {
    std::vector<banditlab::ExperimentConfig> configs;
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(config_dir)) {
        if (entry.path().extension() == ".json") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) configs.push_back(load_config(p.string()));
    if (configs.empty()) throw std::runtime_error("sweep: no .json configs in " + config_dir);

    const std::vector<banditlab::SweepRow> rows = banditlab::sweep(configs, jobs, decompose);

    std::ostringstream csv;
    banditlab::write_sweep_csv(csv, rows);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "sweep.csv", csv.str());
        json manifest = json::array();
        for (const auto& cfg : configs) manifest.push_back(cfg.to_json());
        write_text(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    } else {
        std::cout << csv.str();
    }
    int failures = 0;
    for (const auto& r : rows) {
        if (!r.error.empty()) ++failures;
    }
    if (failures > 0) std::cerr << failures << " run(s) failed; see the error column\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adversarial bandit experiments with perturbed-leader learners"};
    app.require_subcommand(1);

    std::string config_path, out_dir, dist_json, kind, config_dir;
    double alpha = 0.0, zmin = -10.0, zmax = 10.0, param = 2.0;
    int points = 1001, n_arms = 2, jobs = 1;
    long horizon = 1000;
    bool rounds = false, decompose = false;

    CLI::App* run = app.add_subcommand("run", "run a config over its seeds");
    run->add_option("--config", config_path, "config JSON path")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--rounds", rounds, "also dump per-round CSV per seed");
    run->add_flag("--decompose", decompose, "include the penalty decomposition");

    CLI::App* tune = app.add_subcommand("tune", "print the scale schedule for a distribution");
    tune->add_option("--dist", kind, "distribution kind")->required();
    tune->add_option("--param", param, "shape/rate/beta parameter when applicable");
    tune->add_option("--N", n_arms, "number of arms")->required();
    tune->add_option("--T", horizon, "horizon")->required();

    CLI::App* hz = app.add_subcommand("check-hazard", "grid-evaluate the generalized hazard rate");
    hz->add_option("--dist", dist_json, "distribution spec JSON")->required();
    hz->add_option("--alpha", alpha, "generalized-hazard exponent in [0,1)")->required();
    hz->add_option("--zmin", zmin, "grid lower edge")->required();
    hz->add_option("--zmax", zmax, "grid upper edge")->required();
    hz->add_option("--points", points, "grid points (>= 100)")->required();

    CLI::App* dec = app.add_subcommand("decompose", "penalty decomposition per seed");
    dec->add_option("--config", config_path, "config JSON path")->required();

    CLI::App* sw = app.add_subcommand("sweep", "run every config in a directory");
    sw->add_option("--configs", config_dir, "directory of config JSON files")->required();
    sw->add_option("--jobs", jobs, "worker threads");
    sw->add_option("--out", out_dir, "output directory");
    sw->add_flag("--decompose", decompose, "include decompositions for exact runs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, rounds, decompose);
        if (tune->parsed()) return cmd_tune(kind, param, n_arms, horizon);
        if (hz->parsed()) return cmd_check_hazard(dist_json, alpha, zmin, zmax, points);
        if (dec->parsed()) return cmd_decompose(config_path);
        if (sw->parsed()) return cmd_sweep(config_dir, jobs, out_dir, decompose);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
