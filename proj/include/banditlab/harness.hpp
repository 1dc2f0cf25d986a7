#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "banditlab/adversaries.hpp"
#include "banditlab/distributions.hpp"
#include "banditlab/gbpa.hpp"
#include "banditlab/tuning.hpp"

namespace banditlab {

struct AdversaryConfig {
    std::string kind;  // constant_gap | stochastic | switching
    double gap = 1.0;
    int best_arm = 0;
    std::vector<double> means;
    long period = 1;
    std::uint64_t seed = 0;

    GainSequence materialize(int n_arms, long horizon, std::uint64_t episode_seed) const;
    nlohmann::json to_json() const;
    static AdversaryConfig from_json(const nlohmann::json& j);
};

struct ExperimentConfig {
    std::string algorithm = "ftpl_gr";  // gbpa_exact | ftpl_gr | exp3
    DistributionSpec distribution = DistributionSpec::gaussian();
    AdversaryConfig adversary;
    int n_arms = 2;
    long horizon = 1;
    // fixed | uniform_cuberoot | hazard_master | gaussian_tuned
    std::string eta_rule = "fixed";
    double fixed_eta = 1.0;
    double master_alpha = 0.5;  // for hazard_master
    double master_c = 0.0;      // for hazard_master; must be set explicitly
    int n_seeds = 1;
    long gr_cap = 0;  // 0: default ceil(sqrt(NT))
    std::uint64_t master_seed = 1;
    int decompose_thin = 10;
    long decompose_samples = 2000;
    std::string out_dir;

    void validate() const;
    std::uint64_t config_hash() const;  // FNV-1a over the canonical JSON, stable across runs
    TuningResult tuning() const;
    DistributionSpec scaled_distribution() const;  // base distribution at the scheduled eta
    GRConfig gr_config() const;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct EpisodeResult {
    std::uint64_t seed = 0;
    double regret = 0.0;
    double learner_total_gain = 0.0;
    double best_fixed_total_gain = 0.0;
    // sum_t <p_t, g_t> accumulated when the exact-gradient path runs
    std::optional<double> expected_gain_sum;
    long cap_hits = 0;
    std::vector<RoundLog> rounds;  // kept only on request
};

struct PenaltyDecomposition {
    double overestimation_est = 0.0;
    double overestimation_se = 0.0;
    double underestimation_est = 0.0;
    double underestimation_se = 0.0;
    double divergence_sum_est = 0.0;
    double divergence_sum_se = 0.0;
    int thinned_every = 1;
    bool approximate = false;  // thinned_every > 1
    double regret = 0.0;       // realized regret of the replayed episode
    nlohmann::json to_json() const;
};

struct RegretReport {
    int n_seeds = 0;
    std::vector<double> per_seed_regret;
    double mean_regret = 0.0;
    double std_regret = 0.0;       // across seeds
    double std_error_regret = 0.0; // std_regret / sqrt(n_seeds)
    std::optional<PenaltyDecomposition> decomposition;  // seed-averaged
    std::optional<TuningResult> certificate;
    double trivial_bound = 0.0;  // horizon; certificates above it are vacuous
    double gr_bias_budget = 0.0; // NT/(e M) for resampled runs, else 0
    nlohmann::json to_json() const;
};

EpisodeResult run_episode(const ExperimentConfig& cfg, std::uint64_t seed,
                          bool keep_rounds = false);

// Replays an exact-gradient episode and measures the three penalty terms.
// Requires algorithm == gbpa_exact. The divergence sum is evaluated on every
// `decompose_thin`-th round and scaled, flagged approximate when thinned.
PenaltyDecomposition decompose_penalties(const ExperimentConfig& cfg, std::uint64_t seed);

RegretReport aggregate_report(const ExperimentConfig& cfg, std::span<const EpisodeResult> runs);

// Runs cfg over its n_seeds seeds (0..n_seeds-1 derived streams).
RegretReport run_experiment(const ExperimentConfig& cfg, bool with_decomposition = false);

struct SweepRow {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    std::string dist;
    int n_arms = 0;
    long horizon = 0;
    double eta = 0.0;
    double regret = 0.0;
    std::optional<double> over_est;
    std::optional<double> under_est;
    std::optional<double> div_est;
    std::string error;  // nonempty when the run failed
};

// Cross-product of configs x seeds with isolated per-run failures; results
// are ordered deterministically by (config index, seed) regardless of the
// number of workers.
std::vector<SweepRow> sweep(std::span<const ExperimentConfig> configs, int jobs,
                            bool with_decomposition = false);

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

struct SlopeFit {
    double slope = 0.0;
    double ci_half_width = 0.0;  // 95% normal-approximation interval
    double intercept = 0.0;
};

// Least-squares slope of log(mean regret) against log(T). Requires at least
// four distinct horizons spanning two decades and positive mean regrets.
SlopeFit fit_regret_exponent(std::span<const std::pair<double, double>> horizon_and_regret);

}  // namespace banditlab
