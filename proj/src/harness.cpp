#include "banditlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "banditlab/exp3.hpp"
#include "banditlab/smoothing.hpp"

namespace banditlab {

namespace {

constexpr std::uint64_t kAdversaryStream = 0xadULL;
constexpr std::uint64_t kLearnerStream = 0x1eULL;
constexpr std::uint64_t kDiagnosticsStream = 0xd1ULL;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

double grad_abs_tol() { return 1e-9; }

}  // namespace

GainSequence AdversaryConfig::materialize(int n_arms, long horizon,
                                          std::uint64_t episode_seed) const {
    if (kind == "constant_gap") return gen_constant_gap(n_arms, horizon, gap, best_arm);
    if (kind == "switching") return gen_switching(n_arms, horizon, period);
    if (kind == "stochastic") {
        std::vector<double> m = means;
        if (m.empty()) m.assign(static_cast<std::size_t>(n_arms), 0.5);
        // Drawn ahead of play from a stream independent of the learner's.
        return gen_stochastic(n_arms, horizon, m, Rng::derive({seed, episode_seed, kAdversaryStream}));
    }
    throw std::invalid_argument("unknown adversary kind: " + kind);
}

nlohmann::json AdversaryConfig::to_json() const {
    nlohmann::json j{{"kind", kind}};
    if (kind == "constant_gap") {
        j["gap"] = gap;
        j["best_arm"] = best_arm;
    } else if (kind == "switching") {
        j["period"] = period;
    } else if (kind == "stochastic") {
        j["means"] = means;
        j["seed"] = seed;
    }
    return j;
}

AdversaryConfig AdversaryConfig::from_json(const nlohmann::json& j) {
    AdversaryConfig a;
    a.kind = j.at("kind").get<std::string>();
    a.gap = j.value("gap", 1.0);
    a.best_arm = j.value("best_arm", 0);
    a.period = j.value("period", 1L);
    a.seed = j.value("seed", 0ULL);
    if (j.contains("means")) a.means = j.at("means").get<std::vector<double>>();
    return a;
}

void ExperimentConfig::validate() const {
    if (algorithm != "gbpa_exact" && algorithm != "ftpl_gr" && algorithm != "exp3") {
        throw std::invalid_argument("unknown algorithm: " + algorithm);
    }
    if (n_arms < 2) throw std::invalid_argument("config: need N >= 2");
    if (horizon < 1) throw std::invalid_argument("config: need T >= 1");
    if (n_seeds < 1) throw std::invalid_argument("config: need n_seeds >= 1");
    if (eta_rule != "fixed" && eta_rule != "uniform_cuberoot" && eta_rule != "hazard_master" &&
        eta_rule != "gaussian_tuned") {
        throw std::invalid_argument("unknown eta rule: " + eta_rule);
    }
    if (eta_rule == "uniform_cuberoot" && !distribution.support().bounded_right) {
        throw std::invalid_argument("uniform_cuberoot rule requires a bounded-support distribution");
    }
    if (eta_rule == "gaussian_tuned" && distribution.kind() != DistKind::gaussian) {
        throw std::invalid_argument("gaussian_tuned rule requires the gaussian distribution");
    }
    if (eta_rule == "hazard_master" && !(master_c > 0.0)) {
        throw std::invalid_argument("hazard_master rule requires a positive master_c");
    }
    if (eta_rule == "fixed" && !(fixed_eta > 0.0)) {
        throw std::invalid_argument("fixed eta must be positive");
    }
}

TuningResult ExperimentConfig::tuning() const {
    const double n = static_cast<double>(n_arms);
    const double t = static_cast<double>(horizon);
    if (eta_rule == "uniform_cuberoot") return eta_uniform(n, t);
    if (eta_rule == "gaussian_tuned") return eta_gaussian(n, t);
    if (eta_rule == "hazard_master") {
        const double q = distribution.emax_bound(n) - distribution.mean();
        return eta_master(master_c, master_alpha, n, t, q);
    }
    TuningResult r;
    r.rule = "fixed";
    r.eta = fixed_eta;
    r.predicted_bound = t;  // no certificate beyond the trivial one
    return r;
}

DistributionSpec ExperimentConfig::scaled_distribution() const {
    return distribution.scale(tuning().eta);
}

GRConfig ExperimentConfig::gr_config() const {
    if (gr_cap > 0) {
        GRConfig c;
        c.cap = gr_cap;
        return c;
    }
    return GRConfig::default_for(n_arms, horizon);
}

nlohmann::json ExperimentConfig::to_json() const {
    return nlohmann::json{{"algorithm", algorithm},
                          {"distribution", distribution.to_json()},
                          {"adversary", adversary.to_json()},
                          {"N", n_arms},
                          {"T", horizon},
                          {"eta_rule", eta_rule},
                          {"eta", fixed_eta},
                          {"master_alpha", master_alpha},
                          {"master_c", master_c},
                          {"n_seeds", n_seeds},
                          {"gr_cap", gr_cap},
                          {"master_seed", master_seed},
                          {"decompose_thin", decompose_thin},
                          {"decompose_samples", decompose_samples}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.algorithm = j.value("algorithm", std::string("ftpl_gr"));
    if (j.contains("distribution")) c.distribution = DistributionSpec::from_json(j.at("distribution"));
    if (j.contains("adversary")) c.adversary = AdversaryConfig::from_json(j.at("adversary"));
    c.n_arms = j.value("N", 2);
    c.horizon = j.value("T", 1L);
    c.eta_rule = j.value("eta_rule", std::string("fixed"));
    c.fixed_eta = j.value("eta", 1.0);
    c.master_alpha = j.value("master_alpha", 0.5);
    c.master_c = j.value("master_c", 0.0);
    c.n_seeds = j.value("n_seeds", 1);
    c.gr_cap = j.value("gr_cap", 0L);
    c.master_seed = j.value("master_seed", 1ULL);
    c.decompose_thin = j.value("decompose_thin", 10);
    c.decompose_samples = j.value("decompose_samples", 2000L);
    c.validate();
    return c;
}

std::uint64_t ExperimentConfig::config_hash() const { return fnv1a(to_json().dump()); }

namespace {

struct EpisodeTrace {
    EpisodeResult result;
    BanditState final_state;            // for gbpa paths
    std::vector<double> lhat_initial;   // zeros
};

EpisodeTrace play_episode(const ExperimentConfig& cfg, std::uint64_t seed, bool keep_rounds,
                          std::vector<std::pair<std::vector<double>, std::vector<double>>>*
                              decompose_states /* (lhat_{t-1}, g_t) on thinned rounds */) {
    const GainSequence gains = cfg.adversary.materialize(cfg.n_arms, cfg.horizon, seed);
    const DistributionSpec dist = cfg.scaled_distribution();
    Rng rng(Rng::derive({cfg.master_seed, cfg.config_hash(), seed, kLearnerStream}));

    EpisodeTrace trace;
    trace.result.seed = seed;

    double learner_total = 0.0;
    double expected_gain_sum = 0.0;
    const bool exact = cfg.algorithm == "gbpa_exact";
    const bool ftpl = cfg.algorithm == "ftpl_gr";

    if (exact || ftpl) {
        BanditState state = BanditState::zeros(cfg.n_arms);
        const GRConfig gr = cfg.gr_config();
        // One-entry cache: the gradient at the current state is consumed both
        // by the step and by the <p_t, g_t> accumulator.
        std::vector<double> cached_lhat, cached_p;
        const GradFn grad = [&](std::span<const double> lhat) {
            if (cached_lhat.size() != lhat.size() ||
                !std::equal(lhat.begin(), lhat.end(), cached_lhat.begin())) {
                cached_p = grad_quadrature(lhat, dist, grad_abs_tol());
                cached_lhat.assign(lhat.begin(), lhat.end());
            }
            return cached_p;
        };
        for (long t = 0; t < cfg.horizon; ++t) {
            const auto g = gains.row(t);
            if (decompose_states && t % cfg.decompose_thin == 0) {
                decompose_states->emplace_back(state.lhat,
                                               std::vector<double>(g.begin(), g.end()));
            }
            if (exact) {
                const std::vector<double> p = grad(state.lhat);
                for (std::size_t i = 0; i < p.size(); ++i) expected_gain_sum += p[i] * g[i];
            }
            std::pair<RoundLog, BanditState> step =
                exact ? gbpa_step_exact(state, g, dist, grad, rng)
                      : gbpa_step_ftpl(state, g, dist, gr, rng);
            learner_total += step.first.gain;
            if (step.first.gr_cap_hit) ++trace.result.cap_hits;
            if (keep_rounds) trace.result.rounds.push_back(step.first);
            state = std::move(step.second);
        }
        trace.final_state = std::move(state);
        if (exact) trace.result.expected_gain_sum = expected_gain_sum;
    } else {
        Exp3State state = Exp3State::init(cfg.n_arms, exp3_default_rate(cfg.n_arms, cfg.horizon));
        for (long t = 0; t < cfg.horizon; ++t) {
            auto [log, next] = exp3_step(state, gains.row(t), rng);
            log.t = t + 1;
            learner_total += log.gain;
            if (keep_rounds) trace.result.rounds.push_back(log);
            state = std::move(next);
        }
    }

    trace.result.learner_total_gain = learner_total;
    trace.result.best_fixed_total_gain = gains.best_fixed_arm_total();
    trace.result.regret = trace.result.best_fixed_total_gain - learner_total;
    return trace;
}

}  // namespace

EpisodeResult run_episode(const ExperimentConfig& cfg, std::uint64_t seed, bool keep_rounds) {
    cfg.validate();
    return play_episode(cfg, seed, keep_rounds, nullptr).result;
}

PenaltyDecomposition decompose_penalties(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (cfg.algorithm != "gbpa_exact") {
        throw std::invalid_argument("decompose_penalties: requires the exact-gradient algorithm");
    }
    std::vector<std::pair<std::vector<double>, std::vector<double>>> states;
    EpisodeTrace trace = play_episode(cfg, seed, false, &states);

    const DistributionSpec dist = cfg.scaled_distribution();
    Rng diag_rng(Rng::derive({cfg.master_seed, cfg.config_hash(), seed, kDiagnosticsStream}));

    PenaltyDecomposition out;
    out.regret = trace.result.regret;
    out.thinned_every = cfg.decompose_thin;
    out.approximate = cfg.decompose_thin > 1;

    const std::vector<double> zeros(static_cast<std::size_t>(cfg.n_arms), 0.0);
    const long n_mc = cfg.decompose_samples;
    const McEstimate over = potential_mc(zeros, dist, n_mc, diag_rng);
    out.overestimation_est = over.value;
    out.overestimation_se = over.std_error;

    const McEstimate smooth_at_end = potential_mc(trace.final_state.lhat, dist, n_mc, diag_rng);
    const double phi_end =
        *std::max_element(trace.final_state.lhat.begin(), trace.final_state.lhat.end());
    out.underestimation_est = phi_end - smooth_at_end.value;
    out.underestimation_se = smooth_at_end.std_error;

    double div_sum = 0.0, div_var = 0.0;
    for (const auto& [lhat, g] : states) {
        const DivergencePenaltyEstimate d =
            divergence_penalty_mc(lhat, g, dist, n_mc, diag_rng);
        div_sum += d.value;
        div_var += d.std_error * d.std_error;
    }
    const double scale = static_cast<double>(cfg.decompose_thin);
    out.divergence_sum_est = div_sum * scale;
    out.divergence_sum_se = std::sqrt(div_var) * scale;
    return out;
}

nlohmann::json PenaltyDecomposition::to_json() const {
    return nlohmann::json{{"overestimation_est", overestimation_est},
                          {"overestimation_se", overestimation_se},
                          {"underestimation_est", underestimation_est},
                          {"underestimation_se", underestimation_se},
                          {"divergence_sum_est", divergence_sum_est},
                          {"divergence_sum_se", divergence_sum_se},
                          {"thinned_every", thinned_every},
                          {"approximate", approximate},
                          {"regret", regret}};
}

RegretReport aggregate_report(const ExperimentConfig& cfg, std::span<const EpisodeResult> runs) {
    RegretReport rep;
    rep.n_seeds = static_cast<int>(runs.size());
    rep.per_seed_regret.reserve(runs.size());
    double sum = 0.0;
    for (const EpisodeResult& r : runs) {
        rep.per_seed_regret.push_back(r.regret);
        sum += r.regret;
    }
    rep.mean_regret = runs.empty() ? 0.0 : sum / static_cast<double>(runs.size());
    double ss = 0.0;
    for (const double r : rep.per_seed_regret) ss += (r - rep.mean_regret) * (r - rep.mean_regret);
    rep.std_regret = runs.size() > 1 ? std::sqrt(ss / static_cast<double>(runs.size() - 1)) : 0.0;
    rep.std_error_regret =
        runs.empty() ? 0.0 : rep.std_regret / std::sqrt(static_cast<double>(runs.size()));
    rep.trivial_bound = static_cast<double>(cfg.horizon);
    rep.certificate = cfg.tuning();
    if (cfg.algorithm == "ftpl_gr") {
        rep.gr_bias_budget = cfg.gr_config().bias_budget(cfg.n_arms, cfg.horizon);
    }
    return rep;
}

RegretReport run_experiment(const ExperimentConfig& cfg, bool with_decomposition) {
    cfg.validate();
    std::vector<EpisodeResult> runs;
    runs.reserve(static_cast<std::size_t>(cfg.n_seeds));
    for (int s = 0; s < cfg.n_seeds; ++s) {
        runs.push_back(run_episode(cfg, static_cast<std::uint64_t>(s)));
    }
    RegretReport rep = aggregate_report(cfg, runs);
    if (with_decomposition) {
        PenaltyDecomposition acc;
        acc.thinned_every = cfg.decompose_thin;
        acc.approximate = cfg.decompose_thin > 1;
        double over_var = 0.0, under_var = 0.0, div_var = 0.0;
        for (int s = 0; s < cfg.n_seeds; ++s) {
            const PenaltyDecomposition d = decompose_penalties(cfg, static_cast<std::uint64_t>(s));
            acc.overestimation_est += d.overestimation_est;
            acc.underestimation_est += d.underestimation_est;
            acc.divergence_sum_est += d.divergence_sum_est;
            over_var += d.overestimation_se * d.overestimation_se;
            under_var += d.underestimation_se * d.underestimation_se;
            div_var += d.divergence_sum_se * d.divergence_sum_se;
        }
        const double n = static_cast<double>(cfg.n_seeds);
        acc.overestimation_est /= n;
        acc.underestimation_est /= n;
        acc.divergence_sum_est /= n;
        acc.overestimation_se = std::sqrt(over_var) / n;
        acc.underestimation_se = std::sqrt(under_var) / n;
        acc.divergence_sum_se = std::sqrt(div_var) / n;
        rep.decomposition = acc;
    }
    return rep;
}

nlohmann::json RegretReport::to_json() const {
    nlohmann::json j{{"n_seeds", n_seeds},
                     {"per_seed_regret", per_seed_regret},
                     {"mean_regret", mean_regret},
                     {"std_regret", std_regret},
                     {"std_error_regret", std_error_regret},
                     {"trivial_bound", trivial_bound},
                     {"gr_bias_budget", gr_bias_budget}};
    j["decomposition"] = decomposition ? decomposition->to_json() : nlohmann::json(nullptr);
    j["certificate"] = certificate ? certificate->to_json() : nlohmann::json(nullptr);
    return j;
}

std::vector<SweepRow> sweep(std::span<const ExperimentConfig> configs, int jobs,
                            bool with_decomposition) {
    if (jobs < 1) jobs = 1;
    struct Task {
        std::size_t config_index;
        int seed;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        configs[c].validate();
        for (int s = 0; s < configs[c].n_seeds; ++s) tasks.push_back({c, s});
    }
    std::vector<SweepRow> rows(tasks.size());

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= tasks.size()) return;
            const Task& task = tasks[k];
            const ExperimentConfig& cfg = configs[task.config_index];
            SweepRow& row = rows[k];
            row.config_hash = cfg.config_hash();
            row.seed = static_cast<std::uint64_t>(task.seed);
            row.algorithm = cfg.algorithm;
            row.dist = cfg.distribution.name();
            row.n_arms = cfg.n_arms;
            row.horizon = cfg.horizon;
            try {
                row.eta = cfg.tuning().eta;
                const EpisodeResult r = run_episode(cfg, row.seed);
                row.regret = r.regret;
                if (with_decomposition && cfg.algorithm == "gbpa_exact") {
                    const PenaltyDecomposition d = decompose_penalties(cfg, row.seed);
                    row.over_est = d.overestimation_est;
                    row.under_est = d.underestimation_est;
                    row.div_est = d.divergence_sum_est;
                }
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
    os << "config_hash,seed,algorithm,dist,N,T,eta,regret,over_est,under_est,div_est,error\n";
    for (const SweepRow& r : rows) {
        os << r.config_hash << ',' << r.seed << ',' << r.algorithm << ',' << r.dist << ','
           << r.n_arms << ',' << r.horizon << ',' << r.eta << ',' << r.regret << ',';
        if (r.over_est) os << *r.over_est;
        os << ',';
        if (r.under_est) os << *r.under_est;
        os << ',';
        if (r.div_est) os << *r.div_est;
        os << ',' << r.error << '\n';
    }
}

SlopeFit fit_regret_exponent(std::span<const std::pair<double, double>> horizon_and_regret) {
    std::vector<double> ts;
    for (const auto& [t, r] : horizon_and_regret) {
        if (!(t > 0.0)) throw std::invalid_argument("fit_regret_exponent: horizons must be positive");
        if (!(r > 0.0)) throw std::invalid_argument("fit_regret_exponent: mean regrets must be positive");
        ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    if (ts.size() < 4) throw std::invalid_argument("fit_regret_exponent: need >= 4 distinct horizons");
    if (ts.back() / ts.front() < 100.0) {
        throw std::invalid_argument("fit_regret_exponent: horizons must span two decades");
    }

    const std::size_t n = horizon_and_regret.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(horizon_and_regret[i].first);
        ys[i] = std::log(horizon_and_regret[i].second);
        sx += xs[i];
        sy += ys[i];
    }
    const double xbar = sx / static_cast<double>(n);
    const double ybar = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
        rss += resid * resid;
    }
    if (n > 2) {
        const double se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
        fit.ci_half_width = 1.96 * se;
    }
    return fit;
}

}  // namespace banditlab
