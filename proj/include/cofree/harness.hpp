#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cofree/datasetgen.hpp"
#include "cofree/estimator.hpp"
#include "cofree/policy.hpp"
#include "cofree/safeguard.hpp"
#include "cofree/world.hpp"

namespace cofree {

enum class RunMode { ungated, gated, gated_refine, gated_finetuned };

std::string_view to_string(RunMode m);
RunMode parse_mode(std::string_view s);

struct EstimatorSection {
    TrainConfig train;
    std::string checkpoint = "estimator.json";
    double heldout_fraction = 0.2;
    int post_train_epochs = 5;
    double post_train_heldout = 0.25;
};

struct GateSection {
    GateConfig gate;
    bool soft_gate = true;
    double fn_target = 0.05;
    std::string thresholds_file = "thresholds.json";
};

struct PolicySection {
    PolicyTrainConfig train;
    int demo_episodes_per_task = 150;
    double kappa = 5.0;
    int finetune_epochs = 20;
    std::size_t buffer_capacity = 50000;
    int buffer_episodes_per_task = 20;
    std::string checkpoint = "policy.json";
    std::string finetuned_checkpoint = "policy_finetuned.json";
};

struct EvalSection {
    std::vector<TaskId> tasks = {TaskId::crossing_transfer, TaskId::parallel_place};
    int episodes_per_task = 100;
    RunMode mode = RunMode::gated;
    int horizon = 5;
    int candidates = 8;
    double sigma_a = 0.01;
    double scene_noise = 0.005;
    double refine_alpha = 1.0;
    double refine_beta = 2.0;
    double lambda_reg = 0.1;
    DescentConfig descent;
    int latency_trials = 1000;
    int latency_warmup = 100;
    int eval_states = 500;
    std::string out_dir = "runs";
    unsigned workers = 0;
};

struct RunConfig {
    std::uint64_t seed = 1;
    WorldConfig world;
    TaskSettings tasks;
    DatagenConfig datagen;
    std::string dataset_path = "dataset.jsonl";
    EstimatorSection estimator;
    GateSection gate;
    PolicySection policy;
    EvalSection eval;
    std::string base_dir = ".";  // relative paths resolve against this

    /// Re-derives every component seed from `seed`.
    void apply_seed(std::uint64_t s);
    void validate() const;
    std::string resolve(const std::string& path) const;
    nlohmann::json to_json() const;
    std::string digest() const;
};

/// Strict parse: unknown keys or wrong types raise ConfigError.
RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

struct StepRecord {
    int t = 0;
    std::uint64_t state_digest = 0;
    std::optional<double> r_hat;
    double d_min = 0.0;
    GateMode mode = GateMode::run;
    Decision decision = Decision::execute;
    DualAction action;
    double latency_us = 0.0;
};

struct EpisodeLog {
    std::string task;
    std::uint64_t seed = 0;
    RunMode mode = RunMode::ungated;
    std::vector<StepRecord> steps;
    bool success = false;
    bool collided = false;
    bool halted = false;
    int blocked_steps = 0;
    int recoveries = 0;
    std::vector<PolicyRecord> records;  // filled only when collection is requested

    int step_count() const { return static_cast<int>(steps.size()); }
};

nlohmann::json to_json(const EpisodeLog& log);
EpisodeLog episode_from_json_lines(const std::vector<std::string>& lines);
void write_episode_log(const std::string& path, const EpisodeLog& log);
EpisodeLog read_episode_log(const std::string& path);

/// Loaded models plus the effective gate thresholds.
struct Runtime {
    RunConfig cfg;
    GateConfig gate;
    std::optional<EstimatorParams> estimator;
    std::optional<PolicyParams> policy;  // learned policy for gated+finetuned
};

/// Loads the checkpoints `mode` needs; missing required files raise ConfigError.
Runtime load_runtime(const RunConfig& cfg, RunMode mode);

std::uint64_t eval_episode_seed(const RunConfig& cfg, std::size_t task_index, std::size_t e);

EpisodeLog run_episode(const Runtime& rt, RunMode mode, TaskId task, std::uint64_t seed,
                       bool collect_records = false);

struct TaskMetrics {
    std::string task;
    std::string mode;
    int episodes = 0;
    int collisions = 0;
    int successes = 0;
    int halts = 0;
    long total_steps = 0;
    long blocked_steps = 0;
    double collision_rate = 0.0;
    double success_rate = 0.0;
    double blocked_fraction = 0.0;
    double mean_steps = 0.0;
};

TaskMetrics metrics_from_logs(std::span<const EpisodeLog> logs);

struct RocPoint {
    double threshold = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
};

struct RocResult {
    double tau_up = 0.5;
    double tau_down = 0.25;
    double auc = 0.0;
    double fnr_at_tau = 0.0;
    double fpr_at_tau = 0.0;
    std::vector<RocPoint> curve;
};

/// tau_up = largest observed score whose block rule (r > tau) keeps the
/// false-negative rate <= fn_target; tau_down = tau_up / 2.
RocResult roc_tune(std::span<const double> scores, std::span<const int> labels, double fn_target = 0.05);

void write_thresholds(const std::string& path, const RocResult& roc);
/// Config gate with tau_up / tau_down replaced by the thresholds file when it exists.
GateConfig effective_gate(const RunConfig& cfg);

struct ReliabilityBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    double confidence = 0.0;
    double accuracy = 0.0;
};

struct CalibrationReport {
    double ece = 0.0;
    std::vector<ReliabilityBin> bins;
};

CalibrationReport compute_calibration(std::span<const double> scores, std::span<const int> labels, int bins = 10);

struct LatencyStats {
    double p50_us = 0.0;
    double p95_us = 0.0;
    double max_us = 0.0;
    int trials = 0;
};

LatencyStats measure_latency(const EstimatorParams& params, int horizon, int trials, int warmup = 100);

struct Scores {
    std::vector<double> r_hat;
    std::vector<int> y_bin;
};
Scores score_dataset(const EstimatorParams& params, std::span<const Sample> samples);

struct EstimatorMetrics {
    double auc = 0.0;
    double ece = 0.0;
    double ece_uncalibrated = 0.0;
    double temperature = 1.0;
    std::vector<ReliabilityBin> reliability;
};

struct MetricsReport {
    std::vector<TaskMetrics> tasks;
    std::optional<EstimatorMetrics> estimator;
    std::optional<LatencyStats> latency;
    GateConfig gate;
    nlohmann::json settings;  // loss weights, seeds and other reported knobs
};

nlohmann::json to_json(const MetricsReport& r);

/// Runs every (task, episode) pair, optionally writing one log per episode
/// under `log_dir`, and aggregates the logs.
MetricsReport evaluate(const Runtime& rt, RunMode mode, const std::string& log_dir = "");

// Pipeline stages shared by the CLI and the acceptance suite.

Dataset gen_data(const RunConfig& cfg);
std::pair<Dataset, Dataset> split_train_heldout(const RunConfig& cfg, const Dataset& ds);
EstimatorParams train_estimator(const RunConfig& cfg, const Dataset& train_split,
                                const EpochCallback& on_epoch = {});
RocResult tune_thresholds(const RunConfig& cfg, const EstimatorParams& params, const Dataset& heldout);

struct PolicyTraining {
    PolicyParams params;
    std::vector<PolicyRecord> demos;
};
PolicyTraining train_policy(const RunConfig& cfg);

/// Gated rollouts of the runtime's policy (expert when no learned policy is
/// loaded). Records pair the expert plan with its oracle label, or the
/// recovery plan and corrected action where the gate blocked.
AggBuffer collect_buffer(const Runtime& rt, RunMode mode, int episodes_per_task, std::uint64_t seed);

PolicyParams finetune_policy(const RunConfig& cfg, const PolicyParams& base, const EstimatorParams& estimator,
                             std::span<const PolicyRecord> demos, const AggBuffer& buffer, double tau_down);

struct EvalState {
    DualArmState state;
    Task task;
};
std::vector<EvalState> sample_eval_states(const RunConfig& cfg, int count, std::uint64_t seed);

/// Mean calibrated risk of the policy's own H-step plans over the states.
double mean_policy_risk(const RunConfig& cfg, const PolicyParams& policy, const EstimatorParams& estimator,
                        std::span<const EvalState> states);

}  // namespace cofree
