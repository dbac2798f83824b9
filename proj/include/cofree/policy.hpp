#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cofree/estimator.hpp"
#include "cofree/sample.hpp"
#include "cofree/world.hpp"

namespace cofree {

/// Proportional task-space expert: dx = clip(kp * (goal - ee), +-a_max) per
/// arm, integrated on its own end-effector prediction for H steps. It does
/// not look at the other arm.
PlanSequence scripted_expert(const WorldConfig& cfg, const DualArmState& state, const Task& task,
                             int horizon, double kp = 0.5);

inline constexpr int kPolicyInputDim = kProprioDim + kSceneDim + 4;
inline constexpr int kPolicyHidden = 32;

/// Two-layer tanh MLP, output squashed to a_max * tanh(.).
class PolicyParams {
public:
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    explicit PolicyParams(double a_max = 0.02);
    static PolicyParams initialize(double a_max, std::uint64_t seed);

    double a_max() const { return a_max_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    Eigen::Map<RowMatrix> w1();
    Eigen::Map<const RowMatrix> w1() const;
    Eigen::Map<Eigen::VectorXd> b1();
    Eigen::Map<const Eigen::VectorXd> b1() const;
    Eigen::Map<RowMatrix> w2();
    Eigen::Map<const RowMatrix> w2() const;
    Eigen::Map<Eigen::VectorXd> b2();
    Eigen::Map<const Eigen::VectorXd> b2() const;

private:
    double a_max_;
    std::vector<double> values_;
};

/// proprio (14) | z (10) | goal_left, goal_right (4).
Eigen::VectorXd policy_features(const Eigen::VectorXd& proprio, const Eigen::VectorXd& z,
                                const Task& task);

DualAction policy_forward(const PolicyParams& params, const Eigen::VectorXd& features);

/// Rolls the policy through the world model for `horizon` steps; the scene
/// feature is evaluated noise-free along the rollout.
PlanSequence policy_plan(const WorldConfig& cfg, const PolicyParams& params, const DualArmState& state,
                         const Task& task, int horizon);

/// One (state, action, plan) record from an expert or gated rollout.
struct PolicyRecord {
    Eigen::VectorXd proprio;
    Eigen::VectorXd z;
    Eigen::Vector4d goals = Eigen::Vector4d::Zero();
    DualAction action;                    // action proposed at this state
    std::optional<DualAction> corrected;  // recovery action when the gate blocked
    Eigen::MatrixXd plan;                 // H x 4 plan that was scored
    double r_hat = 0.0;                   // estimator risk at collection / filter time
    RiskLabel label;                      // oracle relabel of `plan`

    Eigen::VectorXd features() const;
    const DualAction& target() const { return corrected ? *corrected : action; }
};

struct PolicyTrainConfig {
    double lr = 0.05;
    double momentum = 0.9;
    int batch_size = 64;
    int epochs = 200;
    std::uint64_t seed = 11;

    void validate() const;
};

struct ExpertCollection {
    std::vector<TaskId> tasks;
    int episodes_per_task = 40;
    int horizon = 5;
    double scene_noise = 0.005;
    double inflation = 0.01;
    std::uint64_t seed = 3;
};

/// Ungated expert episodes; every visited state yields one record whose plan
/// is the expert's H-step plan labelled by the world oracle.
std::vector<PolicyRecord> collect_expert_demos(const WorldConfig& cfg, const TaskSettings& settings,
                                               const ExpertCollection& spec);

/// Weighted squared-error regression of the policy on record targets.
/// Weights default to one. Throws RuntimeFailure on divergence.
PolicyParams fit_policy(PolicyParams params, std::span<const PolicyRecord> records,
                        std::span<const double> weights, const PolicyTrainConfig& cfg);

PolicyParams bc_train(PolicyParams params, std::span<const PolicyRecord> demos, const PolicyTrainConfig& cfg);

double bc_loss(const PolicyParams& params, std::span<const PolicyRecord> records);

/// Scores each record's plan and keeps those with r_hat <= tau_down.
/// Throws RuntimeFailure when nothing survives.
std::vector<PolicyRecord> safety_filter_dataset(std::span<const PolicyRecord> demos,
                                                const EstimatorParams& estimator, double tau_down);

double risk_weight(double r_hat, double kappa);

/// BC on D_safe with per-sample weight exp(-kappa * r_hat), risks frozen at
/// filter time.
PolicyParams risk_weighted_finetune(PolicyParams params, std::span<const PolicyRecord> safe, double kappa,
                                    const PolicyTrainConfig& cfg);

/// FIFO buffer of rollout records.
class AggBuffer {
public:
    explicit AggBuffer(std::size_t capacity = 50000);

    void aggregate(std::span<const PolicyRecord> records);
    std::size_t size() const { return records_.size(); }
    std::size_t capacity() const { return capacity_; }
    const std::deque<PolicyRecord>& records() const { return records_; }
    std::vector<PolicyRecord> snapshot() const { return {records_.begin(), records_.end()}; }

private:
    std::size_t capacity_;
    std::deque<PolicyRecord> records_;
};

struct PostTrainResult {
    EstimatorParams params;
    double nll_uncalibrated = 0.0;  // held-out NLL at T = 1
    double nll_calibrated = 0.0;    // held-out NLL at the fitted T
    std::size_t train_count = 0;
    std::size_t heldout_count = 0;
};

/// Continues estimator training on buffer samples, then refits the
/// temperature on a fresh held-out split of the buffer.
PostTrainResult post_train_estimator(const EstimatorParams& params, std::span<const PolicyRecord> buffer,
                                     const TrainConfig& cfg, int epochs, double heldout_fraction);

void save_policy(const std::string& path, const PolicyParams& params, const std::string& config_digest);
PolicyParams load_policy(const std::string& path);

}  // namespace cofree
