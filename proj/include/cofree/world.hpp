#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cofree/geometry.hpp"

namespace cofree {

using Rng = std::mt19937_64;

struct WorldConfig {
    ArmModel left = ArmModel::default_arm({-0.25, 0.0}, 1.5707963267948966);
    ArmModel right = ArmModel::default_arm({0.25, 0.0}, 1.5707963267948966);
    double a_max = 0.02;   // m per step, per action component
    int h_max = 10;
    double dt = 0.1;       // s
    double damping = 0.05; // DLS mu, m
    double object_length = 0.10;
    double object_radius = 0.02;
    bool intra_arm = false;  // include non-adjacent links of the same arm

    void validate() const;
};

/// Joint state of both arms with cached forward kinematics. The caches are
/// refreshed by every mutator, so they always match the joint vectors.
class DualArmState {
public:
    DualArmState(const WorldConfig& cfg, Eigen::VectorXd q_left, Eigen::VectorXd q_right);

    const Eigen::VectorXd& q_left() const { return q_left_; }
    const Eigen::VectorXd& q_right() const { return q_right_; }
    const ArmPose& pose_left() const { return pose_left_; }
    const ArmPose& pose_right() const { return pose_right_; }
    const Vec2& ee_left() const { return pose_left_.ee; }
    const Vec2& ee_right() const { return pose_right_.ee; }

    double g_left = 0.0;
    double g_right = 0.0;
    bool holding_left = false;
    bool holding_right = false;
    int t = 0;

    void set_joints(const WorldConfig& cfg, Eigen::VectorXd q_left, Eigen::VectorXd q_right);

    /// 64-bit FNV-1a digest of joints, gripper, holding flags and t.
    std::uint64_t digest() const;

private:
    Eigen::VectorXd q_left_;
    Eigen::VectorXd q_right_;
    ArmPose pose_left_;
    ArmPose pose_right_;
};

struct DualAction {
    Vec2 left = Vec2::Zero();
    Vec2 right = Vec2::Zero();

    bool within(double a_max) const;
    DualAction scaled(double s) const { return {left * s, right * s}; }
};

/// H-step sequence of dual-arm end-effector increments.
struct PlanSequence {
    std::vector<DualAction> actions;

    int horizon() const { return static_cast<int>(actions.size()); }
    bool feasible(double a_max) const;

    /// H x 4 rows of (left.x, left.y, right.x, right.y).
    Eigen::MatrixXd to_matrix() const;
    static PlanSequence from_matrix(const Eigen::MatrixXd& m);
    static PlanSequence zeros(int horizon);
};

enum class TaskId { crossing_transfer, parallel_place };

std::string_view task_name(TaskId id);
TaskId parse_task(std::string_view name);

struct Task {
    TaskId id = TaskId::crossing_transfer;
    Vec2 goal_left = Vec2::Zero();
    Vec2 goal_right = Vec2::Zero();
    Eigen::VectorXd start_q_left;
    Eigen::VectorXd start_q_right;
    double success_tolerance = 0.02;
    int max_steps = 300;
};

/// Reset-protocol parameters shared by both tasks.
struct TaskSettings {
    double success_tolerance = 0.02;
    int max_steps = 300;
    double goal_jitter = 0.03;
    double start_jitter = 0.1;
    double min_start_distance = 0.05;
    int max_draws = 100;
    bool holding = true;  // both grippers start closed on an object
};

struct RolloutOutcome {
    int y_bin = 0;
    double y_d = 0.0;
    double y_ttc = 0.0;
    std::vector<DualArmState> states;  // one per executed step
};

/// Capsules of the object held by each gripper (axis along the EE heading).
Capsule2 grasped_capsule(const WorldConfig& cfg, const ArmPose& pose);

/// Minimum inflated capsule distance over inter-arm and arm-object pairs.
double min_self_distance(const WorldConfig& cfg, const DualArmState& state, double inflation);

DualArmState step(const WorldConfig& cfg, const DualArmState& state, const DualAction& action);

/// Executes the plan, stopping at the first step whose distance is < 0.
RolloutOutcome rollout(const WorldConfig& cfg, const DualArmState& state, const PlanSequence& plan,
                       double inflation);

/// [ee_left, ee_right, goal_left, goal_right, holding_left, holding_right]
/// with Gaussian noise on the eight position entries.
Eigen::VectorXd scene_feature(const DualArmState& state, const Task& task, double noise_sigma,
                              Rng& rng);

std::pair<DualArmState, Task> task_init(const WorldConfig& cfg, const TaskSettings& settings,
                                        TaskId id, std::uint64_t seed);

bool success_check(const DualArmState& state, const Task& task, bool collided);

}  // namespace cofree
