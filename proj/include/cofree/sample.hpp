#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "cofree/world.hpp"

namespace cofree {

inline constexpr int kProprioDim = 14;
inline constexpr int kSceneDim = 10;
inline constexpr int kActionDim = 4;

/// Ground-truth outcome of executing a plan: collision flag, minimum
/// distance over the horizon (m) and time to first collision (s, censored
/// at H * dt when no collision occurs).
struct RiskLabel {
    int y_bin = 0;
    double y_d = 0.0;
    double y_ttc = 0.0;
};

struct SampleMeta {
    std::string task;
    std::uint64_t seed = 0;  // episode seed
    int step = 0;
    int candidate = 0;
};

/// One (state, plan) -> label record.
struct Sample {
    Eigen::VectorXd proprio;  // kProprioDim
    Eigen::VectorXd z;        // kSceneDim
    Eigen::MatrixXd plan;     // H x kActionDim, metres
    RiskLabel label;
    SampleMeta meta;

    int horizon() const { return static_cast<int>(plan.rows()); }
};

/// [sin q_left, sin q_right, cos q_left, cos q_right, g_left, g_right].
Eigen::VectorXd encode_proprio(const DualArmState& state);

}  // namespace cofree
