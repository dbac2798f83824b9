#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cofree/estimator.hpp"
#include "cofree/world.hpp"

namespace cofree {

struct GateConfig {
    double tau_up = 0.5;
    double tau_down = 0.25;
    int K = 3;             // consecutive safe cycles needed to resume
    double r_sat = 0.99;   // saturation risk for the watchdog
    int W = 50;            // watchdog cycles
    double d0 = 0.02;      // safe-set margin, m
    double a_max = 0.02;

    void validate() const;
};

enum class GateMode { run, blocked, halted };
enum class Decision { execute, block, halt };

std::string_view to_string(GateMode m);
std::string_view to_string(Decision d);

struct GateState {
    GateMode mode = GateMode::run;
    int safe_count = 0;
    int sat_count = 0;
};

/// Hysteresis gate: block above tau_up, resume after K cycles at or below
/// tau_down, halt after W consecutive saturated cycles while blocked.
std::pair<GateState, Decision> gate_step(const GateState& gate, double r_hat, const GateConfig& cfg);

/// clip(1 - r_hat / tau_up, 0, 1).
double soft_scale(double r_hat, double tau_up);

/// clip(d_hat / d0, 0, 1).
double distance_fallback(double d_hat, double d0);

/// Estimator inputs that do not depend on the plan.
struct StateFeatures {
    Eigen::VectorXd proprio;
    Eigen::VectorXd z;
};

struct CandidateChoice {
    std::size_t index = 0;
    PlanSequence plan;
    RiskPrediction prediction;
};

/// Lowest calibrated risk among a_max-feasible candidates; ties go to the
/// lowest index. Throws RuntimeFailure when no candidate is feasible.
CandidateChoice select_candidate(const EstimatorParams& estimator, const StateFeatures& features,
                                 const std::vector<PlanSequence>& candidates, double a_max);

struct DescentConfig {
    int max_iters = 10;
    double step = 0.05;
    int max_halvings = 5;
    double a_max = 0.02;
};

struct DescentResult {
    PlanSequence plan;
    std::vector<double> objective;  // value at the start and after every accepted step
    bool stalled_first = false;     // the first iteration exhausted all halvings
};

/// Projected gradient descent with backtracking on r_hat(A) + lambda ||A||^2
/// starting from the zero plan.
DescentResult recover(const EstimatorParams& estimator, const StateFeatures& features, int horizon,
                      const DescentConfig& cfg, double lambda_reg = 0.1);

/// Same machinery on alpha ||A' - A||^2 + beta r_hat(A'), starting at A.
DescentResult refine_plan(const EstimatorParams& estimator, const StateFeatures& features,
                          const PlanSequence& nominal, double alpha, double beta, const DescentConfig& cfg);

}  // namespace cofree
