#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cofree/sample.hpp"

namespace cofree {

struct EstimatorDims {
    int d_model = 32;
    int p_enc = 8;  // sinusoidal position features, 4 sin/cos pairs
    int proprio = kProprioDim;
    int scene = kSceneDim;
    int action = kActionDim;
    int h_max = 10;
    double dt = 0.1;
    double action_scale = 0.02;  // plan entries are divided by this before embedding

    bool operator==(const EstimatorDims&) const = default;
};

enum class Tensor {
    embed_action_w,
    embed_action_b,
    embed_proprio_w,
    embed_proprio_b,
    embed_vision_w,
    embed_vision_b,
    attn_q,
    attn_k,
    attn_v,
    trunk_w1,
    trunk_b1,
    trunk_w2,
    trunk_b2,
    head_risk_w,
    head_risk_b,
    head_dist_w,
    head_dist_b,
    head_ttc_w,
    head_ttc_b,
};
inline constexpr int kTensorCount = 19;

struct TensorInfo {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::size_t offset = 0;
};

/// Weights of the risk network stored in one flat row-major buffer, plus the
/// calibration temperature. Gradients use the same type.
class EstimatorParams {
public:
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using MatrixView = Eigen::Map<RowMatrix>;
    using ConstMatrixView = Eigen::Map<const RowMatrix>;

    explicit EstimatorParams(const EstimatorDims& dims = {});

    /// LeCun-normal weights, zero biases.
    static EstimatorParams initialize(const EstimatorDims& dims, std::uint64_t seed);

    const EstimatorDims& dims() const { return dims_; }
    const std::vector<TensorInfo>& layout() const { return layout_; }
    std::size_t size() const { return values_.size(); }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    MatrixView mat(Tensor t);
    ConstMatrixView mat(Tensor t) const;

    /// Same shape, all zeros, T = 1.
    EstimatorParams zeros_like() const;

    double temperature = 1.0;

private:
    EstimatorDims dims_;
    std::vector<TensorInfo> layout_;
    std::vector<double> values_;
};

struct EstimatorInput {
    Eigen::VectorXd proprio;
    Eigen::VectorXd z;
    Eigen::MatrixXd plan;  // H x 4, metres

    static EstimatorInput from_sample(const Sample& s) { return {s.proprio, s.z, s.plan}; }
};

struct RiskPrediction {
    double r_hat = 0.0;  // sigmoid(logit / T)
    double logit = 0.0;  // uncalibrated
    double d_hat = 0.0;  // m
    double ttc_hat = 0.0;  // s
};

struct Tokens {
    Eigen::MatrixXd action;   // H x d_model
    Eigen::MatrixXd context;  // 2 x d_model (proprio, vision)
};

/// Intermediate activations kept for the backward pass.
struct ForwardCache {
    Eigen::MatrixXd inputs;  // H x (4 + p_enc)
    Eigen::VectorXd proprio, scene;
    Tokens tokens;
    Eigen::MatrixXd queries, keys, values;
    Eigen::MatrixXd attention;  // H x 2, rows sum to one
    Eigen::VectorXd pooled, hidden1, hidden2;
    double ttc_raw = 0.0;
    bool ttc_clamped = false;
    RiskPrediction out;
};

struct TrainConfig {
    double lr = 1e-2;
    double momentum = 0.9;
    int batch_size = 64;
    int epochs_per_phase = 30;
    double lambda_bce = 1.0;
    double lambda_d = 1.0;
    double lambda_ttc = 0.5;
    double w_pos = 3.0;
    double gamma = 0.5;  // per second
    std::uint64_t seed = 7;

    void validate() const;
};

/// Unweighted loss terms and their lambda-weighted total.
struct LossParts {
    double bce = 0.0;   // w_cls * w_early * BCE
    double dist = 0.0;  // (d_hat - y_d)^2
    double ttc = 0.0;   // 1[y_bin] * |ttc_hat - y_ttc|
    double total = 0.0;
};

struct GradResult {
    EstimatorParams params;                // d mean loss / d params
    std::vector<Eigen::MatrixXd> plans;    // d mean loss / d plan, per batch item
    LossParts loss;                        // batch mean
};

struct LabeledInput {
    EstimatorInput x;
    RiskLabel y;
};

/// Sinusoidal features of token index i: (sin, cos) at 1 / 10000^(2k/p_enc).
Eigen::VectorXd position_encoding(int i, int p_enc);

Tokens tokenize(const EstimatorParams& params, const EstimatorInput& in);

ForwardCache forward_cached(const EstimatorParams& params, const EstimatorInput& in);

/// Uncalibrated prediction (temperature treated as 1).
RiskPrediction forward(const EstimatorParams& params, const EstimatorInput& in);

/// Prediction with the stored temperature applied to the risk logit.
RiskPrediction predict_risk(const EstimatorParams& params, const EstimatorInput& in);

LossParts loss(const RiskPrediction& pred, const RiskLabel& label, const TrainConfig& cfg);

GradResult grad(const EstimatorParams& params, std::span<const LabeledInput> batch,
                const TrainConfig& cfg);

/// Calibrated r_hat and its gradient with respect to the plan (H x 4).
struct RiskGradient {
    RiskPrediction pred;
    Eigen::MatrixXd d_plan;
};
RiskGradient risk_gradient(const EstimatorParams& params, const EstimatorInput& in);

struct EpochStats {
    int phase_horizon = 0;
    int epoch = 0;
    double mean_loss = 0.0;
};
using EpochCallback = std::function<void(const EpochStats&)>;

/// Trains from a fresh initialisation over curriculum phases in increasing
/// horizon order. Throws RuntimeFailure when the loss becomes non-finite.
EstimatorParams train(const std::vector<std::vector<Sample>>& phases, const TrainConfig& cfg,
                      const EstimatorDims& dims = {}, const EpochCallback& on_epoch = {});

/// Continues SGD from `params` on `samples` for `epochs` epochs.
EstimatorParams continue_training(EstimatorParams params, const std::vector<Sample>& samples,
                                  const TrainConfig& cfg, int epochs,
                                  const EpochCallback& on_epoch = {});

double mean_nll(std::span<const double> logits, std::span<const int> labels, double temperature);

/// Temperature minimising mean_nll over [0.25, 4] (golden section, 40 steps).
double fit_temperature(std::span<const double> logits, std::span<const int> labels);

/// Golden-section search for T in [0.25, 4]; stores and returns T. Falls
/// back to T = 1 when that scores no worse. Throws on single-class input.
double calibrate_temperature(EstimatorParams& params, const std::vector<Sample>& heldout);

void save_estimator(const std::string& path, const EstimatorParams& params,
                    const std::string& config_digest);
EstimatorParams load_estimator(const std::string& path, std::string* config_digest = nullptr);

}  // namespace cofree
