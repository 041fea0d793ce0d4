#pragma once

// The screening network: a compact fully connected net (baseline
// 35-64-8-2, under 3,000 parameters) with per-hidden-layer
// Linear -> BatchNorm -> ReLU -> Dropout, a softmax head, cross-entropy
// loss and Adam. Training is sequential and bit-reproducible under a seed;
// the dense products run on the shared OpenMP kernels.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sweetdeep/common.hpp"

namespace sweetdeep::model {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct ModelConfig {
    std::vector<int> layer_widths{35, 64, 8, 2};
    double dropout_p = 0.1;
    bool batchnorm = true;
    bool dropout = true;
    int epochs = 50;
    int batch_size = 512;
    AdamConfig adam;
    std::uint64_t seed = 1;

    int input_width() const { return layer_widths.front(); }
    int n_hidden() const { return int(layer_widths.size()) - 2; }
    void validate() const;
};

struct LayerParams {
    Matrix w;               // [out x in]
    std::vector<double> b;  // [out]
    // BatchNorm state; empty when the layer has none
    std::vector<double> gamma, beta, run_mean, run_var;
    bool has_bn() const { return !gamma.empty(); }
};

struct ModelParams {
    ModelConfig config;
    std::vector<LayerParams> hidden;
    Matrix w_out;
    std::vector<double> b_out;
};

struct Prediction {
    double p_nd = 0.5;
    double p_t2d = 0.5;
    int hard_label(double threshold = 0.5) const { return p_t2d >= threshold ? 1 : 0; }
};

// Trainable parameter count: weights + biases + 2 x width BN affine terms
// (running statistics excluded).
long count_params(const ModelConfig& config);

// Seeded He-style uniform initialization.
ModelParams init_params(const ModelConfig& config);

// ── Inference ────────────────────────────────────────────

enum class Mode { train, eval };

// Eval mode uses BN running statistics and no dropout; train mode uses
// batch statistics (degenerate for a single instance) and, when `rng` is
// given and dropout is enabled, inverted-scaling dropout.
Prediction forward(const ModelParams& params, std::span<const double> x, Mode mode = Mode::eval,
                   Rng* rng = nullptr);

// Batched eval-mode probabilities, one row per instance: [n x 2].
Matrix forward_eval_batch(const ModelParams& params, const Matrix& x);

// 32-bit inference path; must track the 64-bit probabilities within 1e-4.
Matrix forward_eval_batch_f32(const ModelParams& params, const Matrix& x);

// Train-mode batch probabilities without dropout, BN on batch statistics,
// running statistics untouched (used by mode-equivalence tests).
Matrix forward_train_batch(const ModelParams& params, const Matrix& x);

// ── Training ─────────────────────────────────────────────

struct EpochStats {
    double loss = 0.0;      // mean cross-entropy over the epoch
    double accuracy = 0.0;  // train-mode accuracy over the epoch
};

struct TrainResult {
    ModelParams params;
    std::vector<EpochStats> trace;
};

// Mini-batch Adam on mean cross-entropy; data reshuffled every epoch, the
// final smaller batch kept. x rows must already be normalized (and SMOTE
// balanced when desired); y entries are 0 (ND) or 1 (T2D).
TrainResult train(const ModelConfig& config, const Matrix& x, const std::vector<int>& y);

// ── Gradient access (for finite-difference checks) ───────

struct GradBuffer {
    std::vector<Matrix> w;                       // per hidden layer, then output
    std::vector<std::vector<double>> b;
    std::vector<std::vector<double>> gamma, beta;  // empty entries when no BN
};

// Mean cross-entropy of a batch with dropout off and BN in train mode
// (batch statistics), leaving running statistics untouched. Pure.
double batch_loss(const ModelParams& params, const Matrix& x, const std::vector<int>& y);

// Analytic gradients under the same mode as batch_loss.
GradBuffer batch_gradients(const ModelParams& params, const Matrix& x, const std::vector<int>& y);

// Flat views over every trainable scalar, in matching order.
std::vector<double*> param_view(ModelParams& params);
std::vector<double*> grad_view(GradBuffer& grads);

// ── Serialization ────────────────────────────────────────

// Versioned JSON weight file; save -> load -> save is byte-identical.
void save_params(const ModelParams& params, const std::string& path);
ModelParams load_params(const std::string& path);
// Additionally rejects files whose layer widths differ from `expect`.
ModelParams load_params(const std::string& path, const ModelConfig& expect);

}  // namespace sweetdeep::model
