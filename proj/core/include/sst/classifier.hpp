#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "sst/cluster.hpp"
#include "sst/soft_label.hpp"

namespace sst {

// Small row-major dense matrix in double precision.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}

    double* row(int i) { return v.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return v.data() + static_cast<size_t>(i) * cols; }
    double& at(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }
};

Mat matmul(const Mat& a, const Mat& b);       // a * b
Mat matmul_tn(const Mat& a, const Mat& b);    // a^T * b
Mat matmul_nt(const Mat& a, const Mat& b);    // a * b^T

struct BlockParams {
    std::vector<double> ln1_gain, ln1_bias;  // dim
    Mat wq, wk, wv, wo;                      // dim x dim
    std::vector<double> ln2_gain, ln2_bias;  // dim
    Mat w1;                                  // dim x 4*dim
    Mat w2;                                  // 4*dim x dim
};

// Pre-norm residual attention blocks followed by a linear head and row
// softmax. No positional embeddings, so the forward pass is permutation
// equivariant over tokens.
struct ClassifierParams {
    int dim = 32;
    int heads = 4;
    int blocks = 2;
    int classes = 0;
    uint64_t seed = 0;
    std::vector<BlockParams> block;
    Mat head_w;                  // dim x classes
    std::vector<double> head_b;  // classes

    void validate() const;
    // Visits every parameter tensor in the declared checkpoint order.
    void for_each_tensor(const std::function<void(std::vector<double>&)>& fn);
    void for_each_tensor(const std::function<void(const std::vector<double>&)>& fn) const;
    size_t parameter_count() const;
};

// Weights ~ Uniform(+-sqrt(6/(fan_in+fan_out))), norm gains 1, biases 0.
ClassifierParams init_classifier(int dim, int heads, int blocks, int classes, uint64_t seed);

// Zero-filled gradient holder with the same shapes as `params`.
ClassifierParams zeros_like(const ClassifierParams& params);

Mat token_matrix(const SupertokenSet& tokens);

// Row-stochastic predicted distributions, tokens x classes.
Mat forward(const Mat& tokens, const ClassifierParams& params);
inline Mat forward(const SupertokenSet& tokens, const ClassifierParams& params) {
    return forward(token_matrix(tokens), params);
}

// Post-softmax attention matrices (tokens x tokens), one per (block, head)
// in block-major order. For verifying attention invariants.
std::vector<Mat> attention_maps(const Mat& tokens, const ClassifierParams& params);

// loss = -(1/M_v) sum over valid tokens of sum_c L(m,c) * log S(m,c), with
// the log argument clamped below at 1e-12.
double soft_ce_loss(const Mat& probs, const SoftLabelMatrix& labels);

// Analytic gradients of soft_ce_loss(forward(tokens)) w.r.t. every
// parameter. Returns the loss value as well.
double backward(const Mat& tokens, const ClassifierParams& params, const SoftLabelMatrix& labels,
                ClassifierParams& grads);

struct GradCheckReport {
    int coords = 0;
    double max_rel_err = 0.0;
    double max_abs_err = 0.0;
};

// Central finite differences on `coords` randomly sampled parameter
// coordinates against the analytic gradient.
GradCheckReport grad_check(const ClassifierParams& params, const Mat& tokens,
                           const SoftLabelMatrix& labels, int coords, double h, uint64_t seed);

struct TrainConfig {
    int epochs = 100;
    int batch = 1;  // scenes per optimizer step
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double lr_floor = 0.0;
    uint64_t seed = 0;
};

// lr(t) = floor + 0.5*(base - floor)*(1 + cos(pi * t / t_max))
double cosine_lr(const TrainConfig& cfg, int epoch, int epochs_total);

struct EpochLog {
    int epoch = 0;
    double lr = 0.0;
    double loss = 0.0;
};

struct TrainScene {
    Mat tokens;
    SoftLabelMatrix labels;
};

// Adam with per-epoch cosine annealing. Deterministic: scenes are visited
// in order and all state is seeded. Throws if the loss becomes non-finite.
ClassifierParams train(const std::vector<TrainScene>& scenes, const TrainConfig& cfg,
                       int dim, int heads, int blocks, int classes,
                       std::vector<EpochLog>* log = nullptr);

// Checkpoint: text header (dims, blocks, heads, classes, seed) followed by
// float32 LE tensors in declared order.
void save_checkpoint(const ClassifierParams& params, const std::filesystem::path& path);
ClassifierParams load_checkpoint(const std::filesystem::path& path);

}  // namespace sst
