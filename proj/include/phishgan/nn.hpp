#pragma once

#include <string>
#include <vector>

#include "phishgan/tensor.hpp"

namespace phishgan {

enum class LayerKind {
    Conv1d,
    Conv1dTransposed,
    Dense,
    BatchNorm,
    LeakyRelu,
    Sigmoid,
    Softmax,
    Concat,
    Flatten,
};

struct LayerSpec {
    LayerKind kind = LayerKind::Conv1d;
    int kernel = 3;
    int stride = 1;
    int pad = 1;
    int output_pad = 0;  // transposed only
    int in_features = 0;
    int out_features = 0;
};

std::string layer_kind_name(LayerKind k);
int layer_out_len(const LayerSpec& spec, int l_in);

// x [B, C_in, L], w [C_out, C_in, k], b [C_out]  ->  [B, C_out, L_out]
Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad);

// x [B, C_in, L], w [C_in, C_out, k], b [C_out]  ->  [B, C_out, L_out]
Tensor conv1d_transposed(const Tensor& x, const Tensor& w, const Tensor& b, int stride,
                         int pad, int output_pad);

// x [B, N], w [M, N], b [M]  ->  [B, M]
Tensor dense(const Tensor& x, const Tensor& w, const Tensor& b);

// Per-channel running statistics, updated as a side effect in training mode.
struct BatchNormStats {
    std::vector<double> mean;
    std::vector<double> var;
};

// x [B, C, L]; gamma/beta [C]. Training mode normalizes with batch statistics
// over (B, L) and updates `stats`; inference mode uses `stats` unchanged.
// `update_stats = false` keeps training-mode normalization but leaves the
// running statistics untouched (for forwards on out-of-distribution inputs
// whose statistics should not leak into inference).
Tensor batchnorm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                 BatchNormStats& stats, bool training, double momentum = 0.9,
                 double eps = 1e-5, bool update_stats = true);

// [B, C, L] -> [B, C*L]
Tensor flatten(const Tensor& x);

// Concatenate along the channel axis; all inputs [B, C_i, L].
Tensor concat_channels(const std::vector<Tensor>& xs);

}  // namespace phishgan
