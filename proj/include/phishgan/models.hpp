#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phishgan/nn.hpp"
#include "phishgan/rng.hpp"
#include "phishgan/tensor.hpp"
#include "phishgan/url_codec.hpp"

namespace phishgan {

struct ConvBlock {
    LayerSpec spec;
    Tensor w;
    Tensor b;
    Tensor gamma;
    Tensor beta;
    BatchNormStats stats;
};

// Conditional generator: 6-layer conv encoder [32,32,64,64,128,128] with
// stride 2 on layers 2/4/6, 3-layer transposed-conv decoder [128,64,32], and
// a sigmoid-activated 67-channel output projection. Input is the 70-channel
// condition stack (67 one-hot + 1 smoothed noise + 2 broadcast label).
struct GeneratorNet {
    std::vector<ConvBlock> encoder;
    std::vector<ConvBlock> decoder;
    LayerSpec out_spec;
    Tensor out_w;
    Tensor out_b;

    Tensor forward(const Tensor& condition, bool training);
    std::vector<Tensor> parameters();
    std::int64_t parameter_count();
};

// Two-headed discriminator: 6 conv layers [16,16,32,32,128,128] (stride 2 on
// 2/4/6), dense 3200->256->64, then a softmax class head and a raw-score
// adversarial head.
struct DiscriminatorNet {
    std::vector<ConvBlock> conv;
    Tensor fc1_w, fc1_b;
    Tensor fc2_w, fc2_b;
    Tensor class_w, class_b;
    Tensor adv_w, adv_b;

    struct Output {
        Tensor class_probs;  // [B, 2]
        Tensor adv_score;    // [B, 1], unbounded raw score
    };
    // `update_stats = false` runs training-mode normalization without touching
    // the batchnorm running statistics; used for generated (fake) batches so
    // inference statistics track only the real-URL distribution.
    Output forward(const Tensor& x, bool training, bool update_stats = true);
    std::vector<Tensor> parameters();
    std::int64_t parameter_count();
};

GeneratorNet build_generator(std::uint64_t seed);
DiscriminatorNet build_discriminator(std::uint64_t seed);

// 1-D Gaussian blur along the position axis, sigma fixed at 3, kernel
// truncated at 4 sigma and renormalized at the edges.
std::vector<double> gaussian_smooth(const std::vector<double>& signal, double sigma = 3.0);

// [B, 70, 200] condition stack for a batch of URL matrices: the one-hot
// channels, one smoothed uniform-noise channel, and the label one-hot
// broadcast over two constant channels.
Tensor make_condition_input(const std::vector<const UrlMatrix*>& batch,
                            const std::vector<int>& labels, Rng& noise_rng);

// Transposes a batch of URL matrices (row-major 200x67) into [B, 67, 200].
Tensor batch_to_tensor(const std::vector<const UrlMatrix*>& batch);
// Inverse of batch_to_tensor for one sample of a [B, 67, 200] tensor.
std::vector<double> tensor_to_matrix(const Tensor& t, int sample);

// Deterministic single-URL synthesis; returns a row-major 200x67 matrix.
std::vector<double> generate(GeneratorNet& g, const UrlMatrix& x, int label,
                             std::uint64_t seed);

struct Detection {
    double p_benign = 0.0;
    double p_malicious = 0.0;
    double adv_score = 0.0;
    double realness = 0.0;  // clamp((adv_score + 1) / 2, 0, 1)
    int predicted_class = 0;
    bool predicted_real = false;
};

Detection detect(DiscriminatorNet& d, const std::vector<double>& matrix);

// Batched inference over many URL matrices (one forward pass).
std::vector<Detection> detect_batch(DiscriminatorNet& d,
                                    const std::vector<const UrlMatrix*>& batch);

// Checkpoint: text header (format version, seed, tensor directory) followed
// by little-endian float64 blocks in header order. Round-trips bit-exactly.
struct GanModel {
    GeneratorNet generator;
    DiscriminatorNet discriminator;
    std::uint64_t seed = 0;
};

GanModel build_gan(std::uint64_t seed);
void save_checkpoint(const std::string& path, GanModel& model);
GanModel load_checkpoint(const std::string& path);

}  // namespace phishgan
