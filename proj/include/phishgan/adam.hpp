#pragma once

#include <cstdint>
#include <vector>

#include "phishgan/tensor.hpp"

namespace phishgan {

// Bias-corrected Adam over a fixed parameter set. Moment buffers are
// allocated lazily, zero-initialized, and keyed by position in the set.
struct AdamState {
    double alpha = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::int64_t step_count = 0;
    std::vector<std::vector<double>> m;  // first moments
    std::vector<std::vector<double>> v;  // second moments
};

// Applies one update using each parameter's accumulated gradient. Parameters
// with no gradient (unreached by backward) are treated as zero-gradient.
void adam_step(std::vector<Tensor>& params, AdamState& state);

}  // namespace phishgan
