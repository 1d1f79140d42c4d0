#pragma once

#include "phishgan/tensor.hpp"

namespace phishgan {

struct LossWeights {
    double lambda_adv = 1.0;
    double lambda_rec = 10.0;
    double lambda_class = 10.0;
};

// LSGAN discriminator objective: mean over the batch of
// (score(real) - 1)^2 + (score(fake) + 1)^2.
Tensor adv_loss_d(const Tensor& real_scores, const Tensor& fake_scores);

// LSGAN generator objective with target +1: mean of (score(fake) - 1)^2.
Tensor adv_loss_g(const Tensor& fake_scores);

// Categorical cross-entropy, log floored at 1e-12. `class_probs` rows must
// sum to 1 within 1e-6; `labels` holds class indices.
Tensor class_loss(const Tensor& class_probs, const std::vector<int>& labels);

// Mean squared error over all entries.
Tensor rec_loss(const Tensor& fake, const Tensor& real);

Tensor total_loss(const Tensor& adv, const Tensor& rec, const Tensor& cls,
                  const LossWeights& w);

}  // namespace phishgan
