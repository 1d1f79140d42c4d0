#include "phishgan/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace phishgan {

namespace {
constexpr double kLogFloor = 1e-12;

void require_nonempty(const Tensor& t, const char* op) {
    if (!t.defined() || t.size() == 0 || t.shape()[0] == 0)
        throw std::invalid_argument(std::string(op) + ": empty batch");
}
}  // namespace

Tensor adv_loss_d(const Tensor& real_scores, const Tensor& fake_scores) {
    require_nonempty(real_scores, "adv_loss_d");
    require_nonempty(fake_scores, "adv_loss_d");
    if (real_scores.size() != fake_scores.size())
        throw std::invalid_argument("adv_loss_d: batch size mismatch");
    Tensor real_term = mean(square(add_scalar(real_scores, -1.0)));
    Tensor fake_term = mean(square(add_scalar(fake_scores, 1.0)));
    return add(real_term, fake_term);
}

Tensor adv_loss_g(const Tensor& fake_scores) {
    require_nonempty(fake_scores, "adv_loss_g");
    return mean(square(add_scalar(fake_scores, -1.0)));
}

Tensor class_loss(const Tensor& class_probs, const std::vector<int>& labels) {
    require_nonempty(class_probs, "class_loss");
    if (class_probs.shape().size() != 2)
        throw std::invalid_argument("class_loss: expected [batch, classes]");
    const int batch = class_probs.shape()[0];
    const int k = class_probs.shape()[1];
    if (static_cast<int>(labels.size()) != batch)
        throw std::invalid_argument("class_loss: label count mismatch");
    for (int r = 0; r < batch; ++r) {
        double s = 0.0;
        for (int c = 0; c < k; ++c) s += class_probs.data()[static_cast<long>(r) * k + c];
        if (std::abs(s - 1.0) > 1e-6)
            throw std::invalid_argument("class_loss: row " + std::to_string(r) +
                                        " does not sum to 1");
    }
    // One-hot mask picks out log(p_true); mean of -log over the batch.
    std::vector<double> mask(class_probs.data().size(), 0.0);
    for (int r = 0; r < batch; ++r) {
        const int y = labels[static_cast<size_t>(r)];
        if (y < 0 || y >= k) throw std::invalid_argument("class_loss: label out of range");
        mask[static_cast<long>(r) * k + y] = 1.0;
    }
    Tensor onehot = Tensor::from(class_probs.shape(), std::move(mask));
    Tensor picked = mul(onehot, log_clamped(class_probs, kLogFloor));
    return mul_scalar(sum(picked), -1.0 / static_cast<double>(batch));
}

Tensor rec_loss(const Tensor& fake, const Tensor& real) {
    if (fake.shape() != real.shape())
        throw std::invalid_argument("rec_loss: shape mismatch");
    return mean(square(sub(fake, real)));
}

Tensor total_loss(const Tensor& adv, const Tensor& rec, const Tensor& cls,
                  const LossWeights& w) {
    return add(add(mul_scalar(adv, w.lambda_adv), mul_scalar(rec, w.lambda_rec)),
               mul_scalar(cls, w.lambda_class));
}

}  // namespace phishgan
