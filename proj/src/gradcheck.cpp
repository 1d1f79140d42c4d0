#include "phishgan/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phishgan/rng.hpp"

namespace phishgan {

double grad_check(const std::function<Tensor()>& build_loss, std::vector<Tensor> params,
                  double h, int max_entries_per_param, unsigned long long sample_seed) {
    if (h <= 0.0) throw std::invalid_argument("grad_check: h must be positive");

    const double l0 = build_loss().scalar();
    const double l1 = build_loss().scalar();
    if (l0 != l1)
        throw std::runtime_error("grad_check: builder is not deterministic");

    for (auto& p : params) p.set_requires_grad(true);
    Tensor loss = build_loss();
    loss.backward();
    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (auto& p : params)
        analytic.push_back(p.grad().empty() ? std::vector<double>(p.data().size(), 0.0)
                                            : p.grad());

    Rng rng(sample_seed);
    double max_err = 0.0;
    for (size_t pi = 0; pi < params.size(); ++pi) {
        auto& data = params[pi].mutable_data();
        std::vector<size_t> idx(data.size());
        for (size_t j = 0; j < idx.size(); ++j) idx[j] = j;
        if (max_entries_per_param > 0 &&
            idx.size() > static_cast<size_t>(max_entries_per_param)) {
            rng.shuffle(idx);
            idx.resize(static_cast<size_t>(max_entries_per_param));
        }
        for (size_t j : idx) {
            const double orig = data[j];
            data[j] = orig + h;
            const double lp = build_loss().scalar();
            data[j] = orig - h;
            const double lm = build_loss().scalar();
            data[j] = orig;
            const double numeric = (lp - lm) / (2.0 * h);
            const double err =
                std::abs(analytic[pi][j] - numeric) / std::max(1.0, std::abs(numeric));
            max_err = std::max(max_err, err);
        }
    }
    return max_err;
}

}  // namespace phishgan
