#include "phishgan/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace phishgan {

void adam_step(std::vector<Tensor>& params, AdamState& state) {
    if (state.m.empty()) {
        state.m.resize(params.size());
        state.v.resize(params.size());
        for (size_t i = 0; i < params.size(); ++i) {
            state.m[i].assign(params[i].data().size(), 0.0);
            state.v[i].assign(params[i].data().size(), 0.0);
        }
    }
    if (state.m.size() != params.size())
        throw std::invalid_argument("adam_step: state does not match parameter set");

    state.step_count += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));

    for (size_t i = 0; i < params.size(); ++i) {
        auto& p = params[i].mutable_data();
        const auto& g = params[i].grad();
        if (state.m[i].size() != p.size())
            throw std::invalid_argument("adam_step: moment shape mismatch");
        auto& m = state.m[i];
        auto& v = state.v[i];
        for (size_t j = 0; j < p.size(); ++j) {
            const double gj = j < g.size() ? g[j] : 0.0;
            m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * gj;
            v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * gj * gj;
            const double mhat = m[j] / bc1;
            const double vhat = v[j] / bc2;
            p[j] -= state.alpha * mhat / (std::sqrt(vhat) + state.epsilon);
        }
    }
}

}  // namespace phishgan
