#pragma once

#include <functional>
#include <vector>

#include "phishgan/tensor.hpp"

namespace phishgan {

// Central finite-difference check of reverse-mode gradients.
//
// `build_loss` must rebuild the scalar loss from the current values of
// `params` each time it is called, and must be deterministic; two forward
// passes that disagree are rejected. Returns the max over checked parameter
// entries of |analytic - numeric| / max(1, |numeric|).
//
// `max_entries_per_param` > 0 restricts the check to that many entries per
// parameter, chosen by a seeded stride, which keeps whole-network checks
// tractable.
double grad_check(const std::function<Tensor()>& build_loss, std::vector<Tensor> params,
                  double h = 1e-5, int max_entries_per_param = 0,
                  unsigned long long sample_seed = 0);

}  // namespace phishgan
