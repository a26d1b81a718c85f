#pragma once

#include "e2neg/encoder.hpp"

namespace e2neg {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One Adam step with decoupled weight decay:
//   p <- p - lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * p)
// Throws TrainingError on a non-finite gradient or a non-finite result.
void adam_step(EncoderParams& params, const ParamSet& grads, double lr, double weight_decay,
               const AdamHyper& hyper = {});

}  // namespace e2neg
