#include "e2neg/adam.hpp"

#include <cmath>
#include <string>

#include "e2neg/error.hpp"

namespace e2neg {

void adam_step(EncoderParams& params, const ParamSet& grads, double lr, double weight_decay,
               const AdamHyper& hyper) {
  if (!grads.all_finite()) throw TrainingError("adam_step: non-finite gradient");
  const std::int64_t t = ++params.adam.step;
  const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(t));

  auto w = params.weights.tensors();
  auto m = params.adam.first_moment.tensors();
  auto v = params.adam.second_moment.tensors();
  const auto g = grads.tensors();
  for (std::size_t i = 0; i < ParamSet::kCount; ++i) {
    if (g[i]->rows() != w[i]->rows() || g[i]->cols() != w[i]->cols()) {
      throw Error("adam_step: gradient shape mismatch for " + std::string(ParamSet::kNames[i]));
    }
    m[i]->array() = hyper.beta1 * m[i]->array() + (1.0 - hyper.beta1) * g[i]->array();
    v[i]->array() = hyper.beta2 * v[i]->array() + (1.0 - hyper.beta2) * g[i]->array().square();
    const auto m_hat = m[i]->array() / bc1;
    const auto v_hat = v[i]->array() / bc2;
    w[i]->array() -= lr * (m_hat / (v_hat.sqrt() + hyper.eps) + weight_decay * w[i]->array());
  }
  if (!params.weights.all_finite()) throw TrainingError("adam_step: parameters became non-finite");
}

}  // namespace e2neg
