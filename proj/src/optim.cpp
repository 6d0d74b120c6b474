#include "optim.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace fz {

void sgd_step(std::span<Param* const> params, double lr) {
    for (Param* p : params) {
        if (!p->value.same_shape(p->grad)) {
            throw ShapeError("sgd_step: grad shape mismatch for " + p->name);
        }
        for (std::size_t i = 0; i < p->value.size(); ++i) {
            p->value.data()[i] -= lr * p->grad.data()[i];
        }
    }
}

void SgdOptimizer::step(std::span<Param* const> params) {
    sgd_step(params, lr_);
    ++steps_;
}

void AdamWOptimizer::step(std::span<Param* const> params) {
    if (m_.empty()) {
        for (const Param* p : params) {
            m_.emplace_back(p->value.rows(), p->value.cols(), 0.0);
            v_.emplace_back(p->value.rows(), p->value.cols(), 0.0);
        }
    }
    if (m_.size() != params.size()) {
        throw ShapeError("adamw: parameter count changed after first step");
    }

    ++step_count_;
    const double bc1 = 1.0 - std::pow(hyper_.beta1, static_cast<double>(step_count_));
    const double bc2 = 1.0 - std::pow(hyper_.beta2, static_cast<double>(step_count_));

    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Param* p = params[pi];
        if (!p->value.same_shape(p->grad) || !p->value.same_shape(m_[pi])) {
            throw ShapeError("adamw: shape mismatch for " + p->name);
        }
        const double* keep = p->keep ? p->keep->data() : nullptr;
        double* val = p->value.data();
        const double* g = p->grad.data();
        double* m = m_[pi].data();
        double* v = v_[pi].data();
        for (std::size_t i = 0; i < p->value.size(); ++i) {
            if (keep && keep[i] == 0.0) continue; // frozen: no moments, no decay
            m[i] = hyper_.beta1 * m[i] + (1.0 - hyper_.beta1) * g[i];
            v[i] = hyper_.beta2 * v[i] + (1.0 - hyper_.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            val[i] -= hyper_.lr * (m_hat / (std::sqrt(v_hat) + hyper_.eps)) +
                      hyper_.lr * hyper_.weight_decay * val[i];
        }
    }
}

void AdamWOptimizer::restore(std::vector<Matrix> m, std::vector<Matrix> v,
                             std::uint64_t step_count) {
    m_ = std::move(m);
    v_ = std::move(v);
    step_count_ = step_count;
}

} // namespace fz
