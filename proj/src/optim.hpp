#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "layers.hpp"

namespace fz {

/// p := p - lr * g elementwise. Gradients of masked weights are already zero
/// after apply_mask_to_grad, so frozen entries stay bit-identical.
void sgd_step(std::span<Param* const> params, double lr);

struct AdamWHyper {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

class Optimizer {
public:
    virtual ~Optimizer() = default;
    virtual const char* kind() const = 0;
    virtual void step(std::span<Param* const> params) = 0;
    virtual std::uint64_t step_count() const = 0;
};

class SgdOptimizer : public Optimizer {
public:
    explicit SgdOptimizer(double lr) : lr_(lr) {}
    const char* kind() const override { return "sgd"; }
    void step(std::span<Param* const> params) override;
    std::uint64_t step_count() const override { return steps_; }
    double lr() const { return lr_; }

private:
    double lr_;
    std::uint64_t steps_ = 0;
};

/// AdamW with decoupled weight decay. Gradients must already be masked; for
/// entries whose keep mask is 0 the whole update is skipped, including the
/// decay term, so frozen weights stay literally constant and their moments
/// stay exactly zero.
class AdamWOptimizer : public Optimizer {
public:
    explicit AdamWOptimizer(AdamWHyper hyper = {}) : hyper_(hyper) {}

    const char* kind() const override { return "adamw"; }
    void step(std::span<Param* const> params) override;
    std::uint64_t step_count() const override { return step_count_; }

    const AdamWHyper& hyper() const { return hyper_; }

    // Moment buffers, allocated lazily on the first step; exposed for
    // checkpointing and the frozen-moment invariant checks.
    std::vector<Matrix>& first_moments() { return m_; }
    std::vector<Matrix>& second_moments() { return v_; }
    void restore(std::vector<Matrix> m, std::vector<Matrix> v, std::uint64_t step_count);

private:
    AdamWHyper hyper_;
    std::vector<Matrix> m_;
    std::vector<Matrix> v_;
    std::uint64_t step_count_ = 0;
};

} // namespace fz
