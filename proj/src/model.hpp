#pragma once

#include <memory>
#include <vector>

#include "config.hpp"
#include "layers.hpp"
#include "metrics.hpp"

namespace fz {

/// A layer stack built from a config, ending in the classifier layer.
/// Per-layer init and mask seeds come from disjoint substreams of the run
/// seed, so enabling a mask never perturbs weight initialization.
class Model {
public:
    Model(const ExperimentConfig& cfg, TensorShape input, std::size_t n_classes);

    Matrix forward(const Matrix& x, bool training);
    /// Propagates grad wrt logits back through the stack; parameter grads
    /// land in each layer's Param::grad.
    void backward(const Matrix& grad_logits);

    std::vector<Param*> params();
    void zero_grads();

    TensorShape input_shape() const { return input_; }
    std::size_t n_classes() const { return n_classes_; }

    const std::vector<std::unique_ptr<Layer>>& layers() const { return layers_; }
    std::vector<std::unique_ptr<Layer>>& layers() { return layers_; }

    /// The terminal dense / frozen_dense layer.
    DenseLayer& classifier();
    const DenseLayer& classifier() const;

    /// Checks every frozen/sparse layer against its snapshot; throws on drift.
    void verify_freeze_invariants() const;

    std::vector<MaskStat> mask_stats() const;

private:
    TensorShape input_;
    std::size_t n_classes_;
    std::vector<std::unique_ptr<Layer>> layers_;
};

} // namespace fz
