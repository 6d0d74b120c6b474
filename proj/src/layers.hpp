#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace fz {

// ---------------------------------------------------------------------------
// Mask machinery
// ---------------------------------------------------------------------------

enum class MaskMode { frozen, sparse };

/// Binarized freeze mask. keep[i][j] == 0 exactly when the generating uniform
/// draw fell below threshold_t; those weights never change during training
/// (frozen mode) or are pinned to zero in both passes (sparse mode).
struct MaskMatrix {
    Matrix keep; // 1.0 = trainable, 0.0 = masked
    double threshold_t = 0.0;
    MaskMode mode = MaskMode::frozen;
    std::uint64_t seed = 0;

    std::size_t frozen_count() const;
    double frozen_fraction() const;
};

/// Draws u ~ Uniform[0,1) row-major from a fresh Rng(seed); keep = (u >= t).
/// Sampled once per layer lifetime, never resampled.
MaskMatrix make_mask(std::size_t rows, std::size_t cols, double t, MaskMode mode,
                     std::uint64_t seed);

/// Elementwise grad ⊙ keep. Masked entries come out exactly 0.
Matrix apply_mask_to_grad(const Matrix& grad_w, const MaskMatrix& mask);

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// One parameter tensor plus its gradient accumulator. When keep is set, the
/// optimizer must skip masked entries entirely (moments stay zero, no decay).
struct Param {
    std::string name;
    Matrix value;
    Matrix grad;
    const Matrix* keep = nullptr;

    void zero_grad();
};

// ---------------------------------------------------------------------------
// Stateless ops (the layer classes below are thin wrappers around these)
// ---------------------------------------------------------------------------

/// y[n] = W x[n] + b for each batch row; x is N x in, W is out x in, b 1 x out.
Matrix dense_forward(const Matrix& x, const Matrix& w, const Matrix& b);

struct DenseGrads {
    Matrix grad_x;
    Matrix grad_w;
    Matrix grad_b;
};

/// grad_w = sum_n grad_y[n] ⊗ x[n]; grad_b = sum_n grad_y[n];
/// grad_x[n] = W^T grad_y[n].
DenseGrads dense_backward(const Matrix& grad_y, const Matrix& x, const Matrix& w);

/// Per-sample logical shape carried through a layer stack. Row n of a batch
/// matrix stores channels x length values row-major.
struct TensorShape {
    std::size_t channels = 0;
    std::size_t length = 0;
    std::size_t features() const noexcept { return channels * length; }
    bool operator==(const TensorShape&) const = default;
};

/// Valid cross-correlation over the length axis, all input channels mixed:
/// out[oc][j] = bias[oc] + sum_ic sum_p kernels[oc][ic*k+p] * x[ic][j*stride+p].
Matrix conv1d_forward(const Matrix& x, TensorShape in, const Matrix& kernels, const Matrix& bias,
                      std::size_t kernel_len, std::size_t stride);

struct Conv1dGrads {
    Matrix grad_x;
    Matrix grad_kernels;
    Matrix grad_bias;
};

Conv1dGrads conv1d_backward(const Matrix& grad_out, const Matrix& x, TensorShape in,
                            const Matrix& kernels, std::size_t kernel_len, std::size_t stride);

std::size_t conv1d_output_length(std::size_t input_len, std::size_t kernel_len,
                                 std::size_t stride);

/// Inverted dropout: each entry kept with probability 1-p and scaled by
/// 1/(1-p) during training; identity in evaluation mode. Returns the applied
/// multiplier matrix through mask_out when non-null (for the backward pass).
Matrix dropout_forward(const Matrix& v, double p, bool training, Rng& rng,
                       Matrix* mask_out = nullptr);

enum class Activation { relu, elu, square, log };

/// log clamps its input at 1e-7; it is meant for strictly positive pooled
/// values. ELU derivative at 0 is 1.
Matrix activation_forward(const Matrix& x, Activation kind);
Matrix activation_backward(const Matrix& grad_y, const Matrix& x, Activation kind);

Activation activation_from_name(const std::string& name);
const char* activation_name(Activation kind);

/// Mean pooling over the length axis per channel.
Matrix mean_pool_forward(const Matrix& x, TensorShape in, std::size_t kernel_len,
                         std::size_t stride);
Matrix mean_pool_backward(const Matrix& grad_out, TensorShape in, std::size_t kernel_len,
                          std::size_t stride);

// ---------------------------------------------------------------------------
// Layer stack
// ---------------------------------------------------------------------------

class Layer {
public:
    virtual ~Layer() = default;

    virtual const char* kind() const = 0;
    virtual TensorShape input_shape() const = 0;
    virtual TensorShape output_shape() const = 0;

    virtual Matrix forward(const Matrix& x, bool training) = 0;

    /// Uses the input cached by the last forward call.
    virtual Matrix backward(const Matrix& grad_out) = 0;

    virtual std::vector<Param*> params() { return {}; }
    virtual const MaskMatrix* mask() const { return nullptr; }
};

class DenseLayer : public Layer {
public:
    /// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)] from init_rng,
    /// bias zero. zero_init draws nothing and leaves W at zero.
    DenseLayer(TensorShape in, std::size_t units, Rng& init_rng, bool zero_init = false);

    const char* kind() const override { return "dense"; }
    TensorShape input_shape() const override { return in_; }
    TensorShape output_shape() const override { return {units_, 1}; }
    Matrix forward(const Matrix& x, bool training) override;
    Matrix backward(const Matrix& grad_out) override;
    std::vector<Param*> params() override { return {&w_, &b_}; }

    Param& weights() { return w_; }
    Param& bias() { return b_; }
    const Param& weights() const { return w_; }
    const Param& bias() const { return b_; }

protected:
    TensorShape in_;
    std::size_t units_;
    Param w_; // units x features
    Param b_; // 1 x units
    Matrix cached_x_;
};

/// Dense layer whose update rule is governed by a MaskMatrix. Forward is
/// identical to DenseLayer; backward multiplies grad_W by keep, so masked
/// weights receive exactly zero gradient. In sparse mode masked weights are
/// zeroed at construction and stay zero through every step.
class FrozenDenseLayer : public DenseLayer {
public:
    FrozenDenseLayer(TensorShape in, std::size_t units, MaskMatrix mask, Rng& init_rng,
                     bool zero_init = false);

    const char* kind() const override { return "frozen_dense"; }
    Matrix backward(const Matrix& grad_out) override;
    const MaskMatrix* mask() const override { return &mask_; }

    const Matrix& frozen_snapshot() const { return frozen_snapshot_; }

    /// Throws if a masked weight drifted from its snapshot (frozen mode) or
    /// from zero (sparse mode). Training asserts this after every step.
    void verify_freeze_invariant() const;

    /// Checkpoint restore: replaces mask and snapshot (shapes must match).
    void restore_mask(MaskMatrix mask, Matrix snapshot);

private:
    MaskMatrix mask_;
    Matrix frozen_snapshot_;
    friend void sparsify_weights(FrozenDenseLayer& layer);
};

/// Zeroes masked weights in place; only valid in sparse mode.
void sparsify_weights(FrozenDenseLayer& layer);

class Conv1dLayer : public Layer {
public:
    Conv1dLayer(TensorShape in, std::size_t out_channels, std::size_t kernel_len,
                std::size_t stride, Rng& init_rng, const char* kind_name = "conv1d");

    const char* kind() const override { return kind_; }
    TensorShape input_shape() const override { return in_; }
    TensorShape output_shape() const override { return out_shape_; }
    Matrix forward(const Matrix& x, bool training) override;
    Matrix backward(const Matrix& grad_out) override;
    std::vector<Param*> params() override { return {&kernels_, &bias_}; }

    std::size_t kernel_len() const { return kernel_len_; }
    std::size_t stride() const { return stride_; }

private:
    const char* kind_;
    TensorShape in_;
    TensorShape out_shape_;
    std::size_t kernel_len_;
    std::size_t stride_;
    Param kernels_; // out_ch x (in_ch * k)
    Param bias_;    // 1 x out_ch
    Matrix cached_x_;
};

class ActivationLayer : public Layer {
public:
    ActivationLayer(TensorShape in, Activation fn) : in_(in), fn_(fn) {}

    const char* kind() const override { return "activation"; }
    TensorShape input_shape() const override { return in_; }
    TensorShape output_shape() const override { return in_; }
    Matrix forward(const Matrix& x, bool training) override;
    Matrix backward(const Matrix& grad_out) override;

    Activation fn() const { return fn_; }

private:
    TensorShape in_;
    Activation fn_;
    Matrix cached_x_;
};

class MeanPoolLayer : public Layer {
public:
    MeanPoolLayer(TensorShape in, std::size_t kernel_len, std::size_t stride);

    const char* kind() const override { return "pool"; }
    TensorShape input_shape() const override { return in_; }
    TensorShape output_shape() const override { return out_shape_; }
    Matrix forward(const Matrix& x, bool training) override;
    Matrix backward(const Matrix& grad_out) override;

    std::size_t kernel_len() const { return kernel_len_; }
    std::size_t stride() const { return stride_; }

private:
    TensorShape in_;
    TensorShape out_shape_;
    std::size_t kernel_len_;
    std::size_t stride_;
};

class FlattenLayer : public Layer {
public:
    explicit FlattenLayer(TensorShape in) : in_(in) {}

    const char* kind() const override { return "flatten"; }
    TensorShape input_shape() const override { return in_; }
    TensorShape output_shape() const override { return {in_.features(), 1}; }
    Matrix forward(const Matrix& x, bool training) override;
    Matrix backward(const Matrix& grad_out) override;

private:
    TensorShape in_;
};

/// Owns its draw stream so that checkpoints can capture it.
class DropoutTrainLayer : public Layer {
public:
    DropoutTrainLayer(TensorShape in, double p, std::uint64_t seed);

    const char* kind() const override { return "dropout"; }
    TensorShape input_shape() const override { return in_; }
    TensorShape output_shape() const override { return in_; }
    Matrix forward(const Matrix& x, bool training) override;
    Matrix backward(const Matrix& grad_out) override;

    double p() const { return p_; }
    std::uint64_t seed() const { return rng_.seed(); }
    Rng& rng() { return rng_; }
    void set_rng(const Rng& rng) { rng_ = rng; }

private:
    TensorShape in_;
    double p_;
    Rng rng_;
    bool last_training_ = false;
    Matrix cached_mask_;
};

} // namespace fz
