#include "layers.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace fz {

// ---------------------------------------------------------------------------
// Masks
// ---------------------------------------------------------------------------

std::size_t MaskMatrix::frozen_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < keep.size(); ++i)
        if (keep.data()[i] == 0.0) ++count;
    return count;
}

double MaskMatrix::frozen_fraction() const {
    return keep.size() == 0 ? 0.0 : static_cast<double>(frozen_count()) / keep.size();
}

MaskMatrix make_mask(std::size_t rows, std::size_t cols, double t, MaskMode mode,
                     std::uint64_t seed) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError("make_mask: threshold t must lie in [0,1], got " + std::to_string(t));
    }
    Rng rng(seed);
    Matrix u = rng_uniform_matrix(rng, rows, cols);
    MaskMatrix mask;
    mask.keep = Matrix(rows, cols);
    for (std::size_t i = 0; i < u.size(); ++i) mask.keep.data()[i] = (u.data()[i] < t) ? 0.0 : 1.0;
    mask.threshold_t = t;
    mask.mode = mode;
    mask.seed = seed;
    return mask;
}

Matrix apply_mask_to_grad(const Matrix& grad_w, const MaskMatrix& mask) {
    if (!grad_w.same_shape(mask.keep)) {
        throw ShapeError("apply_mask_to_grad: gradient and mask shapes differ");
    }
    return hadamard(grad_w, mask.keep);
}

void Param::zero_grad() {
    for (std::size_t i = 0; i < grad.size(); ++i) grad.data()[i] = 0.0;
}

// ---------------------------------------------------------------------------
// Dense ops
// ---------------------------------------------------------------------------

Matrix dense_forward(const Matrix& x, const Matrix& w, const Matrix& b) {
    if (x.cols() != w.cols()) {
        throw ShapeError("dense_forward: x has " + std::to_string(x.cols()) +
                         " features but W expects " + std::to_string(w.cols()));
    }
    if (b.rows() != 1 || b.cols() != w.rows()) {
        throw ShapeError("dense_forward: bias must be 1x" + std::to_string(w.rows()));
    }
    Matrix y(x.rows(), w.rows());
    for (std::size_t n = 0; n < x.rows(); ++n) {
        for (std::size_t o = 0; o < w.rows(); ++o) {
            double acc = 0.0;
            for (std::size_t i = 0; i < w.cols(); ++i) acc += w(o, i) * x(n, i);
            y(n, o) = acc + b(0, o);
        }
    }
    return y;
}

DenseGrads dense_backward(const Matrix& grad_y, const Matrix& x, const Matrix& w) {
    if (grad_y.rows() != x.rows() || grad_y.cols() != w.rows() || x.cols() != w.cols()) {
        throw ShapeError("dense_backward: inconsistent shapes");
    }
    DenseGrads g;
    g.grad_w = Matrix(w.rows(), w.cols(), 0.0);
    g.grad_b = Matrix(1, w.rows(), 0.0);
    g.grad_x = Matrix(x.rows(), x.cols(), 0.0);
    for (std::size_t n = 0; n < x.rows(); ++n) {
        for (std::size_t o = 0; o < w.rows(); ++o) {
            const double gy = grad_y(n, o);
            g.grad_b(0, o) += gy;
            for (std::size_t i = 0; i < w.cols(); ++i) {
                g.grad_w(o, i) += gy * x(n, i);
                g.grad_x(n, i) += w(o, i) * gy;
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Conv1d ops
// ---------------------------------------------------------------------------

std::size_t conv1d_output_length(std::size_t input_len, std::size_t kernel_len,
                                 std::size_t stride) {
    if (kernel_len == 0 || stride == 0) {
        throw DomainError("conv1d: kernel_len and stride must be positive");
    }
    if (input_len < kernel_len) {
        throw ShapeError("conv1d: input length " + std::to_string(input_len) +
                         " shorter than kernel " + std::to_string(kernel_len));
    }
    return (input_len - kernel_len) / stride + 1;
}

namespace {

void check_conv_shapes(const Matrix& x, TensorShape in, const Matrix& kernels,
                       std::size_t kernel_len) {
    if (x.cols() != in.features()) {
        throw ShapeError("conv1d: batch columns " + std::to_string(x.cols()) +
                         " do not match shape " + std::to_string(in.channels) + "x" +
                         std::to_string(in.length));
    }
    if (kernels.cols() != in.channels * kernel_len) {
        throw ShapeError("conv1d: kernels expect " +
                         std::to_string(kernels.cols() / kernel_len) + " input channels, got " +
                         std::to_string(in.channels));
    }
}

} // namespace

Matrix conv1d_forward(const Matrix& x, TensorShape in, const Matrix& kernels, const Matrix& bias,
                      std::size_t kernel_len, std::size_t stride) {
    check_conv_shapes(x, in, kernels, kernel_len);
    const std::size_t out_ch = kernels.rows();
    const std::size_t out_len = conv1d_output_length(in.length, kernel_len, stride);
    if (bias.rows() != 1 || bias.cols() != out_ch) {
        throw ShapeError("conv1d: bias must be 1x" + std::to_string(out_ch));
    }
    Matrix y(x.rows(), out_ch * out_len);
    for (std::size_t n = 0; n < x.rows(); ++n) {
        const double* xin = x.row_ptr(n);
        double* yout = y.row_ptr(n);
        for (std::size_t oc = 0; oc < out_ch; ++oc) {
            const double* ker = kernels.row_ptr(oc);
            for (std::size_t j = 0; j < out_len; ++j) {
                double acc = 0.0;
                for (std::size_t ic = 0; ic < in.channels; ++ic) {
                    const double* xc = xin + ic * in.length + j * stride;
                    const double* kc = ker + ic * kernel_len;
                    for (std::size_t p = 0; p < kernel_len; ++p) acc += kc[p] * xc[p];
                }
                yout[oc * out_len + j] = acc + bias(0, oc);
            }
        }
    }
    return y;
}

Conv1dGrads conv1d_backward(const Matrix& grad_out, const Matrix& x, TensorShape in,
                            const Matrix& kernels, std::size_t kernel_len, std::size_t stride) {
    check_conv_shapes(x, in, kernels, kernel_len);
    const std::size_t out_ch = kernels.rows();
    const std::size_t out_len = conv1d_output_length(in.length, kernel_len, stride);
    if (grad_out.rows() != x.rows() || grad_out.cols() != out_ch * out_len) {
        throw ShapeError("conv1d_backward: grad_out shape mismatch");
    }
    Conv1dGrads g;
    g.grad_x = Matrix(x.rows(), x.cols(), 0.0);
    g.grad_kernels = Matrix(kernels.rows(), kernels.cols(), 0.0);
    g.grad_bias = Matrix(1, out_ch, 0.0);
    for (std::size_t n = 0; n < x.rows(); ++n) {
        const double* xin = x.row_ptr(n);
        double* gx = g.grad_x.row_ptr(n);
        const double* gout = grad_out.row_ptr(n);
        for (std::size_t oc = 0; oc < out_ch; ++oc) {
            const double* ker = kernels.row_ptr(oc);
            double* gker = g.grad_kernels.row_ptr(oc);
            for (std::size_t j = 0; j < out_len; ++j) {
                const double gy = gout[oc * out_len + j];
                if (gy == 0.0) continue;
                g.grad_bias(0, oc) += gy;
                for (std::size_t ic = 0; ic < in.channels; ++ic) {
                    const double* xc = xin + ic * in.length + j * stride;
                    double* gxc = gx + ic * in.length + j * stride;
                    const double* kc = ker + ic * kernel_len;
                    double* gkc = gker + ic * kernel_len;
                    for (std::size_t p = 0; p < kernel_len; ++p) {
                        gkc[p] += gy * xc[p];
                        gxc[p] += gy * kc[p];
                    }
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Dropout and activations
// ---------------------------------------------------------------------------

Matrix dropout_forward(const Matrix& v, double p, bool training, Rng& rng, Matrix* mask_out) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw DomainError("dropout: p must lie in [0,1), got " + std::to_string(p));
    }
    if (!training) {
        if (mask_out) *mask_out = Matrix();
        return v;
    }
    const double inv_keep = 1.0 / (1.0 - p);
    Matrix mask(v.rows(), v.cols());
    Matrix out(v.rows(), v.cols());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double m = (rng.next_uniform() < p) ? 0.0 : inv_keep;
        mask.data()[i] = m;
        out.data()[i] = v.data()[i] * m;
    }
    if (mask_out) *mask_out = std::move(mask);
    return out;
}

namespace {
constexpr double kLogClamp = 1e-7;
}

Matrix activation_forward(const Matrix& x, Activation kind) {
    Matrix y(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x.data()[i];
        double r = 0.0;
        switch (kind) {
        case Activation::relu: r = v > 0.0 ? v : 0.0; break;
        case Activation::elu: r = v > 0.0 ? v : std::expm1(v); break;
        case Activation::square: r = v * v; break;
        case Activation::log: r = std::log(v > kLogClamp ? v : kLogClamp); break;
        }
        y.data()[i] = r;
    }
    return y;
}

Matrix activation_backward(const Matrix& grad_y, const Matrix& x, Activation kind) {
    if (!grad_y.same_shape(x)) throw ShapeError("activation_backward: shape mismatch");
    Matrix g(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x.data()[i];
        double d = 0.0;
        switch (kind) {
        case Activation::relu: d = v > 0.0 ? 1.0 : 0.0; break;
        case Activation::elu: d = v > 0.0 ? 1.0 : std::exp(v); break; // exp(0) = 1 covers v == 0
        case Activation::square: d = 2.0 * v; break;
        case Activation::log: d = v > kLogClamp ? 1.0 / v : 0.0; break;
        }
        g.data()[i] = grad_y.data()[i] * d;
    }
    return g;
}

Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::relu;
    if (name == "elu") return Activation::elu;
    if (name == "square") return Activation::square;
    if (name == "log") return Activation::log;
    throw DomainError("unknown activation '" + name + "' (expected relu|elu|square|log)");
}

const char* activation_name(Activation kind) {
    switch (kind) {
    case Activation::relu: return "relu";
    case Activation::elu: return "elu";
    case Activation::square: return "square";
    case Activation::log: return "log";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Mean pooling
// ---------------------------------------------------------------------------

Matrix mean_pool_forward(const Matrix& x, TensorShape in, std::size_t kernel_len,
                         std::size_t stride) {
    const std::size_t out_len = conv1d_output_length(in.length, kernel_len, stride);
    if (x.cols() != in.features()) throw ShapeError("mean_pool: batch columns mismatch");
    Matrix y(x.rows(), in.channels * out_len);
    const double inv_k = 1.0 / static_cast<double>(kernel_len);
    for (std::size_t n = 0; n < x.rows(); ++n) {
        const double* xin = x.row_ptr(n);
        double* yout = y.row_ptr(n);
        for (std::size_t c = 0; c < in.channels; ++c) {
            for (std::size_t j = 0; j < out_len; ++j) {
                double acc = 0.0;
                const double* xc = xin + c * in.length + j * stride;
                for (std::size_t p = 0; p < kernel_len; ++p) acc += xc[p];
                yout[c * out_len + j] = acc * inv_k;
            }
        }
    }
    return y;
}

Matrix mean_pool_backward(const Matrix& grad_out, TensorShape in, std::size_t kernel_len,
                          std::size_t stride) {
    const std::size_t out_len = conv1d_output_length(in.length, kernel_len, stride);
    if (grad_out.cols() != in.channels * out_len) {
        throw ShapeError("mean_pool_backward: grad shape mismatch");
    }
    Matrix gx(grad_out.rows(), in.features(), 0.0);
    const double inv_k = 1.0 / static_cast<double>(kernel_len);
    for (std::size_t n = 0; n < grad_out.rows(); ++n) {
        const double* gout = grad_out.row_ptr(n);
        double* gin = gx.row_ptr(n);
        for (std::size_t c = 0; c < in.channels; ++c) {
            for (std::size_t j = 0; j < out_len; ++j) {
                const double g = gout[c * out_len + j] * inv_k;
                double* xc = gin + c * in.length + j * stride;
                for (std::size_t p = 0; p < kernel_len; ++p) xc[p] += g;
            }
        }
    }
    return gx;
}

// ---------------------------------------------------------------------------
// Layer classes
// ---------------------------------------------------------------------------

namespace {

Matrix init_weights(std::size_t out, std::size_t fan_in, Rng& rng, bool zero_init) {
    Matrix w(out, fan_in, 0.0);
    if (zero_init) return w;
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < w.size(); ++i) {
        w.data()[i] = (2.0 * rng.next_uniform() - 1.0) * bound;
    }
    return w;
}

} // namespace

DenseLayer::DenseLayer(TensorShape in, std::size_t units, Rng& init_rng, bool zero_init)
    : in_(in), units_(units) {
    if (units == 0) throw DomainError("dense: units must be >= 1");
    w_ = Param{"dense.W", init_weights(units, in.features(), init_rng, zero_init),
               Matrix(units, in.features(), 0.0), nullptr};
    b_ = Param{"dense.b", Matrix(1, units, 0.0), Matrix(1, units, 0.0), nullptr};
}

Matrix DenseLayer::forward(const Matrix& x, bool) {
    cached_x_ = x;
    return dense_forward(x, w_.value, b_.value);
}

Matrix DenseLayer::backward(const Matrix& grad_out) {
    DenseGrads g = dense_backward(grad_out, cached_x_, w_.value);
    w_.grad = std::move(g.grad_w);
    b_.grad = std::move(g.grad_b);
    return std::move(g.grad_x);
}

FrozenDenseLayer::FrozenDenseLayer(TensorShape in, std::size_t units, MaskMatrix mask,
                                   Rng& init_rng, bool zero_init)
    : DenseLayer(in, units, init_rng, zero_init), mask_(std::move(mask)) {
    if (!mask_.keep.same_shape(w_.value)) {
        throw ShapeError("frozen_dense: mask shape must equal weight shape");
    }
    w_.name = "frozen_dense.W";
    b_.name = "frozen_dense.b";
    if (mask_.mode == MaskMode::sparse) sparsify_weights(*this);
    frozen_snapshot_ = w_.value;
    w_.keep = &mask_.keep;
}

Matrix FrozenDenseLayer::backward(const Matrix& grad_out) {
    DenseGrads g = dense_backward(grad_out, cached_x_, w_.value);
    w_.grad = apply_mask_to_grad(g.grad_w, mask_);
    b_.grad = std::move(g.grad_b); // bias is never masked
    return std::move(g.grad_x);
}

void FrozenDenseLayer::verify_freeze_invariant() const {
    const Matrix& keep = mask_.keep;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep.data()[i] != 0.0) continue;
        const double want = mask_.mode == MaskMode::sparse ? 0.0 : frozen_snapshot_.data()[i];
        if (w_.value.data()[i] != want) {
            throw Error(Error::Kind::internal,
                        "freeze invariant violated at flat index " + std::to_string(i));
        }
    }
}

void FrozenDenseLayer::restore_mask(MaskMatrix mask, Matrix snapshot) {
    if (!mask.keep.same_shape(w_.value) || !snapshot.same_shape(w_.value)) {
        throw ShapeError("restore_mask: mask/snapshot shape mismatch");
    }
    mask_ = std::move(mask);
    frozen_snapshot_ = std::move(snapshot);
    w_.keep = &mask_.keep;
}

void sparsify_weights(FrozenDenseLayer& layer) {
    if (layer.mask_.mode != MaskMode::sparse) {
        throw ModeError("sparsify_weights: layer mask mode must be sparse");
    }
    const Matrix& keep = layer.mask_.keep;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep.data()[i] == 0.0) layer.w_.value.data()[i] = 0.0;
    }
}

Conv1dLayer::Conv1dLayer(TensorShape in, std::size_t out_channels, std::size_t kernel_len,
                         std::size_t stride, Rng& init_rng, const char* kind_name)
    : kind_(kind_name), in_(in), kernel_len_(kernel_len), stride_(stride) {
    if (out_channels == 0) throw DomainError("conv1d: out_channels must be >= 1");
    out_shape_ = {out_channels, conv1d_output_length(in.length, kernel_len, stride)};
    const std::size_t fan_in = in.channels * kernel_len;
    kernels_ = Param{"conv1d.kernels", init_weights(out_channels, fan_in, init_rng, false),
                     Matrix(out_channels, fan_in, 0.0), nullptr};
    bias_ = Param{"conv1d.bias", Matrix(1, out_channels, 0.0), Matrix(1, out_channels, 0.0),
                  nullptr};
}

Matrix Conv1dLayer::forward(const Matrix& x, bool) {
    cached_x_ = x;
    return conv1d_forward(x, in_, kernels_.value, bias_.value, kernel_len_, stride_);
}

Matrix Conv1dLayer::backward(const Matrix& grad_out) {
    Conv1dGrads g = conv1d_backward(grad_out, cached_x_, in_, kernels_.value, kernel_len_,
                                    stride_);
    kernels_.grad = std::move(g.grad_kernels);
    bias_.grad = std::move(g.grad_bias);
    return std::move(g.grad_x);
}

Matrix ActivationLayer::forward(const Matrix& x, bool) {
    cached_x_ = x;
    return activation_forward(x, fn_);
}

Matrix ActivationLayer::backward(const Matrix& grad_out) {
    return activation_backward(grad_out, cached_x_, fn_);
}

MeanPoolLayer::MeanPoolLayer(TensorShape in, std::size_t kernel_len, std::size_t stride)
    : in_(in), kernel_len_(kernel_len), stride_(stride) {
    out_shape_ = {in.channels, conv1d_output_length(in.length, kernel_len, stride)};
}

Matrix MeanPoolLayer::forward(const Matrix& x, bool) {
    return mean_pool_forward(x, in_, kernel_len_, stride_);
}

Matrix MeanPoolLayer::backward(const Matrix& grad_out) {
    return mean_pool_backward(grad_out, in_, kernel_len_, stride_);
}

Matrix FlattenLayer::forward(const Matrix& x, bool) {
    if (x.cols() != in_.features()) throw ShapeError("flatten: batch columns mismatch");
    return x;
}

Matrix FlattenLayer::backward(const Matrix& grad_out) {
    return grad_out;
}

DropoutTrainLayer::DropoutTrainLayer(TensorShape in, double p, std::uint64_t seed)
    : in_(in), p_(p), rng_(seed) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw DomainError("dropout: p must lie in [0,1), got " + std::to_string(p));
    }
}

Matrix DropoutTrainLayer::forward(const Matrix& x, bool training) {
    last_training_ = training;
    if (!training) return x;
    return dropout_forward(x, p_, true, rng_, &cached_mask_);
}

Matrix DropoutTrainLayer::backward(const Matrix& grad_out) {
    if (!last_training_) return grad_out;
    return hadamard(grad_out, cached_mask_);
}

} // namespace fz
