#include "model.hpp"

#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace fz {

Model::Model(const ExperimentConfig& cfg, TensorShape input, std::size_t n_classes)
    : input_(input), n_classes_(n_classes) {
    if (input.channels < 1 || input.length < 1) {
        throw ShapeError("model: input shape must be at least 1x1");
    }
    if (n_classes < 2) throw DomainError("model: need at least 2 classes");

    TensorShape shape = input;
    std::size_t index = 0;
    auto layer_init_rng = [&](std::size_t i) {
        return derive_rng(cfg.seed, {hash_str("init"), static_cast<std::uint64_t>(i)});
    };
    auto layer_mask_seed = [&](std::size_t i, const std::optional<std::uint64_t>& pinned) {
        return pinned ? *pinned
                      : derive_seed(cfg.seed, {hash_str("mask"), static_cast<std::uint64_t>(i)});
    };

    for (const LayerSpec& spec : cfg.model) {
        try {
            if (spec.kind == "conv1d") {
                Rng rng = layer_init_rng(index);
                layers_.push_back(std::make_unique<Conv1dLayer>(shape, spec.out_channels,
                                                                spec.kernel_len, spec.stride,
                                                                rng));
            } else if (spec.kind == "channel_mix") {
                Rng rng = layer_init_rng(index);
                layers_.push_back(
                    std::make_unique<Conv1dLayer>(shape, spec.units, 1, 1, rng, "channel_mix"));
            } else if (spec.kind == "activation") {
                layers_.push_back(
                    std::make_unique<ActivationLayer>(shape, activation_from_name(spec.fn)));
            } else if (spec.kind == "pool") {
                layers_.push_back(
                    std::make_unique<MeanPoolLayer>(shape, spec.kernel_len, spec.stride));
            } else if (spec.kind == "flatten") {
                layers_.push_back(std::make_unique<FlattenLayer>(shape));
            } else if (spec.kind == "dropout") {
                const std::uint64_t seed =
                    spec.seed ? *spec.seed
                              : derive_seed(cfg.seed,
                                            {hash_str("dropout"), static_cast<std::uint64_t>(index)});
                layers_.push_back(std::make_unique<DropoutTrainLayer>(shape, spec.p, seed));
            } else if (spec.kind == "dense") {
                Rng rng = layer_init_rng(index);
                layers_.push_back(std::make_unique<DenseLayer>(shape, spec.units, rng,
                                                               spec.init == "zeros"));
            } else if (spec.kind == "frozen_dense") {
                Rng rng = layer_init_rng(index);
                MaskMatrix mask =
                    make_mask(spec.units, shape.features(), spec.threshold_t,
                              spec.mode == "sparse" ? MaskMode::sparse : MaskMode::frozen,
                              layer_mask_seed(index, spec.seed));
                layers_.push_back(std::make_unique<FrozenDenseLayer>(
                    shape, spec.units, std::move(mask), rng, spec.init == "zeros"));
            } else {
                throw ConfigError("model: unknown layer kind '" + spec.kind + "'");
            }
        } catch (const Error& e) {
            throw ConfigError("model layer " + std::to_string(index) + " (" + spec.kind +
                              "): " + e.what());
        }
        shape = layers_.back()->output_shape();
        ++index;
    }

    // Terminal classifier from the classifier spec.
    Rng rng = layer_init_rng(index);
    const bool zero_init = cfg.classifier.init == "zeros";
    if (cfg.classifier.mode == "none") {
        layers_.push_back(std::make_unique<DenseLayer>(shape, n_classes, rng, zero_init));
    } else {
        MaskMatrix mask = make_mask(
            n_classes, shape.features(), cfg.classifier.threshold_t,
            cfg.classifier.mode == "sparse" ? MaskMode::sparse : MaskMode::frozen,
            layer_mask_seed(index, cfg.classifier.mask_seed));
        layers_.push_back(std::make_unique<FrozenDenseLayer>(shape, n_classes, std::move(mask),
                                                             rng, zero_init));
    }
}

Matrix Model::forward(const Matrix& x, bool training) {
    if (x.cols() != input_.features()) {
        throw ShapeError("model forward: batch has " + std::to_string(x.cols()) +
                         " features, expected " + std::to_string(input_.features()));
    }
    Matrix cur = x;
    for (auto& layer : layers_) cur = layer->forward(cur, training);
    return cur;
}

void Model::backward(const Matrix& grad_logits) {
    Matrix grad = grad_logits;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
        grad = (*it)->backward(grad);
    }
}

std::vector<Param*> Model::params() {
    std::vector<Param*> out;
    for (auto& layer : layers_) {
        for (Param* p : layer->params()) out.push_back(p);
    }
    return out;
}

void Model::zero_grads() {
    for (Param* p : params()) p->zero_grad();
}

DenseLayer& Model::classifier() {
    return dynamic_cast<DenseLayer&>(*layers_.back());
}

const DenseLayer& Model::classifier() const {
    return dynamic_cast<const DenseLayer&>(*layers_.back());
}

void Model::verify_freeze_invariants() const {
    for (const auto& layer : layers_) {
        if (const auto* frozen = dynamic_cast<const FrozenDenseLayer*>(layer.get())) {
            frozen->verify_freeze_invariant();
        }
    }
}

std::vector<MaskStat> Model::mask_stats() const {
    std::vector<MaskStat> stats;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const MaskMatrix* mask = layers_[i]->mask();
        if (!mask) continue;
        MaskStat s;
        s.layer = "layer" + std::to_string(i) + ":" + layers_[i]->kind();
        s.threshold_t = mask->threshold_t;
        s.mode = mask->mode == MaskMode::sparse ? "sparse" : "frozen";
        s.frozen_count = mask->frozen_count();
        s.size = mask->keep.size();
        s.frozen_fraction = mask->frozen_fraction();
        stats.push_back(std::move(s));
    }
    return stats;
}

} // namespace fz
