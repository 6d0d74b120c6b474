#pragma once

#include <span>

#include "matrix.hpp"

namespace fz {

enum class LossReduction { sum, mean };

struct LossResult {
    double loss = 0.0;
    Matrix grad_logits; // softmax minus one-hot; every row sums to ~0
};

/// Cross entropy of row-wise softmax against integer class targets, computed
/// through the log-sum-exp max-shift. Sum reduction matches the printed loss
/// definition; mean divides both loss and gradient by the batch size.
LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> targets,
                                 LossReduction reduction = LossReduction::sum);

} // namespace fz
