#include "loss.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace fz {

LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> targets,
                                 LossReduction reduction) {
    const std::size_t n = logits.rows();
    const std::size_t c = logits.cols();
    if (c < 2) throw DomainError("softmax_cross_entropy: need at least 2 classes");
    if (targets.size() != n) {
        throw ShapeError("softmax_cross_entropy: " + std::to_string(n) + " rows but " +
                         std::to_string(targets.size()) + " targets");
    }

    LossResult res;
    res.grad_logits = Matrix(n, c);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int t = targets[i];
        if (t < 0 || static_cast<std::size_t>(t) >= c) {
            throw DomainError("softmax_cross_entropy: target " + std::to_string(t) +
                              " out of range [0," + std::to_string(c) + ") at row " +
                              std::to_string(i));
        }
        const double* row = logits.row_ptr(i);
        double m = row[0];
        for (std::size_t j = 1; j < c; ++j) m = std::max(m, row[j]);
        double sum_exp = 0.0;
        for (std::size_t j = 0; j < c; ++j) sum_exp += std::exp(row[j] - m);
        const double log_z = m + std::log(sum_exp);
        loss += log_z - row[t];
        double* grad = res.grad_logits.row_ptr(i);
        for (std::size_t j = 0; j < c; ++j) {
            grad[j] = std::exp(row[j] - m) / sum_exp;
        }
        grad[t] -= 1.0;
    }

    if (reduction == LossReduction::mean) {
        const double inv_n = 1.0 / static_cast<double>(n);
        loss *= inv_n;
        for (std::size_t i = 0; i < res.grad_logits.size(); ++i) {
            res.grad_logits.data()[i] *= inv_n;
        }
    }
    res.loss = loss;
    return res;
}

} // namespace fz
