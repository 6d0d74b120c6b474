#include "sym_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "error.hpp"

namespace fz {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

} // namespace

SymEig sym_eig(const Matrix& s) {
    if (s.rows() != s.cols()) {
        throw ShapeError("sym_eig: matrix must be square, got " + std::to_string(s.rows()) + "x" +
                         std::to_string(s.cols()));
    }
    const std::size_t n = s.rows();
    const double scale = std::max(1.0, max_abs(s));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::fabs(s(i, j) - s(j, i)) > 1e-9 * scale) {
                throw DomainError("sym_eig: matrix not symmetric within 1e-9 at (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }

    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (s(i, j) + s(j, i));

    Matrix v = Matrix::identity(n);
    const double norm = std::max(frobenius_norm(a), 1e-300);
    // Convergence is declared below 1e-12 * ||s||; sweeps continue to the
    // machine floor because the inverse square root amplifies off-diagonal
    // residue by 1/sqrt(lambda_i lambda_j) on ill-conditioned inputs.
    const double tol = 1e-12 * norm;
    const double floor = 1e-15 * norm;

    constexpr int kMaxSweeps = 128;
    double prev_off = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const double off = off_diagonal_norm(a);
        if (off <= floor) break;
        if (off < tol && off >= prev_off) break; // converged and no longer improving
        prev_off = off;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
                a(p, q) = 0.0; // the rotation annihilates this pair exactly
                a(q, p) = 0.0;
            }
        }
    }
    if (off_diagonal_norm(a) >= tol && n > 1) {
        throw NumericError("sym_eig: Jacobi iteration did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    SymEig result;
    result.values.resize(n);
    result.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        result.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) result.vectors(i, j) = v(i, order[j]);
    }
    return result;
}

Matrix sym_inv_sqrt(const Matrix& s, double eps) {
    if (eps <= 0.0) throw DomainError("sym_inv_sqrt: eps must be positive");
    SymEig eig = sym_eig(s);
    const std::size_t n = s.rows();

    Matrix scaled = eig.vectors; // columns scaled by lambda^(-1/2)
    for (std::size_t j = 0; j < n; ++j) {
        const double lambda = std::max(eig.values[j], eps);
        const double f = 1.0 / std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= f;
    }
    Matrix m = matmul(scaled, transpose(eig.vectors));
    // Exact symmetry by construction of the returned value.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = avg;
            m(j, i) = avg;
        }
    return m;
}

} // namespace fz
