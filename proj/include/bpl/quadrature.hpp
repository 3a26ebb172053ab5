#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "bpl/errors.hpp"

namespace bpl {

/// Gauss-Laguerre rule for integrals of the form  int_0^inf f(x) e^{-x} dx
///   ~ sum_i w_i f(x_i).
/// Nodes ascend; weights are positive and sum to 1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    double max_node() const { return nodes.back(); }
};

/// Golub-Welsch: nodes/weights from the symmetric tridiagonal Jacobi matrix of
/// the Laguerre recurrence (diagonal 2k+1, off-diagonal k).
inline QuadratureRule gauss_laguerre_rule(std::size_t n) {
    if (n < 1 || n > 200)
        throw DomainError("gauss_laguerre_rule: point count must be in [1, 200]");
    Eigen::VectorXd diag(n), sub(n > 1 ? n - 1 : 0);
    for (std::size_t k = 0; k < n; ++k) diag[static_cast<Eigen::Index>(k)] = 2.0 * k + 1.0;
    for (std::size_t k = 1; k < n; ++k) sub[static_cast<Eigen::Index>(k - 1)] = static_cast<double>(k);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("gauss_laguerre_rule: tridiagonal eigensolver failed");

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        rule.nodes[i] = es.eigenvalues()[idx];
        const double v0 = es.eigenvectors()(0, idx);
        rule.weights[i] = v0 * v0;  // mu_0 = int e^{-x} dx = 1
    }
    return rule;
}

}  // namespace bpl
