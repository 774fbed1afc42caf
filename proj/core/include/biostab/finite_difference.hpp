#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace biostab::fd {

/// Weights w_j with f^(order)(x0) ~ sum_j w_j f(nodes[j]) (Fornberg's recursion).
std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int order);

struct Stencil {
    std::size_t first = 0;  ///< index of the node multiplying weights[0]
    std::vector<double> weights;
};

/// At least fourth-order accurate stencil for d^order/dz^order at `node` of the
/// uniform grid z_i = i h, i = 0..n_intervals. Centered where it fits,
/// otherwise a one-sided window of matching order pushed inside [0, N].
Stencil uniform_stencil(std::size_t node, std::size_t n_intervals, int order, double h);

}  // namespace biostab::fd
