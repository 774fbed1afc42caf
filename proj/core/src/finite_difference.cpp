#include "biostab/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biostab::fd {

std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int order) {
    const int n = static_cast<int>(nodes.size());
    if (order < 0 || n <= order) throw std::invalid_argument("fornberg_weights: too few nodes");

    // c[j][m]: weight of node j for the m-th derivative
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int m = mn; m >= 1; --m)
                    c[i][m] = c1 * (m * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int m = mn; m >= 1; --m) c[j][m] = (c4 * c[j][m] - m * c[j][m - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = c[j][order];
    return w;
}

Stencil uniform_stencil(std::size_t node, std::size_t n_intervals, int order, double h) {
    if (order < 0 || order > 4) throw std::invalid_argument("uniform_stencil: order in 0..4");
    if (node > n_intervals) throw std::invalid_argument("uniform_stencil: node out of range");
    if (order == 0) return {node, {1.0}};

    const std::size_t centered = static_cast<std::size_t>(order) + (order % 2 == 0 ? 3 : 4);
    const std::size_t half = centered / 2;
    std::size_t size = centered;
    std::size_t first;
    if (node >= half && node + half <= n_intervals) {
        first = node - half;
    } else {
        if (order % 2 == 0) ++size;
        if (size > n_intervals + 1) throw std::invalid_argument("uniform_stencil: grid too small");
        first = node < half ? 0 : n_intervals + 1 - size;
    }

    std::vector<double> offsets(size);
    for (std::size_t j = 0; j < size; ++j)
        offsets[j] = static_cast<double>(first + j) - static_cast<double>(node);
    std::vector<double> w = fornberg_weights(0.0, offsets, order);
    const double scale = std::pow(h, -order);
    for (double& v : w) v *= scale;
    return {first, std::move(w)};
}

}  // namespace biostab::fd
