#pragma once

#include <utility>
#include <vector>

namespace condtab {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1];
// exact for polynomials of degree <= 2n - 1.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

} // namespace condtab
