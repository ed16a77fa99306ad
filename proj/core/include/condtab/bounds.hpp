#pragma once

#include <cstdint>
#include <vector>

#include "condtab/diophantine.hpp"
#include "condtab/exactnum.hpp"
#include "condtab/types.hpp"

namespace condtab {

enum class BoundKind { Relaxation, PerMargin, Decomposition };

// Componentwise cell bounds over an I x J x K table.
struct BoundGrid {
    BoundKind kind = BoundKind::Relaxation;
    int I = 0, J = 0, K = 1;
    std::vector<Rational> lower, upper; // index (i*J + j)*K + k

    const Rational& lower_at(int i, int j, int k) const { return lower[idx(i, j, k)]; }
    const Rational& upper_at(int i, int j, int k) const { return upper[idx(i, j, k)]; }

    std::size_t idx(int i, int j, int k) const {
        return ((std::size_t)i * (std::size_t)J + (std::size_t)j) * (std::size_t)K + (std::size_t)k;
    }
};

// Bounds on the missing margin entries s_{ij+}.
struct MarginBoundGrid {
    int I = 0, J = 0;
    std::vector<Rational> lower, upper; // row-major I x J

    const Rational& lower_at(int i, int j) const { return lower[(std::size_t)i * (std::size_t)J + (std::size_t)j]; }
    const Rational& upper_at(int i, int j) const { return upper[(std::size_t)i * (std::size_t)J + (std::size_t)j]; }
};

// Linear-relaxation cell bounds [0, (N - (J-1)) * c_ij]: every other
// conditioning margin is held at its minimum positive integer value.
BoundGrid relaxation_cell_bounds(const ConditionalSpec& spec);

// Closed-form margin bounds m_j * c_ij <= s_{ij+} <= (N - sum_{t != j} m_t) * c_ij.
MarginBoundGrid margin_bounds_thm(const ConditionalSpec& spec);

// Bounds [0, s_{ij+}] for every cell under one fixed margin.
BoundGrid per_margin_cell_bounds(const MarginalTable& margin, int K);

// Exact integer cell bounds over the whole fiber, from the margin
// decomposition: [0, max_l (s_{ij+})_l] for K >= 2, [min_l, max_l] for K = 1.
BoundGrid decomposition_cell_bounds(const ConditionalSpec& spec, std::uint64_t cap = 10'000'000);

// Approximate number of distinct values coordinate i (0-based) can take:
// (N - sum_{j != i} m_j) * gcd(m) / (m_i * gcd(m without i)).
Rational approx_x_value_count(const DiophEq& eq, int i);

// Sorted distinct values each cell attains across the enumerated fiber,
// indexed like BoundGrid; exposes the gaps inside the bound intervals.
std::vector<std::vector<std::int64_t>> attained_cell_values(const ConditionalSpec& spec,
                                                            std::uint64_t cap,
                                                            Positivity positivity = Positivity::Strict);

} // namespace condtab
