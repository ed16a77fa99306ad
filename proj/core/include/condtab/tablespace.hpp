#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "condtab/diophantine.hpp"
#include "condtab/exactnum.hpp"
#include "condtab/types.hpp"

namespace condtab {

// Integer margin grid s_{ij+} = m_j * x_j * c_ij for a solution x.
// x must solve the induced equation with nonnegative entries.
MarginalTable margin_from_solution(const ConditionalSpec& spec, const SolutionVector& x);

// One margin per admissible solution, in solution lex order; empty when the
// equation is infeasible.
std::vector<MarginalTable> decompose_fiber(const ConditionalSpec& spec,
                                           Positivity positivity = Positivity::Strict,
                                           std::uint64_t cap = 10'000'000);

// True iff exactly one strict solution exists, i.e. the conditional fiber
// equals the fiber of the corresponding margin.
bool fibers_coincide(const ConditionalSpec& spec);

// Number of I x J x K tables with the given margin:
// prod_{ij} binomial(s_{ij+} + K - 1, K - 1).
BigInt count_given_margin(const MarginalTable& margin, int K);

// Real-relaxed version of the same product for (possibly rounded) margins.
double count_given_margin_real(std::span<const double> margin_entries, std::int64_t K);

struct FiberCount {
    std::vector<std::pair<MarginalTable, BigInt>> per_margin;
    BigInt total = 0;
    // False when the margin list was too large to materialize; the total is
    // exact either way.
    bool per_margin_complete = true;
};

struct CountOptions {
    int jobs = 1;
    std::uint64_t per_margin_limit = 100'000;
};

// Exact fiber size, decomposed by margin when the margin list fits the limit.
FiberCount count_fiber(const ConditionalSpec& spec, Positivity positivity,
                       const CountOptions& options = {});

// Volume approximation of the fiber size: the polytope integral of the
// real_binomial product scaled by gcd(m)/m_J, evaluated with Gauss-Legendre
// quadrature of order matching the polynomial degree of the integrand.
// Supported for J <= 3.
double approx_count_fiber(const ConditionalSpec& spec);

// Streams every table consistent with the spec, grouped by margin in
// solution lex order; within a margin, cells advance in (i, j) order and each
// cell's K-composition ascends lexicographically. emit may return false to
// stop early. Requires the exact fiber count to be <= cap.
void for_each_table(const ConditionalSpec& spec, std::uint64_t cap,
                    const std::function<bool(const Table3&)>& emit,
                    Positivity positivity = Positivity::Strict);

std::vector<Table3> enumerate_fiber(const ConditionalSpec& spec, std::uint64_t cap,
                                    Positivity positivity = Positivity::Strict);

// Number of 3-way tables with both 2-way margins [AB] and [AC] fixed,
// computed slice by slice over the shared first variable: each slice is a
// B x C grid with fixed row and column sums, counted by brute-force
// enumeration, and slices multiply.
BigInt count_fiber_two_margins(const MarginalTable& ab, const MarginalTable& ac,
                               std::uint64_t work_cap = 1ull << 26);

} // namespace condtab
