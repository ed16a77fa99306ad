#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "condtab/exactnum.hpp"
#include "condtab/types.hpp"

namespace condtab {

// The linear equation sum_j m_j * x_j = N induced by a conditional grid.
// Its positive solutions are in bijection with the admissible conditioning
// margins: s_{+j+} = m_j * x_j.
struct DiophEq {
    std::vector<std::int64_t> coeffs; // m_1 .. m_J, all >= 1
    std::int64_t rhs = 0;             // N >= 1

    int J() const { return (int)coeffs.size(); }
    void validate() const;
};

using SolutionVector = std::vector<std::int64_t>;

// J-1 independent integer kernel vectors of the coefficient row; every
// integer solution is one particular solution plus an integer combination.
struct LatticeBasis {
    std::vector<std::vector<std::int64_t>> vectors;
};

// m_j = lcm of the reduced denominators in column j; rhs = N.
DiophEq build_equation(const ConditionalSpec& spec);

// One integer solution (entries may be negative), built by the chained
// extended-Euclid construction and then reduced against the kernel basis to
// keep entries small. nullopt when gcd(coeffs) does not divide rhs.
std::optional<SolutionVector> solve_particular(const DiophEq& eq);

// Canonical kernel basis: Hermite normal form with pivots on the trailing
// coordinates (each vector's last nonzero entry is a positive pivot).
LatticeBasis lattice_basis(const DiophEq& eq);

// Exact solution count under the positivity mode, by dynamic programming
// over remainders (denumerant); no enumeration, so no cap.
BigInt count_solutions(const DiophEq& eq, Positivity positivity);

// Closed-form volume approximation of the solution count,
// N^{J-1} * gcd(m) / ((J-1)! * prod(m)), kept exact as a rational.
Rational approx_count_solutions(const DiophEq& eq);

// All solutions under the positivity mode in ascending lexicographic order.
// Throws resource_error once more than `cap` solutions have been produced.
std::vector<SolutionVector> enumerate_solutions(const DiophEq& eq, Positivity positivity,
                                                std::uint64_t cap);

// Margin vectors (length J) admissible for every spec at once: s_j divisible
// by each spec's m_j, s_j > 0, sum = N. Compared in margin space, since the
// specs scale x differently. Results in ascending lexicographic order.
std::vector<std::vector<std::int64_t>> intersect_margins(std::span<const ConditionalSpec> specs,
                                                         std::uint64_t cap);

namespace detail {

// Streams solutions in ascending lex order; emit returns false to stop.
// The first coordinate can be clamped to [first_lo, first_hi] so callers can
// partition the solution set into contiguous, order-preserving chunks.
template <class F>
bool stream_solutions(const DiophEq& eq, Positivity positivity, F&& emit,
                      std::int64_t first_lo = -1, std::int64_t first_hi = -1) {
    const int J = eq.J();
    const std::int64_t lo = positivity == Positivity::Strict ? 1 : 0;

    // minimal cost of coordinates after position j
    std::vector<std::int64_t> tail_min((std::size_t)J + 1, 0);
    for (int j = J - 1; j >= 0; --j) tail_min[(std::size_t)j] = tail_min[(std::size_t)j + 1] + eq.coeffs[(std::size_t)j] * lo;

    SolutionVector cur((std::size_t)J, 0);
    struct Frame {
        std::int64_t x;
        std::int64_t rem;
    };
    std::vector<Frame> stack((std::size_t)J);

    const auto last_ok = [&](std::int64_t rem, std::int64_t& x_last) {
        const std::int64_t m = eq.coeffs[(std::size_t)J - 1];
        if (rem < lo * m || rem % m != 0) return false;
        x_last = rem / m;
        return true;
    };

    if (J == 1) {
        std::int64_t x;
        if (last_ok(eq.rhs, x)) {
            if (first_lo >= 0 && (x < first_lo || x > first_hi)) return true;
            cur[0] = x;
            return emit(std::span<const std::int64_t>(cur));
        }
        return true;
    }

    int depth = 0;
    stack[0] = {first_lo >= 0 ? std::max(lo, first_lo) : lo, eq.rhs};
    while (depth >= 0) {
        Frame& fr = stack[(std::size_t)depth];
        const std::int64_t m = eq.coeffs[(std::size_t)depth];
        const std::int64_t hi_budget = fr.rem - tail_min[(std::size_t)depth + 1];
        std::int64_t hi = hi_budget >= 0 ? hi_budget / m : -1;
        if (depth == 0 && first_lo >= 0) hi = std::min(hi, first_hi);
        if (fr.x > hi) {
            --depth;
            if (depth >= 0) ++stack[(std::size_t)depth].x;
            continue;
        }
        cur[(std::size_t)depth] = fr.x;
        const std::int64_t rem = fr.rem - m * fr.x;
        if (depth == J - 2) {
            std::int64_t x;
            if (last_ok(rem, x)) {
                cur[(std::size_t)J - 1] = x;
                if (!emit(std::span<const std::int64_t>(cur))) return false;
            }
            ++fr.x;
        } else {
            ++depth;
            stack[(std::size_t)depth] = {lo, rem};
        }
    }
    return true;
}

} // namespace detail

} // namespace condtab
