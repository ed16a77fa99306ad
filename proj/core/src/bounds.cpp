#include "condtab/bounds.hpp"

#include <set>

#include "condtab/errors.hpp"
#include "condtab/tablespace.hpp"

namespace condtab {

BoundGrid relaxation_cell_bounds(const ConditionalSpec& spec) {
    spec.validate();
    BoundGrid g;
    g.kind = BoundKind::Relaxation;
    g.I = spec.I;
    g.J = spec.J;
    g.K = spec.K;
    const std::size_t n = (std::size_t)spec.I * (std::size_t)spec.J * (std::size_t)spec.K;
    g.lower.assign(n, Rational(0));
    g.upper.resize(n);
    const Rational budget((long)(spec.N - (spec.J - 1)));
    for (int i = 0; i < spec.I; ++i)
        for (int j = 0; j < spec.J; ++j) {
            const Rational u = budget * spec.at(i, j);
            for (int k = 0; k < spec.K; ++k) g.upper[g.idx(i, j, k)] = u;
        }
    return g;
}

MarginBoundGrid margin_bounds_thm(const ConditionalSpec& spec) {
    const DiophEq eq = build_equation(spec);
    MarginBoundGrid g;
    g.I = spec.I;
    g.J = spec.J;
    g.lower.resize((std::size_t)spec.I * (std::size_t)spec.J);
    g.upper.resize((std::size_t)spec.I * (std::size_t)spec.J);
    std::int64_t coeff_sum = 0;
    for (std::int64_t m : eq.coeffs) coeff_sum += m;
    for (int j = 0; j < spec.J; ++j) {
        // with a single conditioning class the margin is pinned at N
        const Rational floor_scale = spec.J == 1 ? Rational((long)spec.N)
                                                 : Rational((long)eq.coeffs[(std::size_t)j]);
        const Rational top((long)(spec.N - (coeff_sum - eq.coeffs[(std::size_t)j])));
        for (int i = 0; i < spec.I; ++i) {
            const std::size_t at = (std::size_t)i * (std::size_t)spec.J + (std::size_t)j;
            g.lower[at] = floor_scale * spec.at(i, j);
            g.upper[at] = top * spec.at(i, j);
        }
    }
    return g;
}

BoundGrid per_margin_cell_bounds(const MarginalTable& margin, int K) {
    if (K < 1) throw validation_error("per_margin_cell_bounds: K must be >= 1");
    BoundGrid g;
    g.kind = BoundKind::PerMargin;
    g.I = margin.I;
    g.J = margin.J;
    g.K = K;
    const std::size_t n = (std::size_t)margin.I * (std::size_t)margin.J * (std::size_t)K;
    g.lower.assign(n, Rational(0));
    g.upper.resize(n);
    for (int i = 0; i < margin.I; ++i)
        for (int j = 0; j < margin.J; ++j) {
            const Rational u((long)margin.at(i, j));
            for (int k = 0; k < K; ++k) g.upper[g.idx(i, j, k)] = u;
        }
    return g;
}

BoundGrid decomposition_cell_bounds(const ConditionalSpec& spec, std::uint64_t cap) {
    const auto margins = decompose_fiber(spec, Positivity::Strict, cap);
    if (margins.empty())
        throw validation_error("decomposition_cell_bounds: the fiber is empty (infeasible spec)");
    BoundGrid g;
    g.kind = BoundKind::Decomposition;
    g.I = spec.I;
    g.J = spec.J;
    g.K = spec.K;
    const std::size_t n = (std::size_t)spec.I * (std::size_t)spec.J * (std::size_t)spec.K;
    g.lower.resize(n);
    g.upper.resize(n);
    for (int i = 0; i < spec.I; ++i)
        for (int j = 0; j < spec.J; ++j) {
            std::int64_t lo = margins[0].at(i, j), hi = lo;
            for (const auto& m : margins) {
                lo = std::min(lo, m.at(i, j));
                hi = std::max(hi, m.at(i, j));
            }
            // any cell can empty out when the margin splits over K >= 2 levels
            const Rational cell_lo = spec.K >= 2 ? Rational(0) : Rational((long)lo);
            const Rational cell_hi((long)hi);
            for (int k = 0; k < spec.K; ++k) {
                g.lower[g.idx(i, j, k)] = cell_lo;
                g.upper[g.idx(i, j, k)] = cell_hi;
            }
        }
    return g;
}

Rational approx_x_value_count(const DiophEq& eq, int i) {
    eq.validate();
    const int J = eq.J();
    if (J < 2) throw validation_error("approx_x_value_count: needs J >= 2");
    if (i < 0 || i >= J) throw validation_error("approx_x_value_count: index out of range");
    std::int64_t others_sum = 0;
    std::vector<std::int64_t> others;
    others.reserve((std::size_t)J - 1);
    for (int j = 0; j < J; ++j) {
        if (j == i) continue;
        others.push_back(eq.coeffs[(std::size_t)j]);
        others_sum += eq.coeffs[(std::size_t)j];
    }
    const BigInt g_all = gcd_many(std::span<const std::int64_t>(eq.coeffs));
    const BigInt g_others = gcd_many(std::span<const std::int64_t>(others));
    return Rational(BigInt((long)(eq.rhs - others_sum)) * g_all,
                    BigInt((long)eq.coeffs[(std::size_t)i]) * g_others);
}

std::vector<std::vector<std::int64_t>> attained_cell_values(const ConditionalSpec& spec,
                                                            std::uint64_t cap,
                                                            Positivity positivity) {
    const std::size_t n = (std::size_t)spec.I * (std::size_t)spec.J * (std::size_t)spec.K;
    std::vector<std::set<std::int64_t>> seen(n);
    for_each_table(
        spec, cap,
        [&](const Table3& t) {
            for (std::size_t c = 0; c < n; ++c) seen[c].insert(t.s[c]);
            return true;
        },
        positivity);
    std::vector<std::vector<std::int64_t>> out(n);
    for (std::size_t c = 0; c < n; ++c) out[c].assign(seen[c].begin(), seen[c].end());
    return out;
}

} // namespace condtab
