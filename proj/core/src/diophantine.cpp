#include "condtab/diophantine.hpp"

#include <algorithm>

#include "condtab/errors.hpp"

namespace condtab {

void DiophEq::validate() const {
    if (coeffs.empty()) throw validation_error("equation: needs at least one coefficient");
    for (std::int64_t m : coeffs)
        if (m < 1) throw validation_error("equation: coefficients must be >= 1");
    if (rhs < 1) throw validation_error("equation: right-hand side must be >= 1");
}

DiophEq build_equation(const ConditionalSpec& spec) {
    spec.validate();
    DiophEq eq;
    eq.rhs = spec.N;
    eq.coeffs.reserve((std::size_t)spec.J);
    for (int j = 0; j < spec.J; ++j) {
        std::vector<BigInt> dens;
        dens.reserve((std::size_t)spec.I);
        for (int i = 0; i < spec.I; ++i) dens.push_back(spec.at(i, j).den());
        BigInt m = lcm_many(dens);
        if (!m.fits_slong_p())
            throw resource_error("equation: column denominator lcm exceeds 64-bit range");
        eq.coeffs.push_back(m.get_si());
    }
    return eq;
}

namespace {

// Unimodular column reduction of the row (m_1..m_J): returns J-1 kernel
// vectors (columns of the transform matrix that map to zero).
std::vector<std::vector<BigInt>> raw_kernel(const std::vector<std::int64_t>& ms) {
    const int J = (int)ms.size();
    std::vector<std::vector<BigInt>> U((std::size_t)J, std::vector<BigInt>((std::size_t)J, 0));
    for (int t = 0; t < J; ++t) U[(std::size_t)t][(std::size_t)t] = 1;
    std::vector<BigInt> r((std::size_t)J);
    for (int t = 0; t < J; ++t) r[(std::size_t)t] = (long)ms[(std::size_t)t];

    BigInt g, p, q;
    for (int col = 1; col < J; ++col) {
        if (r[(std::size_t)col] == 0) continue;
        mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), r[0].get_mpz_t(),
                   r[(std::size_t)col].get_mpz_t());
        const BigInt a0 = r[0] / g;
        const BigInt ac = r[(std::size_t)col] / g;
        for (int row = 0; row < J; ++row) {
            const BigInt u0 = U[(std::size_t)row][0];
            const BigInt uc = U[(std::size_t)row][(std::size_t)col];
            U[(std::size_t)row][0] = p * u0 + q * uc;
            U[(std::size_t)row][(std::size_t)col] = a0 * uc - ac * u0;
        }
        r[0] = g;
        r[(std::size_t)col] = 0;
    }

    std::vector<std::vector<BigInt>> basis;
    basis.reserve((std::size_t)J - 1);
    for (int col = 1; col < J; ++col) {
        std::vector<BigInt> v((std::size_t)J);
        for (int row = 0; row < J; ++row) v[(std::size_t)row] = U[(std::size_t)row][(std::size_t)col];
        basis.push_back(std::move(v));
    }
    return basis;
}

// In-place row Hermite normal form: leading pivots positive, entries above
// each pivot reduced into [0, pivot).
void row_hnf(std::vector<std::vector<BigInt>>& B) {
    if (B.empty()) return;
    const int m = (int)B.size();
    const int n = (int)B[0].size();
    int pr = 0;
    for (int pc = 0; pc < n && pr < m; ++pc) {
        while (true) {
            int best = -1;
            int nonzero = 0;
            for (int ri = pr; ri < m; ++ri) {
                if (B[(std::size_t)ri][(std::size_t)pc] != 0) {
                    ++nonzero;
                    if (best < 0 || abs(B[(std::size_t)ri][(std::size_t)pc]) <
                                        abs(B[(std::size_t)best][(std::size_t)pc]))
                        best = ri;
                }
            }
            if (nonzero == 0) {
                best = -1;
                break;
            }
            if (nonzero == 1) {
                std::swap(B[(std::size_t)pr], B[(std::size_t)best]);
                break;
            }
            for (int ri = pr; ri < m; ++ri) {
                if (ri == best || B[(std::size_t)ri][(std::size_t)pc] == 0) continue;
                BigInt q;
                mpz_fdiv_q(q.get_mpz_t(), B[(std::size_t)ri][(std::size_t)pc].get_mpz_t(),
                           B[(std::size_t)best][(std::size_t)pc].get_mpz_t());
                for (int t = 0; t < n; ++t)
                    B[(std::size_t)ri][(std::size_t)t] -= q * B[(std::size_t)best][(std::size_t)t];
            }
        }
        if (B[(std::size_t)pr][(std::size_t)pc] == 0) continue;
        if (B[(std::size_t)pr][(std::size_t)pc] < 0)
            for (int t = 0; t < n; ++t) B[(std::size_t)pr][(std::size_t)t] = -B[(std::size_t)pr][(std::size_t)t];
        for (int ri = 0; ri < pr; ++ri) {
            BigInt q;
            mpz_fdiv_q(q.get_mpz_t(), B[(std::size_t)ri][(std::size_t)pc].get_mpz_t(),
                       B[(std::size_t)pr][(std::size_t)pc].get_mpz_t());
            if (q != 0)
                for (int t = 0; t < n; ++t)
                    B[(std::size_t)ri][(std::size_t)t] -= q * B[(std::size_t)pr][(std::size_t)t];
        }
        ++pr;
    }
}

std::int64_t to_i64(const BigInt& v, const char* what) {
    if (!v.fits_slong_p()) throw resource_error(std::string(what) + " exceeds 64-bit range");
    return v.get_si();
}

// Kernel basis in trailing-pivot HNF, as BigInt rows in original coordinate
// order (first row pivots on the last coordinate).
std::vector<std::vector<BigInt>> trailing_hnf_kernel(const std::vector<std::int64_t>& ms) {
    std::vector<std::int64_t> rev(ms.rbegin(), ms.rend());
    auto basis = raw_kernel(rev);
    row_hnf(basis);
    for (auto& v : basis) std::reverse(v.begin(), v.end());
    return basis;
}

} // namespace

LatticeBasis lattice_basis(const DiophEq& eq) {
    eq.validate();
    LatticeBasis out;
    if (eq.J() < 2) return out;
    for (const auto& v : trailing_hnf_kernel(eq.coeffs)) {
        std::vector<std::int64_t> w;
        w.reserve(v.size());
        for (const BigInt& e : v) w.push_back(to_i64(e, "lattice basis entry"));
        out.vectors.push_back(std::move(w));
    }
    return out;
}

std::optional<SolutionVector> solve_particular(const DiophEq& eq) {
    eq.validate();
    const int J = eq.J();

    // chained extended Euclid: running gcd of the prefix with its combination
    std::vector<BigInt> comb((std::size_t)J, 0);
    comb[0] = 1;
    BigInt g = (long)eq.coeffs[0];
    BigInt p, q, g2;
    for (int t = 1; t < J; ++t) {
        BigInt mt((long)eq.coeffs[(std::size_t)t]);
        mpz_gcdext(g2.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), g.get_mpz_t(), mt.get_mpz_t());
        for (int u = 0; u < t; ++u) comb[(std::size_t)u] *= p;
        comb[(std::size_t)t] = q;
        g = g2;
    }
    if (BigInt((long)eq.rhs) % g != 0) return std::nullopt;
    const BigInt scale = BigInt((long)eq.rhs) / g;
    std::vector<BigInt> x((std::size_t)J);
    for (int t = 0; t < J; ++t) x[(std::size_t)t] = comb[(std::size_t)t] * scale;

    // shrink against the kernel basis: floor-reduce each trailing pivot
    if (J >= 2) {
        for (const auto& v : trailing_hnf_kernel(eq.coeffs)) {
            int piv = J - 1;
            while (piv >= 0 && v[(std::size_t)piv] == 0) --piv;
            BigInt steps;
            mpz_fdiv_q(steps.get_mpz_t(), x[(std::size_t)piv].get_mpz_t(),
                       v[(std::size_t)piv].get_mpz_t());
            if (steps != 0)
                for (int t = 0; t < J; ++t) x[(std::size_t)t] -= steps * v[(std::size_t)t];
        }
    }

    SolutionVector out;
    out.reserve((std::size_t)J);
    for (const BigInt& e : x) out.push_back(to_i64(e, "particular solution entry"));
    return out;
}

BigInt count_solutions(const DiophEq& eq, Positivity positivity) {
    eq.validate();
    std::int64_t target = eq.rhs;
    if (positivity == Positivity::Strict) {
        for (std::int64_t m : eq.coeffs) target -= m;
        if (target < 0) return 0;
    }
    if (target > (std::int64_t)100'000'000)
        throw resource_error("count_solutions: right-hand side too large for the remainder table");
    std::vector<BigInt> dp((std::size_t)target + 1);
    dp[0] = 1;
    for (std::int64_t m : eq.coeffs)
        for (std::int64_t n = m; n <= target; ++n)
            dp[(std::size_t)n] += dp[(std::size_t)(n - m)];
    return dp[(std::size_t)target];
}

Rational approx_count_solutions(const DiophEq& eq) {
    eq.validate();
    const int J = eq.J();
    BigInt num;
    mpz_ui_pow_ui(num.get_mpz_t(), (unsigned long)eq.rhs, (unsigned long)(J - 1));
    num *= gcd_many(std::span<const std::int64_t>(eq.coeffs));
    BigInt den;
    mpz_fac_ui(den.get_mpz_t(), (unsigned long)(J - 1));
    for (std::int64_t m : eq.coeffs) den *= (long)m;
    return Rational(num, den);
}

std::vector<SolutionVector> enumerate_solutions(const DiophEq& eq, Positivity positivity,
                                                std::uint64_t cap) {
    eq.validate();
    std::vector<SolutionVector> out;
    const bool complete =
        detail::stream_solutions(eq, positivity, [&](std::span<const std::int64_t> x) {
            if ((std::uint64_t)out.size() >= cap) return false;
            out.emplace_back(x.begin(), x.end());
            return true;
        });
    if (!complete)
        throw resource_error("enumerate_solutions: more than " + std::to_string(cap) +
                             " solutions");
    return out;
}

std::vector<std::vector<std::int64_t>> intersect_margins(std::span<const ConditionalSpec> specs,
                                                         std::uint64_t cap) {
    if (specs.empty()) throw validation_error("intersect_margins: no specs given");
    std::vector<DiophEq> eqs;
    eqs.reserve(specs.size());
    for (const auto& s : specs) eqs.push_back(build_equation(s));
    const int J = eqs[0].J();
    for (const auto& e : eqs) {
        if (e.J() != J) throw validation_error("intersect_margins: mismatched conditioning level counts");
        if (e.rhs != eqs[0].rhs) throw validation_error("intersect_margins: mismatched grand totals");
    }

    // a margin admissible for every spec is exactly a positive multiple of
    // the columnwise lcm of the coefficient vectors
    DiophEq merged;
    merged.rhs = eqs[0].rhs;
    for (int j = 0; j < J; ++j) {
        std::vector<BigInt> col;
        col.reserve(eqs.size());
        for (const auto& e : eqs) col.push_back(BigInt((long)e.coeffs[(std::size_t)j]));
        merged.coeffs.push_back(to_i64(lcm_many(col), "merged coefficient"));
    }

    std::vector<std::vector<std::int64_t>> margins;
    const bool complete =
        detail::stream_solutions(merged, Positivity::Strict, [&](std::span<const std::int64_t> y) {
            if ((std::uint64_t)margins.size() >= cap) return false;
            std::vector<std::int64_t> s((std::size_t)J);
            for (int j = 0; j < J; ++j) s[(std::size_t)j] = merged.coeffs[(std::size_t)j] * y[(std::size_t)j];
            margins.push_back(std::move(s));
            return true;
        });
    if (!complete)
        throw resource_error("intersect_margins: more than " + std::to_string(cap) + " margins");
    return margins;
}

} // namespace condtab
