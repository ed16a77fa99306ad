#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// recompute expected values from first principles (raw table enumeration,
// Pascal recurrences, symbolic polynomial integration) and never call the
// code paths they check.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "condtab/tablespace.hpp"
#include "condtab/types.hpp"

namespace condtab::testing {

inline Rational rat(long n, long d = 1) { return Rational(n, d); }

// 2x2x2 instance, N=50: conditional ((3/5, 1/5), (2/5, 4/5))
inline ConditionalSpec spec_2x2x2_n50() {
    ConditionalSpec s;
    s.I = 2;
    s.J = 2;
    s.K = 2;
    s.N = 50;
    s.c = {rat(3, 5), rat(1, 5), rat(2, 5), rat(4, 5)};
    return s;
}

// 2x3x2 instance: conditional ((1/2, 1/3, 1/4), (1/2, 2/3, 3/4))
inline ConditionalSpec spec_2x3x2(std::int64_t N) {
    ConditionalSpec s;
    s.I = 2;
    s.J = 3;
    s.K = 2;
    s.N = N;
    s.c = {rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 2), rat(2, 3), rat(3, 4)};
    return s;
}

// companion 2x3x2 instance sharing the conditioning variable:
// ((1/3, 1/3, 1/4), (2/3, 2/3, 3/4))
inline ConditionalSpec spec_2x3x2_companion(std::int64_t N) {
    ConditionalSpec s;
    s.I = 2;
    s.J = 3;
    s.K = 2;
    s.N = N;
    s.c = {rat(1, 3), rat(1, 3), rat(1, 4), rat(2, 3), rat(2, 3), rat(3, 4)};
    return s;
}

// full-conditional 3x4 instance (K = 1) with zero cells
inline ConditionalSpec spec_full_3x4(std::int64_t N) {
    ConditionalSpec s;
    s.I = 3;
    s.J = 4;
    s.K = 1;
    s.N = N;
    s.c = {rat(1, 3), rat(1, 4), rat(2, 5), rat(1, 6), rat(2, 3), rat(0), rat(0),
           rat(1, 3), rat(0),    rat(3, 4), rat(3, 5), rat(1, 2)};
    return s;
}

// 2x2x3 instance: conditional ((3/7, 5/17), (4/7, 12/17))
inline ConditionalSpec spec_2x2x3_n240() {
    ConditionalSpec s;
    s.I = 2;
    s.J = 2;
    s.K = 3;
    s.N = 240;
    s.c = {rat(3, 7), rat(5, 17), rat(4, 7), rat(12, 17)};
    return s;
}

// --- oracle: raw fiber enumeration -----------------------------------------
//
// Walks every nonnegative I*J*K table with grand total N (compositions of N
// into I*J*K cells) and keeps the ones whose conditionals match exactly.
// Exponential; only for tiny instances.
inline std::vector<Table3> oracle_enumerate_fiber(const ConditionalSpec& spec,
                                                  Positivity positivity) {
    std::vector<Table3> out;
    Table3 t;
    t.I = spec.I;
    t.J = spec.J;
    t.K = spec.K;
    const std::size_t cells = (std::size_t)spec.I * (std::size_t)spec.J * (std::size_t)spec.K;
    t.s.assign(cells, 0);

    const auto accept = [&] {
        for (int j = 0; j < spec.J; ++j) {
            std::int64_t col = 0;
            for (int i = 0; i < spec.I; ++i)
                for (int k = 0; k < spec.K; ++k) col += t.at(i, j, k);
            if (positivity == Positivity::Strict && col < 1) return false;
            for (int i = 0; i < spec.I; ++i) {
                std::int64_t sij = 0;
                for (int k = 0; k < spec.K; ++k) sij += t.at(i, j, k);
                // s_ij / col == c_ij exactly, cross-multiplied
                const Rational& c = spec.at(i, j);
                if (Rational(sij) * Rational(c.den()) != Rational(col) * Rational(c.num()))
                    return false;
            }
        }
        return true;
    };

    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t cell, std::int64_t rem) {
        if (cell == cells - 1) {
            t.s[cell] = rem;
            if (accept()) out.push_back(t);
            return;
        }
        for (std::int64_t v = 0; v <= rem; ++v) {
            t.s[cell] = v;
            rec(cell + 1, rem - v);
        }
    };
    rec(0, spec.N);
    return out;
}

// --- oracle: composition count via the Pascal recurrence --------------------
//
// Number of ways to write s as an ordered sum of K nonnegative parts,
// computed without binomial coefficients.
inline BigInt oracle_composition_count(std::int64_t s, int K) {
    std::vector<BigInt> dp((std::size_t)s + 1, 1); // K = 1 row
    for (int parts = 2; parts <= K; ++parts)
        for (std::int64_t v = 1; v <= s; ++v) dp[(std::size_t)v] += dp[(std::size_t)v - 1];
    return dp[(std::size_t)s];
}

// --- oracle: exact polynomial integration (power rule) ----------------------

struct Poly {
    std::vector<double> coef; // coef[d] * x^d

    static Poly constant(double c) { return Poly{{c}}; }
    static Poly linear(double c0, double c1) { return Poly{{c0, c1}}; }

    Poly operator*(const Poly& o) const {
        Poly r;
        r.coef.assign(coef.size() + o.coef.size() - 1, 0.0);
        for (std::size_t a = 0; a < coef.size(); ++a)
            for (std::size_t b = 0; b < o.coef.size(); ++b) r.coef[a + b] += coef[a] * o.coef[b];
        return r;
    }

    double integrate(double lo, double hi) const {
        double acc = 0.0, plo = lo, phi = hi;
        for (std::size_t d = 0; d < coef.size(); ++d) {
            acc += coef[d] * (phi - plo) / (double)(d + 1);
            plo *= lo;
            phi *= hi;
        }
        return acc;
    }
};

// prod_{t=1}^{K-1} (s(x) + t) / (K-1)!  for s(x) = a + b*x
inline Poly real_binomial_poly(double a, double b, int K) {
    Poly p = Poly::constant(1.0);
    double fact = 1.0;
    for (int t = 1; t <= K - 1; ++t) {
        p = p * Poly::linear(a + (double)t, b);
        fact *= (double)t;
    }
    for (double& c : p.coef) c /= fact;
    return p;
}

// --- randomized spec generator ----------------------------------------------

inline ConditionalSpec random_spec(std::mt19937& rng, int max_dim = 3, std::int64_t max_n = 60) {
    std::uniform_int_distribution<int> dim(1, max_dim);
    ConditionalSpec s;
    s.I = dim(rng);
    s.J = dim(rng);
    s.K = dim(rng);
    std::uniform_int_distribution<std::int64_t> total(1, max_n);
    s.N = total(rng);
    std::uniform_int_distribution<int> weight(0, 5);
    s.c.assign((std::size_t)s.I * (std::size_t)s.J, Rational(0));
    for (int j = 0; j < s.J; ++j) {
        std::vector<long> w((std::size_t)s.I);
        long sum = 0;
        for (auto& v : w) {
            v = weight(rng);
            sum += v;
        }
        if (sum == 0) {
            w[0] = 1;
            sum = 1;
        }
        for (int i = 0; i < s.I; ++i) s.at(i, j) = Rational(w[(std::size_t)i], sum);
    }
    return s;
}

} // namespace condtab::testing
