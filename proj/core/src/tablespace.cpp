#include "condtab/tablespace.hpp"

#include <algorithm>
#include <limits>
#include <thread>

#include "condtab/errors.hpp"
#include "gauss_legendre.hpp"

namespace condtab {

namespace {

using u128 = unsigned __int128;
constexpr u128 U128_MAX = ~(u128)0;

// m_j * c_ij as exact integers, row-major I x J
std::vector<std::int64_t> cell_scales(const ConditionalSpec& spec, const DiophEq& eq) {
    std::vector<std::int64_t> scale((std::size_t)spec.I * (std::size_t)spec.J);
    for (int i = 0; i < spec.I; ++i)
        for (int j = 0; j < spec.J; ++j) {
            const Rational& cij = spec.at(i, j);
            BigInt v = BigInt((long)eq.coeffs[(std::size_t)j]) / cij.den() * cij.num();
            if (!v.fits_slong_p()) throw resource_error("margin entry exceeds 64-bit range");
            scale[(std::size_t)i * (std::size_t)spec.J + (std::size_t)j] = v.get_si();
        }
    return scale;
}

// binomial(n, k) for small k; false when the result does not fit u64
bool binom_u64(std::uint64_t n, unsigned k, std::uint64_t& out) {
    if (k > n) {
        out = 0;
        return true;
    }
    k = (unsigned)std::min<std::uint64_t>(k, n - k);
    u128 r = 1;
    for (unsigned t = 1; t <= k; ++t) {
        r = r * (n - k + t) / t; // exact: prefix products of C(n,k) are integers
        if (r > (u128)std::numeric_limits<std::uint64_t>::max()) return false;
    }
    out = (std::uint64_t)r;
    return true;
}

BigInt u128_to_big(u128 v) {
    BigInt r((unsigned long)(v >> 64));
    r <<= 64;
    r += (unsigned long)(v & ~(std::uint64_t)0);
    return r;
}

// Running exact sum that stays in machine words until it must spill.
struct BigAccumulator {
    BigInt total = 0;
    u128 partial = 0;

    void add(u128 v) {
        if (partial > U128_MAX - v) {
            total += u128_to_big(partial);
            partial = 0;
        }
        partial += v;
    }
    void add(const BigInt& v) { total += v; }
    BigInt take() {
        if (partial != 0) {
            total += u128_to_big(partial);
            partial = 0;
        }
        return total;
    }
};

// Per-solution table count prod_{ij} C(scale_ij * x_j + K-1, K-1); the u128
// fast path covers every realistic margin, the BigInt path the rest.
struct MarginCounter {
    const std::vector<std::int64_t>& scale;
    int I, J;
    unsigned k1; // K - 1

    bool count_u128(std::span<const std::int64_t> x, u128& out) const {
        u128 acc = 1;
        for (int i = 0; i < I; ++i)
            for (int j = 0; j < J; ++j) {
                const std::uint64_t s =
                    (std::uint64_t)scale[(std::size_t)i * (std::size_t)J + (std::size_t)j] *
                    (std::uint64_t)x[(std::size_t)j];
                std::uint64_t f;
                if (!binom_u64(s + k1, k1, f)) return false;
                if (f != 1) {
                    if (acc > U128_MAX / f) return false;
                    acc *= f;
                }
            }
        out = acc;
        return true;
    }

    BigInt count_big(std::span<const std::int64_t> x) const {
        BigInt acc = 1, f;
        for (int i = 0; i < I; ++i)
            for (int j = 0; j < J; ++j) {
                const std::uint64_t s =
                    (std::uint64_t)scale[(std::size_t)i * (std::size_t)J + (std::size_t)j] *
                    (std::uint64_t)x[(std::size_t)j];
                mpz_bin_uiui(f.get_mpz_t(), s + k1, k1);
                acc *= f;
            }
        return acc;
    }
};

MarginalTable margin_from_scales(const std::vector<std::int64_t>& scale, int I, int J,
                                 std::span<const std::int64_t> x) {
    MarginalTable m;
    m.I = I;
    m.J = J;
    m.s.resize((std::size_t)I * (std::size_t)J);
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < J; ++j)
            m.at(i, j) = scale[(std::size_t)i * (std::size_t)J + (std::size_t)j] * x[(std::size_t)j];
    return m;
}

} // namespace

MarginalTable margin_from_solution(const ConditionalSpec& spec, const SolutionVector& x) {
    const DiophEq eq = build_equation(spec);
    if ((int)x.size() != spec.J)
        throw validation_error("margin_from_solution: solution length does not match J");
    std::int64_t lhs = 0;
    for (int j = 0; j < spec.J; ++j) {
        if (x[(std::size_t)j] < 0)
            throw validation_error("margin_from_solution: negative solution entry");
        lhs += eq.coeffs[(std::size_t)j] * x[(std::size_t)j];
    }
    if (lhs != eq.rhs)
        throw validation_error("margin_from_solution: x does not solve the induced equation");
    return margin_from_scales(cell_scales(spec, eq), spec.I, spec.J,
                              std::span<const std::int64_t>(x));
}

std::vector<MarginalTable> decompose_fiber(const ConditionalSpec& spec, Positivity positivity,
                                           std::uint64_t cap) {
    const DiophEq eq = build_equation(spec);
    const auto scale = cell_scales(spec, eq);
    std::vector<MarginalTable> out;
    const bool complete =
        detail::stream_solutions(eq, positivity, [&](std::span<const std::int64_t> x) {
            if ((std::uint64_t)out.size() >= cap) return false;
            out.push_back(margin_from_scales(scale, spec.I, spec.J, x));
            return true;
        });
    if (!complete)
        throw resource_error("decompose_fiber: more than " + std::to_string(cap) + " margins");
    return out;
}

bool fibers_coincide(const ConditionalSpec& spec) {
    const DiophEq eq = build_equation(spec);
    int found = 0;
    detail::stream_solutions(eq, Positivity::Strict, [&](std::span<const std::int64_t>) {
        return ++found < 2;
    });
    return found == 1;
}

BigInt count_given_margin(const MarginalTable& margin, int K) {
    if (K < 1) throw validation_error("count_given_margin: K must be >= 1");
    BigInt acc = 1, f;
    for (std::int64_t s : margin.s) {
        if (s < 0) throw validation_error("count_given_margin: negative margin entry");
        mpz_bin_uiui(f.get_mpz_t(), (unsigned long)(s + K - 1), (unsigned long)(K - 1));
        acc *= f;
    }
    return acc;
}

double count_given_margin_real(std::span<const double> margin_entries, std::int64_t K) {
    double acc = 1.0;
    for (double s : margin_entries) {
        if (s < 0.0) throw validation_error("count_given_margin_real: negative margin entry");
        acc *= real_binomial(s, K);
    }
    return acc;
}

FiberCount count_fiber(const ConditionalSpec& spec, Positivity positivity,
                       const CountOptions& options) {
    const DiophEq eq = build_equation(spec);
    const auto scale = cell_scales(spec, eq);
    const MarginCounter counter{scale, spec.I, spec.J, (unsigned)(spec.K - 1)};

    FiberCount result;
    const BigInt margin_count = count_solutions(eq, positivity);
    const bool collect = margin_count <= (long)std::min<std::uint64_t>(
                                             options.per_margin_limit,
                                             (std::uint64_t)std::numeric_limits<long>::max());
    result.per_margin_complete = collect;

    struct Chunk {
        BigAccumulator acc;
        std::vector<std::pair<MarginalTable, BigInt>> margins;
    };

    auto run_chunk = [&](Chunk& chunk, std::int64_t first_lo, std::int64_t first_hi) {
        detail::stream_solutions(
            eq, positivity,
            [&](std::span<const std::int64_t> x) {
                u128 small;
                BigInt big;
                const bool fits = counter.count_u128(x, small);
                if (fits)
                    chunk.acc.add(small);
                else {
                    big = counter.count_big(x);
                    chunk.acc.add(big);
                }
                if (collect)
                    chunk.margins.emplace_back(margin_from_scales(scale, spec.I, spec.J, x),
                                               fits ? u128_to_big(small) : big);
                return true;
            },
            first_lo, first_hi);
    };

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1 || spec.J < 2) {
        Chunk chunk;
        run_chunk(chunk, -1, -1);
        result.total = chunk.acc.take();
        result.per_margin = std::move(chunk.margins);
        return result;
    }

    // contiguous first-coordinate ranges keep chunk outputs in lex order
    const std::int64_t lo = positivity == Positivity::Strict ? 1 : 0;
    std::int64_t tail = 0;
    for (int j = 1; j < spec.J; ++j) tail += eq.coeffs[(std::size_t)j] * lo;
    const std::int64_t hi = (eq.rhs - tail) / eq.coeffs[0];
    std::vector<Chunk> chunks((std::size_t)jobs);
    std::vector<std::thread> threads;
    threads.reserve((std::size_t)jobs);
    const std::int64_t span_len = hi - lo + 1;
    for (int t = 0; t < jobs; ++t) {
        const std::int64_t a = lo + span_len * t / jobs;
        const std::int64_t b = lo + span_len * (t + 1) / jobs - 1;
        threads.emplace_back([&, a, b, t] { run_chunk(chunks[(std::size_t)t], a, b); });
    }
    for (auto& th : threads) th.join();
    for (auto& chunk : chunks) {
        result.total += chunk.acc.take();
        for (auto& pm : chunk.margins) result.per_margin.push_back(std::move(pm));
    }
    return result;
}

double approx_count_fiber(const ConditionalSpec& spec) {
    const DiophEq eq = build_equation(spec);
    const int J = spec.J;
    if (J > 3) throw unsupported_error("approx_count_fiber: only J <= 3 is supported");
    const auto scale = cell_scales(spec, eq);
    const double prefactor =
        gcd_many(std::span<const std::int64_t>(eq.coeffs)).get_d() / (double)eq.coeffs.back();

    const auto integrand = [&](const double* x) {
        double acc = 1.0;
        for (int i = 0; i < spec.I; ++i)
            for (int j = 0; j < J; ++j) {
                const double s =
                    (double)scale[(std::size_t)i * (std::size_t)J + (std::size_t)j] * x[j];
                acc *= real_binomial(std::max(0.0, s), spec.K);
            }
        return acc;
    };

    if (J == 1) {
        const double x0 = (double)eq.rhs / (double)eq.coeffs[0];
        return prefactor * integrand(&x0);
    }

    // the integrand is a polynomial of total degree I*J*(K-1); one iterated
    // integration raises the degree by at most one per level
    const int degree = spec.I * J * (spec.K - 1) + (J - 2);
    const auto [nodes, weights] = gauss_legendre(degree / 2 + 2);
    const double N = (double)eq.rhs;
    const double m1 = (double)eq.coeffs[0];

    if (J == 2) {
        const double hi = N / m1;
        double sum = 0.0;
        for (std::size_t a = 0; a < nodes.size(); ++a) {
            double x[2];
            x[0] = 0.5 * hi * (nodes[a] + 1.0);
            x[1] = (N - m1 * x[0]) / (double)eq.coeffs[1];
            sum += weights[a] * integrand(x);
        }
        return prefactor * 0.5 * hi * sum;
    }

    const double m2 = (double)eq.coeffs[1];
    const double hi2 = N / m2;
    double outer = 0.0;
    for (std::size_t b = 0; b < nodes.size(); ++b) {
        double x[3];
        x[1] = 0.5 * hi2 * (nodes[b] + 1.0);
        const double hi1 = (N - m2 * x[1]) / m1;
        double inner = 0.0;
        for (std::size_t a = 0; a < nodes.size(); ++a) {
            x[0] = 0.5 * hi1 * (nodes[a] + 1.0);
            x[2] = (N - m1 * x[0] - m2 * x[1]) / (double)eq.coeffs[2];
            inner += weights[a] * integrand(x);
        }
        outer += weights[b] * 0.5 * hi1 * inner;
    }
    return prefactor * 0.5 * hi2 * outer;
}

namespace {

// odometer over cells in (i, j) order; each cell runs through the ascending
// lex compositions of its margin entry into K parts
bool emit_tables_for_margin(const MarginalTable& margin, int K, Table3& table,
                            const std::function<bool(const Table3&)>& emit) {
    const int cells = margin.I * margin.J;
    std::function<bool(int)> cell_rec = [&](int ci) -> bool {
        if (ci == cells) return emit(table);
        const std::int64_t target = margin.s[(std::size_t)ci];
        std::int64_t* parts = table.s.data() + (std::size_t)ci * (std::size_t)K;
        std::function<bool(int, std::int64_t)> comp_rec = [&](int k, std::int64_t rem) -> bool {
            if (k == K - 1) {
                parts[k] = rem;
                return cell_rec(ci + 1);
            }
            for (std::int64_t v = 0; v <= rem; ++v) {
                parts[k] = v;
                if (!comp_rec(k + 1, rem - v)) return false;
            }
            return true;
        };
        return comp_rec(0, target);
    };
    return cell_rec(0);
}

} // namespace

void for_each_table(const ConditionalSpec& spec, std::uint64_t cap,
                    const std::function<bool(const Table3&)>& emit, Positivity positivity) {
    const FiberCount fc = count_fiber(spec, positivity, {.jobs = 1, .per_margin_limit = 0});
    if (fc.total > (long)std::min<std::uint64_t>(cap, (std::uint64_t)std::numeric_limits<long>::max()))
        throw resource_error("enumerate_fiber: fiber holds " + fc.total.get_str() +
                                 " tables, above the cap of " + std::to_string(cap),
                             fc.total.get_str());

    Table3 table;
    table.I = spec.I;
    table.J = spec.J;
    table.K = spec.K;
    table.s.assign((std::size_t)spec.I * (std::size_t)spec.J * (std::size_t)spec.K, 0);

    const DiophEq eq = build_equation(spec);
    const auto scale = cell_scales(spec, eq);
    detail::stream_solutions(eq, positivity, [&](std::span<const std::int64_t> x) {
        const MarginalTable margin = margin_from_scales(scale, spec.I, spec.J, x);
        return emit_tables_for_margin(margin, spec.K, table, emit);
    });
}

std::vector<Table3> enumerate_fiber(const ConditionalSpec& spec, std::uint64_t cap,
                                    Positivity positivity) {
    std::vector<Table3> out;
    for_each_table(
        spec, cap,
        [&](const Table3& t) {
            out.push_back(t);
            return true;
        },
        positivity);
    return out;
}

BigInt count_fiber_two_margins(const MarginalTable& ab, const MarginalTable& ac,
                               std::uint64_t work_cap) {
    if (ab.I != ac.I) throw validation_error("two margins: shared variable level counts differ");
    for (std::int64_t v : ab.s)
        if (v < 0) throw validation_error("two margins: negative margin entry");
    for (std::int64_t v : ac.s)
        if (v < 0) throw validation_error("two margins: negative margin entry");
    for (int a = 0; a < ab.I; ++a) {
        std::int64_t ra = 0, ca = 0;
        for (int b = 0; b < ab.J; ++b) ra += ab.at(a, b);
        for (int c = 0; c < ac.J; ++c) ca += ac.at(a, c);
        if (ra != ca)
            throw validation_error("two margins: incompatible shared-variable totals in slice " +
                                   std::to_string(a + 1));
    }

    std::uint64_t work = 0;
    const auto bump = [&] {
        if (++work > work_cap) throw resource_error("two margins: slice enumeration too large");
    };

    const int JB = ab.J, KC = ac.J;
    BigInt total = 1;
    std::vector<std::int64_t> budget((std::size_t)KC);
    for (int a = 0; a < ab.I; ++a) {
        for (int c = 0; c < KC; ++c) budget[(std::size_t)c] = ac.at(a, c);
        std::uint64_t slice_count = 0;
        // fill rows 0..JB-2 freely within column budgets; the last row is forced
        std::function<void(int)> row_rec = [&](int r) {
            if (r == JB - 1) {
                std::int64_t rem = 0;
                for (std::int64_t v : budget) rem += v;
                if (rem == ab.at(a, r)) ++slice_count;
                return;
            }
            std::function<void(int, std::int64_t)> comp_rec = [&](int c, std::int64_t rem) {
                bump();
                if (c == KC - 1) {
                    if (rem <= budget[(std::size_t)c]) {
                        budget[(std::size_t)c] -= rem;
                        row_rec(r + 1);
                        budget[(std::size_t)c] += rem;
                    }
                    return;
                }
                const std::int64_t top = std::min(rem, budget[(std::size_t)c]);
                for (std::int64_t v = 0; v <= top; ++v) {
                    budget[(std::size_t)c] -= v;
                    comp_rec(c + 1, rem - v);
                    budget[(std::size_t)c] += v;
                }
            };
            comp_rec(0, ab.at(a, r));
        };
        if (JB == 1) {
            // single row: forced composition equal to the budgets
            slice_count = 1;
        } else {
            row_rec(0);
        }
        total *= (unsigned long)slice_count;
    }
    return total;
}

} // namespace condtab
