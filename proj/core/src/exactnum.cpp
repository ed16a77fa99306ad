#include "condtab/exactnum.hpp"

#include <cmath>

namespace condtab {

Rational::Rational(const BigInt& num, const BigInt& den) : q_(num, den) {
    if (den == 0) throw validation_error("Rational: zero denominator");
    q_.canonicalize();
}

Rational::Rational(long num, long den) : q_(num, den) {
    if (den == 0) throw validation_error("Rational: zero denominator");
    q_.canonicalize();
}

Rational Rational::parse(const std::string& text) {
    if (text.empty()) throw validation_error("Rational: empty string");
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw validation_error("Rational: cannot parse '" + text + "'");
    if (q.get_den() == 0) throw validation_error("Rational: zero denominator in '" + text + "'");
    q.canonicalize();
    return Rational(std::move(q));
}

Rational Rational::operator/(const Rational& o) const {
    if (o.is_zero()) throw validation_error("Rational: division by zero");
    return Rational(mpq_class(q_ / o.q_));
}

namespace {

template <class Get>
BigInt fold_gcd(std::size_t n, Get get) {
    if (n == 0) throw validation_error("gcd_many: empty list");
    BigInt g = 0;
    for (std::size_t i = 0; i < n; ++i) {
        BigInt v = get(i);
        if (v < 1) throw validation_error("gcd_many: values must be positive");
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    return g;
}

template <class Get>
BigInt fold_lcm(std::size_t n, Get get) {
    if (n == 0) throw validation_error("lcm_many: empty list");
    BigInt l = 1;
    for (std::size_t i = 0; i < n; ++i) {
        BigInt v = get(i);
        if (v < 1) throw validation_error("lcm_many: values must be positive");
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_mpz_t());
    }
    return l;
}

} // namespace

BigInt gcd_many(std::span<const std::int64_t> values) {
    return fold_gcd(values.size(), [&](std::size_t i) { return BigInt((long)values[i]); });
}

BigInt gcd_many(const std::vector<BigInt>& values) {
    return fold_gcd(values.size(), [&](std::size_t i) { return values[i]; });
}

BigInt lcm_many(std::span<const std::int64_t> values) {
    return fold_lcm(values.size(), [&](std::size_t i) { return BigInt((long)values[i]); });
}

BigInt lcm_many(const std::vector<BigInt>& values) {
    return fold_lcm(values.size(), [&](std::size_t i) { return values[i]; });
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

double real_binomial(double s, std::int64_t K) {
    if (!(s >= 0.0)) throw validation_error("real_binomial: s must be nonnegative");
    if (K < 1) throw validation_error("real_binomial: K must be positive");
    double ip;
    if (std::modf(s, &ip) == 0.0 && s <= 1e15) {
        // integral s: delegate to the exact count
        return binomial((std::uint64_t)ip + (std::uint64_t)K - 1, (std::uint64_t)K - 1).get_d();
    }
    return std::exp(std::lgamma(s + (double)K) - std::lgamma((double)K) - std::lgamma(s + 1.0));
}

} // namespace condtab
