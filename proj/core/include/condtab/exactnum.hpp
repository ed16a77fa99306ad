#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "condtab/errors.hpp"

namespace condtab {

// Arbitrary-precision signed integer. All counts in this library are exact;
// nothing ever wraps or saturates.
using BigInt = mpz_class;

// Exact fraction, always stored reduced with a positive denominator.
class Rational {
public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}                       // NOLINT(google-explicit-constructor)
    Rational(const BigInt& n) : q_(n) {}              // NOLINT(google-explicit-constructor)
    Rational(const BigInt& num, const BigInt& den);
    Rational(long num, long den);

    static Rational parse(const std::string& text);   // "g/h" or "g"

    BigInt num() const { return BigInt(q_.get_num()); }
    BigInt den() const { return BigInt(q_.get_den()); }

    bool is_zero() const { return q_ == 0; }
    bool is_negative() const { return q_ < 0; }
    bool is_integer() const { return q_.get_den() == 1; }

    double to_double() const { return q_.get_d(); }
    std::string str() const { return q_.get_str(); }  // reduced "g/h", or "g" when h = 1

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational operator+(const Rational& o) const { return Rational(mpq_class(q_ + o.q_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(q_ - o.q_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(q_ * o.q_)); }
    Rational operator/(const Rational& o) const;

    bool operator==(const Rational& o) const { return q_ == o.q_; }
    bool operator!=(const Rational& o) const { return q_ != o.q_; }
    bool operator<(const Rational& o) const { return q_ < o.q_; }
    bool operator<=(const Rational& o) const { return q_ <= o.q_; }
    bool operator>(const Rational& o) const { return q_ > o.q_; }
    bool operator>=(const Rational& o) const { return q_ >= o.q_; }

private:
    explicit Rational(mpq_class q) : q_(std::move(q)) {}
    mpq_class q_;
};

// gcd of a non-empty list of positive integers.
BigInt gcd_many(std::span<const std::int64_t> values);
BigInt gcd_many(const std::vector<BigInt>& values);

// lcm of a non-empty list of positive integers.
BigInt lcm_many(std::span<const std::int64_t> values);
BigInt lcm_many(const std::vector<BigInt>& values);

// Exact binomial coefficient; 0 when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

// Gamma(s+K) / (Gamma(K) * Gamma(s+1)) for real s >= 0 and integer K >= 1.
// Coincides with binomial(s+K-1, K-1) at integer s; integer s short-circuits
// to the exact binomial so the two never drift apart.
double real_binomial(double s, std::int64_t K);

} // namespace condtab
