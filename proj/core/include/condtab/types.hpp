#pragma once

#include <cstdint>
#include <vector>

#include "condtab/exactnum.hpp"

namespace condtab {

// Which solutions / conditioning margins are admitted.
// Strict keeps every conditioning-column margin positive (the default reading
// of the constraint system); NonNegative also admits empty columns.
enum class Positivity { Strict, NonNegative };

// A problem instance: an I x J grid of exact conditional frequencies
// P(A = i | B = j), the level count K of the marginalized-out block C,
// and the grand total N. Full conditionals are the K = 1 case.
struct ConditionalSpec {
    int I = 0;
    int J = 0;
    int K = 1;
    std::int64_t N = 0;
    std::vector<Rational> c; // I x J, row-major

    const Rational& at(int i, int j) const { return c[(std::size_t)i * (std::size_t)J + (std::size_t)j]; }
    Rational& at(int i, int j) { return c[(std::size_t)i * (std::size_t)J + (std::size_t)j]; }

    // Throws validation_error unless every column sums to exactly 1,
    // all entries are nonnegative, and I,J,K,N are in range.
    void validate() const;
};

// An I x J grid of integer margins s_{ij+} (the 3-way table summed over C).
struct MarginalTable {
    int I = 0;
    int J = 0;
    std::vector<std::int64_t> s; // row-major

    std::int64_t at(int i, int j) const { return s[(std::size_t)i * (std::size_t)J + (std::size_t)j]; }
    std::int64_t& at(int i, int j) { return s[(std::size_t)i * (std::size_t)J + (std::size_t)j]; }

    std::int64_t column_sum(int j) const;
    std::int64_t total() const;

    bool operator==(const MarginalTable& o) const { return I == o.I && J == o.J && s == o.s; }
};

// A full I x J x K table of counts.
struct Table3 {
    int I = 0;
    int J = 0;
    int K = 1;
    std::vector<std::int64_t> s; // index (i*J + j)*K + k

    std::int64_t at(int i, int j, int k) const {
        return s[((std::size_t)i * (std::size_t)J + (std::size_t)j) * (std::size_t)K + (std::size_t)k];
    }
    std::int64_t& at(int i, int j, int k) {
        return s[((std::size_t)i * (std::size_t)J + (std::size_t)j) * (std::size_t)K + (std::size_t)k];
    }

    MarginalTable margin() const;

    // Serialization order used throughout (and by the wire formats):
    // k slowest, then j, then i fastest.
    std::vector<std::int64_t> flatten_kji() const;

    bool operator==(const Table3& o) const {
        return I == o.I && J == o.J && K == o.K && s == o.s;
    }
};

} // namespace condtab
