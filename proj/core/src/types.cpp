#include "condtab/types.hpp"

#include "condtab/errors.hpp"

namespace condtab {

void ConditionalSpec::validate() const {
    if (I < 1 || J < 1 || K < 1) throw validation_error("spec: I, J, K must all be >= 1");
    if (N < 1) throw validation_error("spec: N must be >= 1");
    if (c.size() != (std::size_t)I * (std::size_t)J)
        throw validation_error("spec: conditional grid must have I*J entries");
    for (int j = 0; j < J; ++j) {
        Rational col_sum = 0;
        for (int i = 0; i < I; ++i) {
            const Rational& v = at(i, j);
            if (v.is_negative()) throw validation_error("spec: conditional entries must be >= 0");
            col_sum = col_sum + v;
        }
        if (col_sum != Rational(1))
            throw validation_error("spec: column " + std::to_string(j + 1) +
                                   " of the conditional grid sums to " + col_sum.str() +
                                   ", expected 1");
    }
}

std::int64_t MarginalTable::column_sum(int j) const {
    std::int64_t t = 0;
    for (int i = 0; i < I; ++i) t += at(i, j);
    return t;
}

std::int64_t MarginalTable::total() const {
    std::int64_t t = 0;
    for (std::int64_t v : s) t += v;
    return t;
}

MarginalTable Table3::margin() const {
    MarginalTable m;
    m.I = I;
    m.J = J;
    m.s.assign((std::size_t)I * (std::size_t)J, 0);
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < K; ++k) m.at(i, j) += at(i, j, k);
    return m;
}

std::vector<std::int64_t> Table3::flatten_kji() const {
    std::vector<std::int64_t> out;
    out.reserve(s.size());
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < J; ++j)
            for (int i = 0; i < I; ++i) out.push_back(at(i, j, k));
    return out;
}

} // namespace condtab
