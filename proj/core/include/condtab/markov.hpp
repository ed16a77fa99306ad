#pragma once

#include <cstdint>
#include <vector>

#include "condtab/types.hpp"

namespace condtab {

enum class MoveTag { FixesMargin, ChangesMargin };

// An integer table delta in the kernel of the constraint system: it keeps
// the grand total and every conditional ratio unchanged.
struct TableMove {
    int I = 0, J = 0, K = 1;
    std::vector<std::int64_t> delta; // index (i*J + j)*K + k, like Table3
    MoveTag tag = MoveTag::FixesMargin;

    std::int64_t at(int i, int j, int k) const {
        return delta[((std::size_t)i * (std::size_t)J + (std::size_t)j) * (std::size_t)K + (std::size_t)k];
    }
    std::vector<std::int64_t> flatten_kji() const;
};

struct MoveSet {
    std::vector<TableMove> moves;

    int count(MoveTag tag) const;
};

// The I*J*(K-1) moves +1 at (i,j,1) / -1 at (i,j,k); they never touch the
// margin. Empty for K = 1.
MoveSet basic_moves(const ConditionalSpec& spec);

// One move per kernel basis vector v: delta m_j * v_j * c_ij placed in the
// first C level. J-1 moves; all entries are exact integers.
MoveSet margin_change_moves(const ConditionalSpec& spec);

// Margin-changing moves followed by the basic moves.
MoveSet candidate_basis(const ConditionalSpec& spec);

struct ConnectivityReport {
    std::uint64_t fiber_size = 0;
    int component_count = 0;
    std::vector<std::uint64_t> component_sizes; // in discovery order
};

// Exhaustive check of the Markov property: BFS over the enumerated fiber
// along +/- each move, staying inside the fiber at every step.
ConnectivityReport verify_connectivity(const ConditionalSpec& spec, const MoveSet& moves,
                                       std::uint64_t cap,
                                       Positivity positivity = Positivity::Strict);

// Evidence for the conjectured move-set sizes: candidate versus the
// conjectured (J-1) + I*J*(K-1), and whether the candidate connects the
// fiber. Connectivity is reported, never presumed; the size conjecture is
// scoped to small conditionals (K >= 2).
struct ConjectureReport {
    int conjectured_size = 0;
    int candidate_size = 0;
    bool small_conditional = true;
    bool connected = false;
    ConnectivityReport connectivity;
};

ConjectureReport conjecture_check(const ConditionalSpec& spec, std::uint64_t cap);

} // namespace condtab
