#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "condtab/exactnum.hpp"
#include "condtab/types.hpp"

namespace condtab {

// One released statistic: a conditional P(of | given) or a marginal P(of).
struct EvidencePiece {
    enum class Kind { Conditional, Marginal };
    Kind kind = Kind::Conditional;
    std::vector<std::string> of;
    std::vector<std::string> given;  // empty for marginals
    std::vector<Rational> values;    // row-major: of-combinations x given-combinations
};

// Declared variable universe plus the released pieces. Compatibility of the
// pieces with one joint distribution is assumed, not checked.
struct EvidenceSet {
    std::vector<std::string> variables; // declaration order is the canonical order
    std::vector<int> levels;            // parallel to variables
    std::int64_t N = 0;
    std::vector<EvidencePiece> pieces;

    int var_index(const std::string& name) const; // -1 when unknown
    void validate() const;
};

struct DagModel {
    std::vector<std::string> nodes;
    std::vector<std::pair<int, int>> edges; // parent -> child, sorted, unique

    bool has_edge(int parent, int child) const;
    bool adjacent(int a, int b) const; // either direction
};

struct UndirectedGraph {
    std::vector<std::string> nodes;
    std::vector<std::pair<int, int>> edges; // a < b, sorted, unique

    bool adjacent(int a, int b) const;
    std::vector<std::vector<int>> maximal_cliques() const; // each sorted; list sorted
};

// DAG induced by the evidence: each conditional contributes given -> of
// edges, each marginal a clique over its set (oriented by declaration
// order). Throws validation_error on self-loops or cycles.
DagModel build_dag(const EvidenceSet& evidence);

// Undirected skeleton plus marriages between co-parents.
UndirectedGraph moralize(const DagModel& dag);

// True iff no child has a pair of non-adjacent parents, i.e. moralization
// adds no edge.
bool wermuth_check(const DagModel& dag);

struct ReductionResult {
    bool reducible = false;
    std::string reason;                            // why not, when not reducible
    std::vector<std::vector<std::string>> margins; // moral-graph cliques, when reducible
    std::uint64_t common_margin_count = 0;
    std::optional<std::vector<std::int64_t>> unique_margin; // over the shared conditioning variable
};

// Decides whether the evidence constrains tables exactly like a set of
// marginals: the Wermuth condition must hold and the shared conditioning
// margin must be uniquely determined (an explicit marginal piece, or a
// one-vector intersection of the induced solution sets).
ReductionResult reduce_to_margins(const EvidenceSet& evidence, std::uint64_t cap = 10'000'000);

struct FiberComparison {
    BigInt fiber_given_evidence = 0;
    std::optional<BigInt> fiber_given_margins; // for the reference margin, when one exists
    bool equal = false;
    std::optional<std::vector<std::int64_t>> reference_margin;
    std::uint64_t common_margin_count = 0;
};

// Sizes of the evidence fiber versus the fiber of the corresponding
// margins. The reference margin comes from an explicit marginal piece when
// present, otherwise from a unique intersection.
FiberComparison compare_fibers(const EvidenceSet& evidence, std::uint64_t cap = 10'000'000);

} // namespace condtab
