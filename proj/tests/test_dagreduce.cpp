#include <doctest.h>

#include "condtab/dagreduce.hpp"
#include "condtab/errors.hpp"
#include "condtab/tablespace.hpp"
#include "support.hpp"

using namespace condtab;
using namespace condtab::testing;

namespace {

EvidencePiece conditional(std::string of, std::string given, std::vector<Rational> values) {
    EvidencePiece p;
    p.kind = EvidencePiece::Kind::Conditional;
    p.of = {std::move(of)};
    p.given = {std::move(given)};
    p.values = std::move(values);
    return p;
}

EvidencePiece marginal(std::string of, std::vector<Rational> values) {
    EvidencePiece p;
    p.kind = EvidencePiece::Kind::Marginal;
    p.of = {std::move(of)};
    p.values = std::move(values);
    return p;
}

// the shared-conditioning evidence {P(B|A), P(C|A)} over A(3) x B(2) x C(2)
EvidenceSet star_evidence(std::int64_t N, bool with_marginal) {
    EvidenceSet ev;
    ev.variables = {"A", "B", "C"};
    ev.levels = {3, 2, 2};
    ev.N = N;
    ev.pieces.push_back(conditional(
        "B", "A", {rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 2), rat(2, 3), rat(3, 4)}));
    ev.pieces.push_back(conditional(
        "C", "A", {rat(1, 3), rat(1, 3), rat(1, 4), rat(2, 3), rat(2, 3), rat(3, 4)}));
    if (with_marginal) ev.pieces.push_back(marginal("A", {rat(1, 4), rat(1, 4), rat(1, 2)}));
    return ev;
}

} // namespace

TEST_CASE("build_dag") {
    const DagModel star = build_dag(star_evidence(24, false));
    CHECK(star.nodes == std::vector<std::string>{"A", "B", "C"});
    CHECK(star.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}});

    // two parents pointing at one child
    EvidenceSet collider;
    collider.variables = {"X1", "X2", "X3"};
    collider.levels = {2, 2, 2};
    collider.N = 8;
    EvidencePiece p;
    p.kind = EvidencePiece::Kind::Conditional;
    p.of = {"X3"};
    p.given = {"X2", "X1"};
    p.values = {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)};
    collider.pieces.push_back(p);
    const DagModel dag = build_dag(collider);
    CHECK(dag.has_edge(0, 2)); // X1 -> X3
    CHECK(dag.has_edge(1, 2)); // X2 -> X3
    CHECK_FALSE(dag.has_edge(0, 1));

    EvidenceSet cyclic;
    cyclic.variables = {"A", "B"};
    cyclic.levels = {2, 2};
    cyclic.N = 10;
    cyclic.pieces.push_back(conditional("A", "B", {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)}));
    cyclic.pieces.push_back(conditional("B", "A", {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)}));
    CHECK_THROWS_AS(build_dag(cyclic), validation_error);
}

TEST_CASE("moralize") {
    const DagModel star = build_dag(star_evidence(24, false));
    const UndirectedGraph moral = moralize(star);
    CHECK(moral.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}});

    EvidenceSet collider;
    collider.variables = {"B", "A", "C"};
    collider.levels = {2, 2, 2};
    collider.N = 8;
    EvidencePiece p;
    p.kind = EvidencePiece::Kind::Conditional;
    p.of = {"A"};
    p.given = {"B", "C"};
    p.values = {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)};
    collider.pieces.push_back(p);
    const DagModel dag = build_dag(collider);
    const UndirectedGraph married = moralize(dag);
    // marries the co-parents B and C
    CHECK(married.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});

    EvidenceSet lone;
    lone.variables = {"A"};
    lone.levels = {3};
    lone.N = 9;
    lone.pieces.push_back(marginal("A", {rat(1, 3), rat(1, 3), rat(1, 3)}));
    CHECK(moralize(build_dag(lone)).edges.empty());
}

TEST_CASE("wermuth_check agrees with moralization adding nothing") {
    const DagModel star = build_dag(star_evidence(24, false));
    CHECK(wermuth_check(star));
    CHECK(moralize(star).edges.size() == star.edges.size());

    EvidenceSet collider;
    collider.variables = {"B", "A", "C"};
    collider.levels = {2, 2, 2};
    collider.N = 8;
    EvidencePiece p;
    p.kind = EvidencePiece::Kind::Conditional;
    p.of = {"A"};
    p.given = {"B", "C"};
    p.values = {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)};
    collider.pieces.push_back(p);
    const DagModel dag = build_dag(collider);
    CHECK_FALSE(wermuth_check(dag));
    CHECK(moralize(dag).edges.size() > dag.edges.size());
}

TEST_CASE("reduce_to_margins on the shared-conditioning instance") {
    const ReductionResult r24 = reduce_to_margins(star_evidence(24, false));
    CHECK(r24.reducible);
    REQUIRE(r24.unique_margin.has_value());
    CHECK(*r24.unique_margin == std::vector<std::int64_t>{6, 6, 12});
    CHECK(r24.margins ==
          std::vector<std::vector<std::string>>{{"A", "B"}, {"A", "C"}});

    const ReductionResult r240 = reduce_to_margins(star_evidence(240, false));
    CHECK_FALSE(r240.reducible);
    CHECK(r240.common_margin_count == 361);

    // an explicit marginal piece pins the margin regardless of N
    const ReductionResult pinned = reduce_to_margins(star_evidence(240, true));
    CHECK(pinned.reducible);
    REQUIRE(pinned.unique_margin.has_value());
    CHECK(*pinned.unique_margin == std::vector<std::int64_t>{60, 60, 120});

    // margins-only evidence reduces to itself
    EvidenceSet margins_only;
    margins_only.variables = {"A", "B"};
    margins_only.levels = {2, 2};
    margins_only.N = 12;
    EvidencePiece m;
    m.kind = EvidencePiece::Kind::Marginal;
    m.of = {"A", "B"};
    m.values = {rat(1, 6), rat(1, 3), rat(1, 4), rat(1, 4)};
    margins_only.pieces.push_back(m);
    const ReductionResult rm = reduce_to_margins(margins_only);
    CHECK(rm.reducible);
    CHECK(rm.margins == std::vector<std::vector<std::string>>{{"A", "B"}});
}

TEST_CASE("compare_fibers on the shared-conditioning instance") {
    const FiberComparison c24 = compare_fibers(star_evidence(24, false));
    CHECK(c24.fiber_given_evidence == 36);
    REQUIRE(c24.fiber_given_margins.has_value());
    CHECK(*c24.fiber_given_margins == 36);
    CHECK(c24.equal);
    CHECK(c24.common_margin_count == 1);

    const FiberComparison c240 = compare_fibers(star_evidence(240, true));
    CHECK(c240.fiber_given_evidence == 3066315);
    REQUIRE(c240.fiber_given_margins.has_value());
    CHECK(*c240.fiber_given_margins == 13671);
    CHECK_FALSE(c240.equal);
    CHECK(c240.common_margin_count == 361);
    REQUIRE(c240.reference_margin.has_value());
    CHECK(*c240.reference_margin == std::vector<std::int64_t>{60, 60, 120});
}

TEST_CASE("reducible evidence yields equal fiber sizes") {
    for (std::int64_t N : {12, 24, 36, 48}) {
        const EvidenceSet ev = star_evidence(N, false);
        const ReductionResult red = reduce_to_margins(ev);
        if (!red.reducible) continue;
        const FiberComparison cmp = compare_fibers(ev);
        CHECK(cmp.equal);
    }
}

TEST_CASE("single-conditional evidence matches tablespace counts") {
    EvidenceSet ev;
    ev.variables = {"A", "B", "C"};
    ev.levels = {2, 3, 2};
    ev.N = 24;
    ev.pieces.push_back(conditional(
        "A", "B", {rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 2), rat(2, 3), rat(3, 4)}));
    const FiberComparison cmp = compare_fibers(ev);
    CHECK(cmp.fiber_given_evidence == count_fiber(spec_2x3x2(24), Positivity::Strict).total);
    CHECK(cmp.common_margin_count == 7);
    CHECK_FALSE(cmp.fiber_given_margins.has_value()); // no unique margin, none given
}

TEST_CASE("pure marginal evidence compares equal trivially") {
    EvidenceSet ev;
    ev.variables = {"A", "B", "C"};
    ev.levels = {2, 2, 2};
    ev.N = 50;
    EvidencePiece m;
    m.kind = EvidencePiece::Kind::Marginal;
    m.of = {"A", "B"};
    m.values = {rat(15, 50), rat(5, 50), rat(10, 50), rat(20, 50)};
    ev.pieces.push_back(m);
    const FiberComparison cmp = compare_fibers(ev);
    CHECK(cmp.equal);
    CHECK(cmp.fiber_given_evidence == 22176); // 16 * 11 * 6 * 21
}
