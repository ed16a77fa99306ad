#include "condtab/dagreduce.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "condtab/diophantine.hpp"
#include "condtab/errors.hpp"
#include "condtab/tablespace.hpp"

namespace condtab {

int EvidenceSet::var_index(const std::string& name) const {
    for (std::size_t t = 0; t < variables.size(); ++t)
        if (variables[t] == name) return (int)t;
    return -1;
}

void EvidenceSet::validate() const {
    if (variables.empty()) throw validation_error("evidence: empty variable universe");
    if (variables.size() != levels.size())
        throw validation_error("evidence: variables and levels out of step");
    for (int l : levels)
        if (l < 1) throw validation_error("evidence: level counts must be >= 1");
    std::set<std::string> names(variables.begin(), variables.end());
    if (names.size() != variables.size())
        throw validation_error("evidence: duplicate variable names");
    if (N < 1) throw validation_error("evidence: N must be >= 1");
    if (pieces.empty()) throw validation_error("evidence: no pieces");

    for (const auto& piece : pieces) {
        if (piece.of.empty()) throw validation_error("evidence: piece with empty target set");
        std::set<std::string> used;
        std::size_t rows = 1, cols = 1;
        for (const auto& v : piece.of) {
            const int t = var_index(v);
            if (t < 0) throw validation_error("evidence: unknown variable '" + v + "'");
            if (!used.insert(v).second)
                throw validation_error("evidence: variable '" + v + "' repeated in a piece");
            rows *= (std::size_t)levels[(std::size_t)t];
        }
        for (const auto& v : piece.given) {
            const int t = var_index(v);
            if (t < 0) throw validation_error("evidence: unknown variable '" + v + "'");
            if (!used.insert(v).second)
                throw validation_error("evidence: variable '" + v + "' repeated in a piece");
            cols *= (std::size_t)levels[(std::size_t)t];
        }
        if (piece.kind == EvidencePiece::Kind::Marginal && !piece.given.empty())
            throw validation_error("evidence: marginal piece with a conditioning set");
        if (piece.values.size() != rows * cols)
            throw validation_error("evidence: piece value grid has wrong size");
        for (std::size_t col = 0; col < cols; ++col) {
            Rational sum = 0;
            for (std::size_t row = 0; row < rows; ++row) {
                const Rational& v = piece.values[row * cols + col];
                if (v.is_negative()) throw validation_error("evidence: negative probability");
                sum = sum + v;
            }
            if (sum != Rational(1))
                throw validation_error("evidence: piece column does not sum to 1");
        }
    }
}

bool DagModel::has_edge(int parent, int child) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(parent, child));
}

bool DagModel::adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }

bool UndirectedGraph::adjacent(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
}

std::vector<std::vector<int>> UndirectedGraph::maximal_cliques() const {
    std::vector<std::vector<int>> out;
    std::vector<int> all((std::size_t)nodes.size());
    for (std::size_t t = 0; t < all.size(); ++t) all[t] = (int)t;

    std::function<void(std::vector<int>, std::vector<int>, std::vector<int>)> grow =
        [&](std::vector<int> r, std::vector<int> p, std::vector<int> x) {
            if (p.empty() && x.empty()) {
                out.push_back(r);
                return;
            }
            while (!p.empty()) {
                const int v = p.front();
                std::vector<int> r2 = r, p2, x2;
                r2.push_back(v);
                for (int u : p)
                    if (u != v && adjacent(u, v)) p2.push_back(u);
                for (int u : x)
                    if (adjacent(u, v)) x2.push_back(u);
                grow(std::move(r2), std::move(p2), std::move(x2));
                p.erase(p.begin());
                x.push_back(v);
            }
        };
    grow({}, all, {});
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

DagModel build_dag(const EvidenceSet& evidence) {
    evidence.validate();
    DagModel dag;
    dag.nodes = evidence.variables;
    std::set<std::pair<int, int>> edges;
    for (const auto& piece : evidence.pieces) {
        if (piece.kind == EvidencePiece::Kind::Conditional) {
            for (const auto& g : piece.given)
                for (const auto& o : piece.of)
                    edges.insert({evidence.var_index(g), evidence.var_index(o)});
        } else {
            // a marginal makes its set a clique, oriented by declaration order
            for (std::size_t a = 0; a + 1 < piece.of.size(); ++a)
                for (std::size_t b = a + 1; b < piece.of.size(); ++b)
                    edges.insert({evidence.var_index(piece.of[a]), evidence.var_index(piece.of[b])});
        }
    }
    dag.edges.assign(edges.begin(), edges.end());

    // Kahn's algorithm; leftovers mean a cycle
    std::vector<int> indeg(dag.nodes.size(), 0);
    for (const auto& e : dag.edges) ++indeg[(std::size_t)e.second];
    std::vector<int> ready;
    for (std::size_t t = 0; t < indeg.size(); ++t)
        if (indeg[t] == 0) ready.push_back((int)t);
    std::size_t seen = 0;
    while (!ready.empty()) {
        const int v = ready.back();
        ready.pop_back();
        ++seen;
        for (const auto& e : dag.edges)
            if (e.first == v && --indeg[(std::size_t)e.second] == 0) ready.push_back(e.second);
    }
    if (seen != dag.nodes.size())
        throw validation_error("evidence: the pieces induce a directed cycle, no DAG exists");
    return dag;
}

UndirectedGraph moralize(const DagModel& dag) {
    UndirectedGraph g;
    g.nodes = dag.nodes;
    std::set<std::pair<int, int>> edges;
    const auto add = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        edges.insert({a, b});
    };
    for (const auto& e : dag.edges) add(e.first, e.second);
    for (int child = 0; child < (int)dag.nodes.size(); ++child) {
        std::vector<int> parents;
        for (const auto& e : dag.edges)
            if (e.second == child) parents.push_back(e.first);
        for (std::size_t a = 0; a + 1 < parents.size(); ++a)
            for (std::size_t b = a + 1; b < parents.size(); ++b) add(parents[a], parents[b]);
    }
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

bool wermuth_check(const DagModel& dag) {
    for (int child = 0; child < (int)dag.nodes.size(); ++child) {
        std::vector<int> parents;
        for (const auto& e : dag.edges)
            if (e.second == child) parents.push_back(e.first);
        for (std::size_t a = 0; a + 1 < parents.size(); ++a)
            for (std::size_t b = a + 1; b < parents.size(); ++b)
                if (!dag.adjacent(parents[a], parents[b])) return false;
    }
    return true;
}

namespace {

std::size_t levels_product(const EvidenceSet& ev, const std::set<std::string>& exclude) {
    std::size_t k = 1;
    for (std::size_t t = 0; t < ev.variables.size(); ++t)
        if (!exclude.count(ev.variables[t])) k *= (std::size_t)ev.levels[t];
    return k;
}

// ConditionalSpec for a single-target, single-given conditional piece;
// everything else in the universe becomes the marginalized-out block.
ConditionalSpec spec_for_conditional(const EvidenceSet& ev, const EvidencePiece& piece) {
    if (piece.of.size() != 1 || piece.given.size() != 1)
        throw unsupported_error("evidence: only single-variable conditionals are supported here");
    ConditionalSpec spec;
    spec.I = ev.levels[(std::size_t)ev.var_index(piece.of[0])];
    spec.J = ev.levels[(std::size_t)ev.var_index(piece.given[0])];
    spec.K = (int)levels_product(ev, {piece.of[0], piece.given[0]});
    spec.N = ev.N;
    spec.c = piece.values;
    spec.validate();
    return spec;
}

std::vector<const EvidencePiece*> conditional_pieces(const EvidenceSet& ev) {
    std::vector<const EvidencePiece*> out;
    for (const auto& p : ev.pieces)
        if (p.kind == EvidencePiece::Kind::Conditional) out.push_back(&p);
    return out;
}

// Shared single conditioning variable of all conditional pieces.
std::string shared_given(const std::vector<const EvidencePiece*>& conds) {
    std::string v;
    for (const auto* p : conds) {
        if (p->of.size() != 1 || p->given.size() != 1)
            throw unsupported_error(
                "evidence: only single-variable conditionals over one shared conditioning "
                "variable are supported");
        if (v.empty())
            v = p->given[0];
        else if (v != p->given[0])
            throw unsupported_error("evidence: conditionals condition on different variables");
    }
    return v;
}

// Margin vector over variable v from an explicit marginal piece, when present.
std::optional<std::vector<std::int64_t>> margin_from_piece(const EvidenceSet& ev,
                                                           const std::string& v) {
    for (const auto& p : ev.pieces) {
        if (p.kind != EvidencePiece::Kind::Marginal) continue;
        if (p.of.size() != 1 || p.of[0] != v) continue;
        std::vector<std::int64_t> s;
        s.reserve(p.values.size());
        for (const Rational& prob : p.values) {
            const Rational scaled = prob * Rational((long)ev.N);
            if (!scaled.is_integer())
                throw validation_error("evidence: marginal of '" + v +
                                       "' does not scale to integer counts at N");
            BigInt b = scaled.num();
            if (!b.fits_slong_p()) throw resource_error("evidence: margin entry out of range");
            s.push_back(b.get_si());
        }
        return s;
    }
    return std::nullopt;
}

// The 2-way margin grid (levels(v) rows) implied by a conditional piece and
// a margin vector over its conditioning variable.
MarginalTable grid_from_margin(const ConditionalSpec& spec, const std::vector<std::int64_t>& s) {
    if ((int)s.size() != spec.J)
        throw validation_error("evidence: margin vector length does not match the conditional");
    MarginalTable grid;
    grid.I = spec.J; // rows = shared conditioning variable
    grid.J = spec.I;
    grid.s.resize((std::size_t)spec.I * (std::size_t)spec.J);
    for (int a = 0; a < spec.J; ++a)
        for (int b = 0; b < spec.I; ++b) {
            const Rational& c = spec.at(b, a);
            const Rational cell = Rational((long)s[(std::size_t)a]) * c;
            if (!cell.is_integer())
                throw validation_error("evidence: margin vector is not divisible as required");
            BigInt big = cell.num();
            if (!big.fits_slong_p()) throw resource_error("evidence: margin cell out of range");
            grid.at(a, b) = big.get_si();
        }
    return grid;
}

} // namespace

ReductionResult reduce_to_margins(const EvidenceSet& evidence, std::uint64_t cap) {
    const DagModel dag = build_dag(evidence);
    ReductionResult result;
    const auto moral_cliques = [&] {
        std::vector<std::vector<std::string>> named;
        for (const auto& clique : moralize(dag).maximal_cliques()) {
            std::vector<std::string> names;
            names.reserve(clique.size());
            for (int t : clique) names.push_back(evidence.variables[(std::size_t)t]);
            named.push_back(std::move(names));
        }
        return named;
    };

    if (!wermuth_check(dag)) {
        result.reason = "the DAG violates the Wermuth condition";
        return result;
    }

    const auto conds = conditional_pieces(evidence);
    if (conds.empty()) {
        result.reducible = true;
        result.margins = moral_cliques();
        result.common_margin_count = 1;
        return result;
    }

    const std::string v = shared_given(conds);
    if (auto fixed = margin_from_piece(evidence, v)) {
        result.reducible = true;
        result.margins = moral_cliques();
        result.common_margin_count = 1;
        result.unique_margin = std::move(*fixed);
        return result;
    }

    std::vector<ConditionalSpec> specs;
    specs.reserve(conds.size());
    for (const auto* p : conds) specs.push_back(spec_for_conditional(evidence, *p));
    const auto common = intersect_margins(specs, cap);
    result.common_margin_count = common.size();
    if (common.size() == 1) {
        result.reducible = true;
        result.margins = moral_cliques();
        result.unique_margin = common[0];
    } else if (common.empty()) {
        result.reason = "no conditioning margin is consistent with every conditional";
    } else {
        result.reason = "the conditioning margin is not uniquely determined (" +
                        std::to_string(common.size()) + " candidates)";
    }
    return result;
}

FiberComparison compare_fibers(const EvidenceSet& evidence, std::uint64_t cap) {
    evidence.validate();
    FiberComparison cmp;
    const auto conds = conditional_pieces(evidence);

    if (conds.empty()) {
        // margins only: the two fibers are the same object
        std::vector<const EvidencePiece*> margs;
        for (const auto& p : evidence.pieces) margs.push_back(&p);
        if (margs.size() == 1 && margs[0]->of.size() >= 1) {
            const auto& p = *margs[0];
            std::set<std::string> covered(p.of.begin(), p.of.end());
            const std::size_t K = levels_product(evidence, covered);
            MarginalTable grid;
            grid.I = 1;
            grid.J = (int)p.values.size();
            for (const Rational& prob : p.values) {
                const Rational cell = prob * Rational((long)evidence.N);
                if (!cell.is_integer())
                    throw validation_error("evidence: marginal does not scale to integer counts");
                BigInt big = cell.num();
                if (!big.fits_slong_p()) throw resource_error("evidence: margin cell out of range");
                grid.s.push_back(big.get_si());
            }
            cmp.fiber_given_evidence = count_given_margin(grid, (int)K);
            cmp.fiber_given_margins = cmp.fiber_given_evidence;
            cmp.equal = true;
            cmp.common_margin_count = 1;
            cmp.reference_margin = std::vector<std::int64_t>(grid.s);
            return cmp;
        }
        throw unsupported_error("evidence: unsupported pure-marginal shape for fiber comparison");
    }

    const std::string v = shared_given(conds);
    const auto fixed = margin_from_piece(evidence, v);

    if (conds.size() == 1) {
        const ConditionalSpec spec = spec_for_conditional(evidence, *conds[0]);
        cmp.fiber_given_evidence = count_fiber(spec, Positivity::Strict).total;
        const BigInt margin_count = count_solutions(build_equation(spec), Positivity::Strict);
        cmp.common_margin_count = margin_count.fits_ulong_p() ? margin_count.get_ui() : ~0ull;
        std::optional<std::vector<std::int64_t>> ref = fixed;
        if (!ref && margin_count == 1) {
            const auto margins = intersect_margins(std::span(&spec, 1), cap);
            ref = margins.at(0);
        }
        if (ref) {
            MarginalTable grid = grid_from_margin(spec, *ref);
            cmp.fiber_given_margins = count_given_margin(grid, spec.K);
            cmp.reference_margin = std::move(*ref);
        }
    } else if (conds.size() == 2) {
        const ConditionalSpec spec1 = spec_for_conditional(evidence, *conds[0]);
        const ConditionalSpec spec2 = spec_for_conditional(evidence, *conds[1]);
        // demonstrated shape: the two targets and the shared variable cover
        // the whole universe, so the two 2-way margins pin each slice
        std::set<std::string> covered{v, conds[0]->of[0], conds[1]->of[0]};
        if (levels_product(evidence, covered) != 1)
            throw unsupported_error("evidence: extra variables beyond the two conditionals");
        std::vector<ConditionalSpec> both{spec1, spec2};
        const auto common = intersect_margins(std::span<const ConditionalSpec>(both), cap);
        cmp.common_margin_count = common.size();
        BigInt total = 0;
        for (const auto& s : common)
            total += count_fiber_two_margins(grid_from_margin(spec1, s), grid_from_margin(spec2, s));
        cmp.fiber_given_evidence = total;
        std::optional<std::vector<std::int64_t>> ref = fixed;
        if (!ref && common.size() == 1) ref = common[0];
        if (ref) {
            cmp.fiber_given_margins = count_fiber_two_margins(grid_from_margin(spec1, *ref),
                                                              grid_from_margin(spec2, *ref));
            cmp.reference_margin = std::move(*ref);
        }
    } else {
        throw unsupported_error("evidence: more than two conditionals are not supported");
    }

    cmp.equal = cmp.fiber_given_margins && *cmp.fiber_given_margins == cmp.fiber_given_evidence;
    return cmp;
}

} // namespace condtab
