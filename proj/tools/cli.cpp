#include "cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "condtab/bounds.hpp"
#include "condtab/dagreduce.hpp"
#include "condtab/diophantine.hpp"
#include "condtab/errors.hpp"
#include "condtab/markov.hpp"
#include "condtab/tablespace.hpp"

namespace condtab::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

struct Options {
    std::string input = "-";
    std::string positivity; // empty: take from the input file, default strict
    std::uint64_t cap = 10'000'000;
    int jobs = 1;
    std::string output = "json";
    bool approx = false;
    bool per_margin = false;
    bool gaps = false;
    std::string moves_used = "all";
};

struct SpecDocument {
    ConditionalSpec spec;
    Positivity positivity = Positivity::Strict;
};

std::string read_input(const std::string& path, std::istream& in) {
    if (path == "-") {
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream f(path);
    if (!f) throw validation_error("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("input is not valid JSON: ") + e.what());
    }
}

Rational rational_from(const json& v, const char* what) {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational((long)v.get<std::int64_t>());
    throw validation_error(std::string(what) + ": expected a rational string");
}

std::int64_t int_field(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number_integer())
        throw validation_error(std::string("missing integer field '") + key + "'");
    return obj[key].get<std::int64_t>();
}

Positivity positivity_from(const std::string& name) {
    if (name == "strict") return Positivity::Strict;
    if (name == "nonneg") return Positivity::NonNegative;
    throw validation_error("positivity must be 'strict' or 'nonneg', got '" + name + "'");
}

const char* positivity_name(Positivity p) {
    return p == Positivity::Strict ? "strict" : "nonneg";
}

SpecDocument parse_spec(const json& doc, const Options& opt) {
    if (!doc.is_object()) throw validation_error("problem spec must be a JSON object");
    SpecDocument out;
    out.spec.I = (int)int_field(doc, "I");
    out.spec.J = (int)int_field(doc, "J");
    out.spec.K = (int)int_field(doc, "K");
    out.spec.N = int_field(doc, "N");
    if (doc.contains("direction") && doc["direction"].get<std::string>() != "A_given_B")
        throw validation_error("direction must be 'A_given_B'");
    if (!doc.contains("conditional") || !doc["conditional"].is_array())
        throw validation_error("missing 'conditional' grid");
    const json& grid = doc["conditional"];
    if ((int)grid.size() != out.spec.I)
        throw validation_error("'conditional' must have I rows");
    for (const json& row : grid) {
        if (!row.is_array() || (int)row.size() != out.spec.J)
            throw validation_error("every 'conditional' row must have J entries");
        for (const json& cell : row) out.spec.c.push_back(rational_from(cell, "conditional"));
    }
    out.spec.validate();

    if (!opt.positivity.empty())
        out.positivity = positivity_from(opt.positivity);
    else if (doc.contains("positivity"))
        out.positivity = positivity_from(doc["positivity"].get<std::string>());
    return out;
}

EvidenceSet parse_evidence(const json& doc) {
    if (!doc.is_object()) throw validation_error("evidence must be a JSON object");
    EvidenceSet ev;
    ev.N = int_field(doc, "N");
    if (!doc.contains("variables") || !doc["variables"].is_array())
        throw validation_error("missing 'variables' array");
    for (const json& v : doc["variables"]) {
        ev.variables.push_back(v.at("name").get<std::string>());
        ev.levels.push_back((int)int_field(v, "levels"));
    }
    if (!doc.contains("pieces") || !doc["pieces"].is_array())
        throw validation_error("missing 'pieces' array");
    for (const json& p : doc["pieces"]) {
        EvidencePiece piece;
        const std::string kind = p.at("kind").get<std::string>();
        if (kind == "conditional")
            piece.kind = EvidencePiece::Kind::Conditional;
        else if (kind == "marginal")
            piece.kind = EvidencePiece::Kind::Marginal;
        else
            throw validation_error("piece kind must be 'conditional' or 'marginal'");
        for (const json& name : p.at("of")) piece.of.push_back(name.get<std::string>());
        if (p.contains("given"))
            for (const json& name : p["given"]) piece.given.push_back(name.get<std::string>());
        const json& values = p.at("values");
        if (piece.kind == EvidencePiece::Kind::Conditional) {
            for (const json& row : values) {
                if (!row.is_array()) throw validation_error("conditional values must be a grid");
                for (const json& cell : row)
                    piece.values.push_back(rational_from(cell, "piece values"));
            }
        } else {
            for (const json& cell : values)
                piece.values.push_back(rational_from(cell, "piece values"));
        }
        ev.pieces.push_back(std::move(piece));
    }
    ev.validate();
    return ev;
}

json margin_json(const MarginalTable& m) {
    json rows = json::array();
    for (int i = 0; i < m.I; ++i) {
        json row = json::array();
        for (int j = 0; j < m.J; ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const std::vector<std::int64_t>& v) {
    json out = json::array();
    for (std::int64_t x : v) out.push_back(x);
    return out;
}

json equation_json(const DiophEq& eq) {
    json out;
    out["coefficients"] = vector_json(eq.coeffs);
    out["rhs"] = eq.rhs;
    return out;
}

// nested [I][J][K] grid of formatted bound values
template <class Fmt>
json grid3_json(const BoundGrid& g, const std::vector<Rational>& vals, Fmt fmt) {
    json out = json::array();
    for (int i = 0; i < g.I; ++i) {
        json plane = json::array();
        for (int j = 0; j < g.J; ++j) {
            json line = json::array();
            for (int k = 0; k < g.K; ++k) line.push_back(fmt(vals[g.idx(i, j, k)]));
            plane.push_back(std::move(line));
        }
        out.push_back(std::move(plane));
    }
    return out;
}

json rational_grid2_json(const MarginBoundGrid& g, const std::vector<Rational>& vals) {
    json out = json::array();
    for (int i = 0; i < g.I; ++i) {
        json row = json::array();
        for (int j = 0; j < g.J; ++j)
            row.push_back(vals[(std::size_t)i * (std::size_t)g.J + (std::size_t)j].str());
        out.push_back(std::move(row));
    }
    return out;
}

json base_report(const char* command) {
    json out;
    out["command"] = command;
    out["schema_version"] = kSchemaVersion;
    return out;
}

int cmd_solve(const SpecDocument& doc, const Options& opt, std::ostream& out) {
    const DiophEq eq = build_equation(doc.spec);
    json report = base_report("solve");
    report["equation"] = equation_json(eq);
    report["positivity"] = positivity_name(doc.positivity);
    const BigInt count = count_solutions(eq, doc.positivity);
    report["margin_count"] = count.get_str();
    report["feasible"] = count > 0;
    const auto particular = solve_particular(eq);
    report["particular_solution"] = particular ? vector_json(*particular) : json(nullptr);
    if (count <= (long)std::min<std::uint64_t>(opt.cap, 1u << 20)) {
        const auto solutions = enumerate_solutions(eq, doc.positivity, opt.cap);
        json xs = json::array(), margins = json::array();
        for (const auto& x : solutions) {
            xs.push_back(vector_json(x));
            margins.push_back(margin_json(margin_from_solution(doc.spec, x)));
        }
        report["solutions"] = std::move(xs);
        report["margins"] = std::move(margins);
    }
    out << report.dump(2) << "\n";
    return 0;
}

int cmd_count(const SpecDocument& doc, const Options& opt, std::ostream& out) {
    const DiophEq eq = build_equation(doc.spec);
    json report = base_report("count");
    report["equation"] = equation_json(eq);
    report["positivity"] = positivity_name(doc.positivity);
    if (opt.approx) {
        report["mode"] = "approx";
        report["margin_count_approx"] = approx_count_solutions(eq).str();
        try {
            report["table_count_approx"] = approx_count_fiber(doc.spec);
        } catch (const unsupported_error& e) {
            report["table_count_approx"] = nullptr;
            report["table_count_approx_error"] = e.what();
        }
    } else {
        report["mode"] = "exact";
        CountOptions copt;
        copt.jobs = opt.jobs;
        copt.per_margin_limit = opt.per_margin ? std::min<std::uint64_t>(opt.cap, 100'000) : 0;
        const FiberCount fc = count_fiber(doc.spec, doc.positivity, copt);
        report["margin_count"] = count_solutions(eq, doc.positivity).get_str();
        report["table_count"] = fc.total.get_str();
        if (opt.per_margin) {
            report["per_margin_complete"] = fc.per_margin_complete;
            if (fc.per_margin_complete) {
                json pm = json::array();
                for (const auto& [margin, cnt] : fc.per_margin) {
                    json entry;
                    entry["count"] = cnt.get_str();
                    entry["margin"] = margin_json(margin);
                    pm.push_back(std::move(entry));
                }
                report["per_margin"] = std::move(pm);
            }
        }
    }
    out << report.dump(2) << "\n";
    return 0;
}

int cmd_bounds(const SpecDocument& doc, const Options& opt, std::ostream& out) {
    json report = base_report("bounds");
    const auto rational_str = [](const Rational& r) { return json(r.str()); };
    const auto integer_val = [](const Rational& r) { return json(r.num().get_si()); };

    const BoundGrid relax = relaxation_cell_bounds(doc.spec);
    report["relaxation"]["lower"] = grid3_json(relax, relax.lower, rational_str);
    report["relaxation"]["upper"] = grid3_json(relax, relax.upper, rational_str);

    const MarginBoundGrid mb = margin_bounds_thm(doc.spec);
    report["margin_bounds"]["lower"] = rational_grid2_json(mb, mb.lower);
    report["margin_bounds"]["upper"] = rational_grid2_json(mb, mb.upper);

    const BoundGrid dec = decomposition_cell_bounds(doc.spec, opt.cap);
    report["decomposition"]["lower"] = grid3_json(dec, dec.lower, integer_val);
    report["decomposition"]["upper"] = grid3_json(dec, dec.upper, integer_val);

    const auto margins = decompose_fiber(doc.spec, Positivity::Strict, opt.cap);
    if (margins.size() <= 100) {
        json pm = json::array();
        for (const auto& m : margins) {
            const BoundGrid g = per_margin_cell_bounds(m, doc.spec.K);
            json entry;
            entry["margin"] = margin_json(m);
            entry["lower"] = grid3_json(g, g.lower, integer_val);
            entry["upper"] = grid3_json(g, g.upper, integer_val);
            pm.push_back(std::move(entry));
        }
        report["per_margin"] = std::move(pm);
    } else {
        report["per_margin_omitted"] = true;
    }

    if (opt.gaps) {
        const auto attained = attained_cell_values(doc.spec, opt.cap, doc.positivity);
        BoundGrid shape;
        shape.I = doc.spec.I;
        shape.J = doc.spec.J;
        shape.K = doc.spec.K;
        json cells = json::array();
        for (int i = 0; i < shape.I; ++i) {
            json plane = json::array();
            for (int j = 0; j < shape.J; ++j) {
                json line = json::array();
                for (int k = 0; k < shape.K; ++k)
                    line.push_back(vector_json(attained[shape.idx(i, j, k)]));
                plane.push_back(std::move(line));
            }
            cells.push_back(std::move(plane));
        }
        report["attained_values"] = std::move(cells);
    }
    out << report.dump(2) << "\n";
    return 0;
}

json moves_json(const MoveSet& moves) {
    json out = json::array();
    for (const auto& mv : moves.moves) {
        json entry;
        entry["delta"] = vector_json(mv.flatten_kji());
        entry["tag"] = mv.tag == MoveTag::ChangesMargin ? "changes_margin" : "fixes_margin";
        out.push_back(std::move(entry));
    }
    return out;
}

int cmd_moves(const SpecDocument& doc, const Options&, std::ostream& out) {
    json report = base_report("moves");
    const MoveSet moves = candidate_basis(doc.spec);
    report["counts"]["changes_margin"] = moves.count(MoveTag::ChangesMargin);
    report["counts"]["fixes_margin"] = moves.count(MoveTag::FixesMargin);
    report["counts"]["total"] = (int)moves.moves.size();
    report["conjectured_size"] =
        (doc.spec.J - 1) + doc.spec.I * doc.spec.J * (doc.spec.K - 1);
    report["moves"] = moves_json(moves);
    out << report.dump(2) << "\n";
    return 0;
}

int cmd_verify(const SpecDocument& doc, const Options& opt, std::ostream& out) {
    json report = base_report("verify");
    MoveSet moves;
    if (opt.moves_used == "all")
        moves = candidate_basis(doc.spec);
    else if (opt.moves_used == "basic")
        moves = basic_moves(doc.spec);
    else if (opt.moves_used == "margin")
        moves = margin_change_moves(doc.spec);
    else if (opt.moves_used != "none")
        throw validation_error("--moves must be one of all|basic|margin|none");
    const ConnectivityReport r = verify_connectivity(doc.spec, moves, opt.cap, doc.positivity);
    report["component_count"] = r.component_count;
    json sizes = json::array();
    for (std::uint64_t s : r.component_sizes) sizes.push_back(std::to_string(s));
    report["component_sizes"] = std::move(sizes);
    report["connected"] = r.component_count == 1;
    report["fiber_size"] = std::to_string(r.fiber_size);
    report["move_count"] = (int)moves.moves.size();
    report["moves_used"] = opt.moves_used;
    report["positivity"] = positivity_name(doc.positivity);
    out << report.dump(2) << "\n";
    return 0;
}

int cmd_enumerate(const SpecDocument& doc, const Options& opt, std::ostream& out) {
    if (opt.output == "jsonl") {
        for_each_table(
            doc.spec, opt.cap,
            [&](const Table3& t) {
                out << json(t.flatten_kji()).dump() << "\n";
                return true;
            },
            doc.positivity);
        return 0;
    }
    json report = base_report("enumerate");
    json tables = json::array();
    std::uint64_t n = 0;
    for_each_table(
        doc.spec, opt.cap,
        [&](const Table3& t) {
            ++n;
            tables.push_back(json(t.flatten_kji()));
            return true;
        },
        doc.positivity);
    report["count"] = std::to_string(n);
    report["positivity"] = positivity_name(doc.positivity);
    report["tables"] = std::move(tables);
    out << report.dump(2) << "\n";
    return 0;
}

int cmd_dag(const EvidenceSet& ev, const Options& opt, std::ostream& out) {
    json report = base_report("dag");
    const DagModel dag = build_dag(ev);
    json nodes = json::array();
    for (const auto& n : dag.nodes) nodes.push_back(n);
    report["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const auto& e : dag.edges)
        edges.push_back(json::array({dag.nodes[(std::size_t)e.first], dag.nodes[(std::size_t)e.second]}));
    report["edges"] = std::move(edges);
    const UndirectedGraph moral = moralize(dag);
    json medges = json::array();
    for (const auto& e : moral.edges)
        medges.push_back(json::array({moral.nodes[(std::size_t)e.first], moral.nodes[(std::size_t)e.second]}));
    report["moral_edges"] = std::move(medges);
    report["wermuth"] = wermuth_check(dag);

    const ReductionResult red = reduce_to_margins(ev, opt.cap);
    json rj;
    rj["reducible"] = red.reducible;
    rj["reason"] = red.reducible ? json(nullptr) : json(red.reason);
    rj["common_margin_count"] = std::to_string(red.common_margin_count);
    if (red.reducible) {
        json margins = json::array();
        for (const auto& clique : red.margins) {
            json names = json::array();
            for (const auto& n : clique) names.push_back(n);
            margins.push_back(std::move(names));
        }
        rj["margins"] = std::move(margins);
    }
    rj["unique_margin"] = red.unique_margin ? vector_json(*red.unique_margin) : json(nullptr);
    report["reduction"] = std::move(rj);

    try {
        const FiberComparison cmp = compare_fibers(ev, opt.cap);
        json cj;
        cj["common_margin_count"] = std::to_string(cmp.common_margin_count);
        cj["equal"] = cmp.equal;
        cj["fiber_given_evidence"] = cmp.fiber_given_evidence.get_str();
        cj["fiber_given_margins"] =
            cmp.fiber_given_margins ? json(cmp.fiber_given_margins->get_str()) : json(nullptr);
        cj["reference_margin"] =
            cmp.reference_margin ? vector_json(*cmp.reference_margin) : json(nullptr);
        report["comparison"] = std::move(cj);
    } catch (const unsupported_error& e) {
        report["comparison"] = nullptr;
        report["comparison_error"] = e.what();
    }
    out << report.dump(2) << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Exact analysis of contingency-table fibers given conditional frequencies"};
    app.require_subcommand(1);

    Options opt;
    const auto add_common = [&](CLI::App* sub, bool with_positivity = true) {
        sub->add_option("input", opt.input, "problem JSON file, or '-' for stdin");
        if (with_positivity)
            sub->add_option("--positivity", opt.positivity,
                            "strict|nonneg (overrides the input file)");
        sub->add_option("--cap", opt.cap, "enumeration cap");
        sub->add_option("--jobs", opt.jobs, "worker threads for per-margin work");
        sub->add_option("--output", opt.output, "json|jsonl");
        return sub;
    };

    CLI::App* solve = add_common(app.add_subcommand("solve", "induced equation and its solutions"));
    CLI::App* count = add_common(app.add_subcommand("count", "exact or approximate fiber sizes"));
    count->add_flag("--approx", opt.approx, "closed-form / quadrature approximations");
    count->add_flag("--per-margin", opt.per_margin, "include the per-margin breakdown");
    CLI::App* bounds = add_common(app.add_subcommand("bounds", "cell and margin bounds"));
    bounds->add_flag("--gaps", opt.gaps, "attained cell values over the fiber");
    CLI::App* moves = add_common(app.add_subcommand("moves", "candidate move set"));
    CLI::App* verify =
        add_common(app.add_subcommand("verify", "check fiber connectivity under the moves"));
    verify->add_option("--moves", opt.moves_used, "all|basic|margin|none");
    CLI::App* enumerate =
        add_common(app.add_subcommand("enumerate", "stream every table in the fiber"));
    CLI::App* dag = add_common(app.add_subcommand("dag", "evidence DAG and margin reduction"),
                               /*with_positivity=*/false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (enumerate->parsed() && enumerate->count("--output") == 0) opt.output = "jsonl";
        const json doc = parse_json(read_input(opt.input, in));
        if (solve->parsed()) return cmd_solve(parse_spec(doc, opt), opt, out);
        if (count->parsed()) return cmd_count(parse_spec(doc, opt), opt, out);
        if (bounds->parsed()) return cmd_bounds(parse_spec(doc, opt), opt, out);
        if (moves->parsed()) return cmd_moves(parse_spec(doc, opt), opt, out);
        if (verify->parsed()) return cmd_verify(parse_spec(doc, opt), opt, out);
        if (enumerate->parsed()) return cmd_enumerate(parse_spec(doc, opt), opt, out);
        if (dag->parsed()) return cmd_dag(parse_evidence(doc), opt, out);
        throw internal_error("no subcommand dispatched");
    } catch (const resource_error& e) {
        err << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const unsupported_error& e) {
        err << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const internal_error& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace condtab::cli
