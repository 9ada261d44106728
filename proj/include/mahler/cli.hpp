#pragma once

#include <iostream>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mahler/oracle.hpp"
#include "mahler/parser.hpp"

namespace mahler {

namespace detail {

inline nlohmann::json tree_key_json(const TreeId& id) {
    nlohmann::json j;
    if (id.torsion)
        j["torsion"] = {{"r", id.r}, {"orbit", id.a}};
    else
        j["core"] = id.core->to_string();
    return j;
}

inline nlohmann::json residues_json(const MahlerReport& rep) {
    nlohmann::json arr = nlohmann::json::array();
    for (const TreeResidues& tr : rep.res_trees) {
        nlohmann::json t;
        t["tree"] = tree_key_json(tr.id);
        t["gamma"] = tr.gamma.to_string();
        t["h"] = tr.h;
        t["e"] = tr.e;
        nlohmann::json vals = nlohmann::json::array();
        for (auto& [k, row] : tr.values)
            for (auto& [pole, v] : row)
                vals.push_back({{"order", k},
                                {"pole", pole.to_string()},
                                {"value", render_scalar(v)}});
        t["residues"] = vals;
        arr.push_back(t);
    }
    return arr;
}

inline void print_text(std::ostream& out, const MahlerReport& rep, bool certificate) {
    out << "p: " << rep.p << "\n";
    out << "input: " << render_ratfun(rep.input) << "\n";
    out << "summable: " << (rep.summable ? "yes" : "no") << "\n";
    out << "residues at infinity:";
    if (rep.res_infinity.comp.empty()) {
        out << " none\n";
    } else {
        out << "\n";
        for (auto& [i, v] : rep.res_infinity.comp)
            out << "  trajectory " << i << ": " << render_scalar(v) << "\n";
    }
    out << "tree residues:";
    bool any = false;
    for (const TreeResidues& tr : rep.res_trees)
        if (!tr.all_zero()) any = true;
    if (!any) {
        out << " none\n";
    } else {
        out << "\n";
        for (const TreeResidues& tr : rep.res_trees) {
            if (tr.all_zero()) continue;
            out << "  tree " << tr.id.to_string() << " (gamma = " << tr.gamma.to_string()
                << ", h = " << tr.h;
            if (tr.id.torsion) out << ", e = " << tr.e;
            out << "):\n";
            for (auto& [k, row] : tr.values)
                for (auto& [pole, v] : row)
                    out << "    order " << k << " at " << pole.to_string() << ": "
                        << render_scalar(v) << "\n";
        }
    }
    out << "remainder: " << render_ratfun(rep.remainder()) << "\n";
    if (certificate) {
        out << "certificate: " << render_ratfun(rep.certificate()) << "\n";
        if (rep.summable) out << "solution: " << render_ratfun(rep.solution()) << "\n";
    }
}

}  // namespace detail

// Entry point of the command-line driver; returns the process exit code:
// 0 summable, 1 not summable, 2 any error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"Mahler discrete residues and summability of rational functions"};
    long p = 0;
    std::string input, file, format = "text";
    bool want_cert = false, want_verify = false, want_oracle = false;
    AnsatzBounds bounds;
    long max_order = -1, max_height = -1;

    app.add_option("--p", p, "Mahler base p (>= 2)")->required();
    auto* oi = app.add_option("--input", input, "expression to analyze");
    auto* of = app.add_option("--file", file, "file holding one expression");
    oi->excludes(of);
    app.add_option("--format", format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--certificate", want_cert, "print the certificate and, if summable, a solution");
    app.add_flag("--verify", want_verify, "re-check the reduction identity exactly");
    app.add_flag("--oracle", want_oracle, "cross-check with the linear-algebra oracle");
    app.add_option("--max-order", max_order, "oracle ansatz: cap on pole orders");
    app.add_option("--max-height", max_height, "oracle ansatz: cap on bouquet height");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (p < 2) throw Error("p must be >= 2");
        if (max_order >= 0) bounds.max_order = max_order;
        if (max_height >= 0) bounds.max_height = max_height;
        std::string src = input;
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw Error("cannot open input file: " + file);
            std::ostringstream buf;
            buf << in.rdbuf();
            src = buf.str();
        }
        if (src.empty()) throw Error("no input expression (use --input or --file)");

        ParsedInput parsed = parse_input(src, p);
        MahlerReport rep = mahler_report(parsed.f, p);

        if (want_verify) {
            if (rep.remainder() != rep.input + delta(rep.certificate(), p))
                throw Error("verification failed: remainder != input + delta(certificate)");
            if (rep.summable && delta(rep.solution(), p) != rep.input)
                throw Error("verification failed: delta(solution) != input");
        }

        std::optional<RationalFunction> witness;
        bool oracle_sum = false;
        if (want_oracle) {
            witness = oracle_summable(parsed.f, p, bounds);
            oracle_sum = witness.has_value();
            if (oracle_sum != rep.summable)
                throw Error("oracle disagrees with the residue pipeline");
        }

        if (format == "json") {
            nlohmann::json j;
            j["input"] = render_expr(parsed.ast);
            j["p"] = p;
            j["summable"] = rep.summable;
            nlohmann::json inf = nlohmann::json::object();
            for (auto& [i, v] : rep.res_infinity.comp)
                inf[std::to_string(i)] = render_scalar(v);
            j["residues_at_infinity"] = inf;
            j["tree_residues"] = detail::residues_json(rep);
            j["remainder"] = render_ratfun(rep.remainder());
            j["certificate"] = render_ratfun(rep.certificate());
            j["solution"] =
                rep.summable ? nlohmann::json(render_ratfun(rep.solution())) : nlohmann::json();
            if (want_oracle) {
                j["oracle"] = {{"summable", oracle_sum},
                               {"agrees", oracle_sum == rep.summable},
                               {"witness", witness ? nlohmann::json(render_ratfun(*witness))
                                                   : nlohmann::json()}};
            } else {
                j["oracle"] = nullptr;
            }
            out << j.dump(2) << "\n";
        } else {
            detail::print_text(out, rep, want_cert);
            if (want_verify) out << "verify: ok\n";
            if (want_oracle)
                out << "oracle: " << (oracle_sum ? "summable" : "not summable")
                    << " (agrees)\n";
        }
        return rep.summable ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace mahler
