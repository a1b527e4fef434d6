#include "operadcalc/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "operadcalc/analysis.hpp"

namespace operadcalc {

namespace {

std::vector<std::string> split_labels(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

struct CommonOpts {
    std::string set = "x,y";
    std::string gens = "*:2";
    std::string operad = "free";
    int max_degree = 3;
    int rank = 2;
    int stab = 6;
    unsigned long long seed = 1;
    std::string format = "text";
    long long budget_ms = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--set", o.set, "comma-separated label set");
    cmd->add_option("--gens", o.gens, "generator declarations name:arity[,name:arity]");
    cmd->add_option("--operad", o.operad, "free|lie|ass|com");
    cmd->add_option("--max-degree", o.max_degree, "degree truncation");
    cmd->add_option("--rank", o.rank, "classical alphabet rank");
    cmd->add_option("--stab", o.stab, "stabilization bound");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--format", o.format, "text|json|csv");
    cmd->add_option("--budget-ms", o.budget_ms, "computation budget in milliseconds");
}

long long effective_budget(const CommonOpts& o) {
    if (o.budget_ms > 0) return o.budget_ms;
    if (const char* env = std::getenv("OPERADCALC_BUDGET_MS")) {
        try {
            return std::stoll(env);
        } catch (...) {
        }
    }
    return 0;
}

Context context_of(const CommonOpts& o) {
    auto labels = split_labels(o.set);
    validate_labels(labels);
    return Context{labels, GeneratorSet::parse(o.gens)};
}

void emit_result(std::ostream& out, const CommonOpts& o, const std::string& command,
                 const std::vector<std::pair<std::string, std::string>>& fields) {
    if (o.format == "json") {
        Json j;
        j["schema"] = 1;
        j["command"] = command;
        for (const auto& [k, v] : fields) j[k] = v;
        out << j.dump(2) << "\n";
    } else if (o.format == "csv") {
        out << "field,value\n";
        for (const auto& [k, v] : fields) out << k << ",\"" << v << "\"\n";
    } else {
        for (const auto& [k, v] : fields) out << k << ": " << v << "\n";
    }
}

Derivation parse_derivation(const Context& ctx, const std::string& text) {
    return make_derivation(ctx, FormalSum::parse(text));
}

// "x=[x,y];y=0" with FormalSum values per operad tag
ClassicalDerivation parse_classical_map(const ClassicalContext& ctx, const std::string& text) {
    std::map<char, FormalSum> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos || eq != 1)
            throw std::invalid_argument("bad map entry (want letter=VALUE): " + item);
        char slot = item[0];
        FormalSum raw = FormalSum::parse(item.substr(eq + 1));
        FormalSum norm;
        for (const auto& [k, c] : raw.terms()) {
            switch (ctx.tag) {
                case OperadTag::Lie: norm += c * lie_normal_form(k); break;
                case OperadTag::Ass: norm.add_term(k, c); break;
                case OperadTag::Com: norm.add_term(words::monomial_of(k), c); break;
            }
        }
        values[slot] += norm;
    }
    for (auto it = values.begin(); it != values.end();)
        it = it->second.is_zero() ? values.erase(it) : std::next(it);
    return cder(ctx, values);
}

void emit_suite_report(std::ostream& out, const CommonOpts& o, const Json& report) {
    if (o.format == "json") {
        out << report.dump(2) << "\n";
        return;
    }
    if (o.format == "csv") {
        out << "suite,entry,pass,dims\n";
        for (const auto& entry : report["per_degree"]) {
            std::string dims;
            if (entry.contains("dims")) dims = entry["dims"].dump();
            std::string tag;
            if (entry.contains("degree")) tag += "deg" + entry["degree"].dump();
            if (entry.contains("rank")) tag += "rank" + entry["rank"].dump();
            if (entry.contains("realization"))
                tag += entry["realization"].get<std::string>();
            out << report["suite"].get<std::string>() << "," << tag << ","
                << (entry.value("pass", true) ? "1" : "0") << ",\"" << dims << "\"\n";
        }
        out << "total,," << (report["pass"].get<bool>() ? "1" : "0") << ",\n";
        return;
    }
    out << "suite " << report["suite"].get<std::string>() << "\n";
    for (const auto& entry : report["per_degree"]) {
        out << " ";
        if (entry.contains("realization"))
            out << " [" << entry["realization"].get<std::string>() << "]";
        if (entry.contains("rank")) out << " rank " << entry["rank"].dump();
        if (entry.contains("degree")) out << " degree " << entry["degree"].dump();
        if (entry.contains("dims")) out << " " << entry["dims"].dump();
        if (entry.contains("trees")) out << " trees " << entry["trees"].dump();
        if (entry.contains("triples_checked"))
            out << " triples " << entry["triples_checked"].dump();
        if (entry.contains("pairs")) out << " pairs " << entry["pairs"].dump();
        out << " : " << (entry.value("pass", true) ? "ok" : "FAIL") << "\n";
    }
    if (report.contains("counterexample"))
        out << " counterexample: " << report["counterexample"].get<std::string>() << "\n";
    out << (report["pass"].get<bool>() ? "PASS" : "FAIL") << " ("
        << report["elapsed_ms"].dump() << " ms)\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"operadcalc: exact calculus of derivations of free operad algebras"};
    app.require_subcommand(1);

    CommonOpts o;

    // tree
    auto* tree_cmd = app.add_subcommand("tree", "parse, classify, graft, prune");
    std::string tree_text, with_text;
    int graft_at = 0, prune_edge = 0;
    bool do_classify = false;
    tree_cmd->add_option("--tree", tree_text, "tree text LABEL<-NODE")->required();
    tree_cmd->add_flag("--classify", do_classify, "report the classification");
    tree_cmd->add_option("--graft-at", graft_at, "1-based leaf position to graft at");
    tree_cmd->add_option("--with", with_text, "tree grafted in");
    tree_cmd->add_option("--prune-edge", prune_edge, "1-based internal edge to cut");
    add_common(tree_cmd, o);

    // binary formal-sum operations
    std::string left_text, right_text, sum_text;
    auto add_pair = [&](const std::string& name, const std::string& desc) {
        auto* c = app.add_subcommand(name, desc);
        c->add_option("--left", left_text, "left operand (formal sum of trees)")->required();
        c->add_option("--right", right_text, "right operand")->required();
        add_common(c, o);
        return c;
    };
    auto* prelie_cmd = add_pair("prelie", "preLie product of derivations");
    auto* bracket_cmd = add_pair("bracket", "Lie bracket of derivations");
    auto* cocycle_cmd = add_pair("cocycle", "1-cocycle defect of a derivation pair");

    auto* contract_cmd = app.add_subcommand("contract", "generalized contraction");
    contract_cmd->add_option("--tree", tree_text, "a single tree");
    contract_cmd->add_option("--sum", sum_text, "a formal sum of trees");
    add_common(contract_cmd, o);

    auto* div_cmd = app.add_subcommand("div", "generalized divergence");
    div_cmd->add_option("--tree", tree_text, "a single tree");
    div_cmd->add_option("--sum", sum_text, "a formal sum of trees");
    add_common(div_cmd, o);

    // classical realizations
    auto* classical_cmd = app.add_subcommand("classical", "satoh|double|com divergences");
    std::string mode, map_text;
    classical_cmd->add_option("mode", mode, "satoh|double|com (defaults from --operad)");
    classical_cmd->add_option("--map", map_text, "derivation values, e.g. \"x=[x,y];y=0\"")
        ->required();
    add_common(classical_cmd, o);

    auto* dims_cmd = app.add_subcommand("dims", "dimension table per degree");
    add_common(dims_cmd, o);

    auto* suite_cmd = app.add_subcommand("suite", "run a named verification suite");
    std::string suite_name;
    suite_cmd->add_option("name", suite_name, "suite name")->required();
    add_common(suite_cmd, o);

    std::vector<const char*> argv;
    argv.push_back("operadcalc");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        err << app.help();
        return 2;
    }

    try {
        if (*tree_cmd) {
            GeneratorSet gens = GeneratorSet::parse(o.gens);
            LabeledTree t = make_tree(gens, tree_text);
            std::vector<std::pair<std::string, std::string>> fields;
            fields.emplace_back("tree", canonical_key(t));
            fields.emplace_back("degree", std::to_string(t.internal_count()));
            fields.emplace_back("leaves", std::to_string(t.leaf_count()));
            if (do_classify) {
                TreeClass c = classify(t);
                fields.emplace_back("class", to_string(c.kind));
                if (c.spine_length >= 0)
                    fields.emplace_back("spine", std::to_string(c.spine_length));
            }
            if (graft_at > 0) {
                if (with_text.empty()) throw std::invalid_argument("--graft-at needs --with");
                LabeledTree t2 = make_tree(gens, with_text);
                fields.emplace_back("graft", canonical_key(graft(t, graft_at, t2)));
            }
            if (prune_edge > 0) {
                auto [lower, upper] = prune(t, prune_edge);
                fields.emplace_back("prune_lower", canonical_key(lower));
                fields.emplace_back("prune_upper", canonical_key(upper));
            }
            emit_result(out, o, "tree", fields);
            return 0;
        }
        if (*prelie_cmd || *bracket_cmd || *cocycle_cmd) {
            Context ctx = context_of(o);
            Derivation l = parse_derivation(ctx, left_text);
            Derivation r = parse_derivation(ctx, right_text);
            std::vector<std::pair<std::string, std::string>> fields;
            if (*prelie_cmd) {
                fields.emplace_back("result", prelie(l, r).value.str());
                emit_result(out, o, "prelie", fields);
            } else if (*bracket_cmd) {
                fields.emplace_back("result", bracket(l, r).value.str());
                emit_result(out, o, "bracket", fields);
            } else {
                fields.emplace_back("result", cocycle_defect(l, r).value.str());
                emit_result(out, o, "cocycle", fields);
            }
            return 0;
        }
        if (*contract_cmd || *div_cmd) {
            Context ctx = context_of(o);
            std::string text = !tree_text.empty() ? tree_text : sum_text;
            if (text.empty()) throw std::invalid_argument("need --tree or --sum");
            Derivation d = parse_derivation(ctx, text);
            std::vector<std::pair<std::string, std::string>> fields;
            if (*contract_cmd) {
                fields.emplace_back("result", contract(d).value.str());
                emit_result(out, o, "contract", fields);
            } else {
                fields.emplace_back("result", div(d).value.str());
                emit_result(out, o, "div", fields);
            }
            return 0;
        }
        if (*classical_cmd) {
            if (mode.empty()) {
                if (o.operad == "lie")
                    mode = "satoh";
                else if (o.operad == "ass")
                    mode = "double";
                else if (o.operad == "com")
                    mode = "com";
            }
            OperadTag tag;
            if (mode == "satoh")
                tag = OperadTag::Lie;
            else if (mode == "double")
                tag = OperadTag::Ass;
            else if (mode == "com")
                tag = OperadTag::Com;
            else
                throw std::invalid_argument("classical mode must be satoh|double|com");
            ClassicalContext ctx = make_classical_context(tag, standard_alphabet(o.rank));
            ClassicalDerivation d = parse_classical_map(ctx, map_text);
            std::vector<std::pair<std::string, std::string>> fields;
            if (tag == OperadTag::Ass) {
                BimodQuotient q(ctx.alphabet);
                fields.emplace_back("result", double_divergence(d, q).str());
            } else if (tag == OperadTag::Lie) {
                fields.emplace_back("result", satoh_trace(d).str());
            } else {
                fields.emplace_back("result", com_divergence(d).str());
            }
            emit_result(out, o, "classical " + mode, fields);
            return 0;
        }
        if (*dims_cmd) {
            Context ctx = context_of(o);
            Workspace ws(ctx.gens, Budget(effective_budget(o)));
            Json rows = Json::array();
            for (int d = 1; d <= o.max_degree; ++d) {
                Json j;
                j["degree"] = d;
                j["der"] = ws.tree_basis(ctx.labels, d).keys.size();
                j["necklaces"] = ws.necklace_keys(ctx.labels, d).size();
                j["derpl"] = ws.derpl(ctx.labels, d).rank();
                j["derlie"] = ws.derlie(ctx.labels, d).rank();
                j["kerdiv"] = ws.kernel_div(ctx.labels, d).rank();
                j["ko"] = ws.K_O(ctx.labels, d).rank();
                j["div_image"] = ws.div_image(ctx.labels, d).rank();
                j["imderlie"] = ws.imderlie(ctx.labels, d).rank();
                j["imderliespec"] = ws.imderliespec(ctx.labels, d).rank();
                rows.push_back(j);
            }
            if (o.format == "json") {
                Json j;
                j["schema"] = 1;
                j["command"] = "dims";
                j["labels"] = ctx.labels;
                j["rows"] = rows;
                out << j.dump(2) << "\n";
            } else if (o.format == "csv") {
                out << "degree,der,necklaces,derpl,derlie,kerdiv,ko,div_image,imderlie,"
                       "imderliespec\n";
                for (const auto& r : rows)
                    out << r["degree"] << "," << r["der"] << "," << r["necklaces"] << ","
                        << r["derpl"] << "," << r["derlie"] << "," << r["kerdiv"] << ","
                        << r["ko"] << "," << r["div_image"] << "," << r["imderlie"] << ","
                        << r["imderliespec"] << "\n";
            } else {
                for (const auto& r : rows) out << r.dump() << "\n";
            }
            return 0;
        }
        if (*suite_cmd) {
            SuiteParams sp;
            sp.labels = split_labels(o.set);
            validate_labels(sp.labels);
            sp.gens = GeneratorSet::parse(o.gens);
            sp.max_degree = o.max_degree;
            sp.rank = o.rank;
            sp.stab_bound = o.stab;
            sp.seed = o.seed;
            sp.budget_ms = effective_budget(o);
            if (suite_name == "ass4torsion" && !suite_cmd->count("--max-degree"))
                sp.max_degree = 2;
            Json report = run_suite(suite_name, sp);
            emit_suite_report(out, o, report);
            if (report.contains("partial") && report["partial"].get<bool>()) return 3;
            return report["pass"].get<bool>() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "usage error: no command\n";
    return 2;
}

}  // namespace operadcalc
