#include "imog/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "imog/document.hpp"
#include "imog/dot.hpp"
#include "imog/errors.hpp"
#include "imog/filter.hpp"
#include "imog/fp_engine.hpp"
#include "imog/model_index.hpp"
#include "imog/report_json.hpp"
#include "imog/service.hpp"
#include "imog/sp_engine.hpp"
#include "imog/trace_engine.hpp"
#include "imog/validate.hpp"

namespace imog::cli {

namespace {

using codec::json;

// Thrown for bad argument values discovered after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string file;
    std::string format = "text";
    std::vector<std::string> levels;
    std::string groups = "off";
    std::optional<std::size_t> cap;
    std::optional<std::size_t> limit;
    bool all = false;

    std::vector<std::string> in, out_ids;
    std::string block;
    std::vector<std::string> variants, refines;
    std::vector<std::string> where;
    std::string perspective = "functional";
    std::string output;

    std::string host = "127.0.0.1";
    int port = 8377;
    std::string static_dir;
    std::string cors_origin = "*";
};

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : sep) + i;
    return s;
}

std::vector<std::string> strs(const std::set<ElementId>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

std::vector<std::string> strs(const std::vector<ElementId>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

std::string or_none(const std::string& s) { return s.empty() ? "(none)" : s; }

std::string describe(const Property& p) { return scalar_to_string(p.value) + (p.unit ? " " + *p.unit : ""); }

class Runner {
public:
    Runner(Options& o, std::ostream& out) : o_(o), out_(out) {}

    bool json_output() const { return o_.format == "json"; }

    void emit(const json& value) { out_ << value.dump(2) << "\n"; }

    std::size_t cap() const {
        if (o_.cap) return *o_.cap;
        if (const char* env = std::getenv("IMOG_CAP")) {
            try {
                std::size_t pos = 0;
                auto v = std::stoull(env, &pos);
                if (pos == std::string(env).size()) return static_cast<std::size_t>(v);
            } catch (const std::exception&) {
            }
            throw UsageError(std::string("IMOG_CAP must be a non-negative integer, got '") + env + "'");
        }
        return fp::EnumerationOptions{}.max_blocks;
    }

    fp::EnumerationOptions enumeration() const { return {o_.limit, cap()}; }

    bool groups() const { return o_.groups == "on"; }

    Model load() const { return load_document(o_.file); }

    // The model, restricted by --level when given.
    Model view() const {
        auto m = load();
        if (o_.levels.empty()) return m;
        std::vector<AbstractionLevel> levels;
        for (const auto& l : o_.levels) {
            auto parsed = parse_level_list(l);
            levels.insert(levels.end(), parsed.begin(), parsed.end());
        }
        return filter_by_abstraction_level(m, levels);
    }

    int validate() {
        auto m = load();
        auto d = validate_model(m);
        if (!has_errors(d)) {
            auto tr = trace::trace_diagnostics(trace::build_trace_report(m));
            auto spd = sp::check_sp_consistency(m, sp::resolve_all(m));
            d.insert(d.end(), tr.begin(), tr.end());
            d.insert(d.end(), spd.begin(), spd.end());
            sort_diagnostics(d);
        }
        if (json_output()) {
            emit(codec::encode(d));
        } else {
            for (const auto& x : d) {
                if (x.severity != Severity::Info || o_.all) out_ << format_diagnostic(x) << "\n";
            }
            out_ << count_severity(d, Severity::Error) << " errors, " << count_severity(d, Severity::Warning)
                 << " warnings\n";
        }
        return has_errors(d) ? kErrors : kOk;
    }

    int fp_count() {
        auto tree = fp::normalize(view(), groups());
        auto r = fp::count_configurations(tree, enumeration());
        if (json_output()) {
            emit(codec::encode(r));
        } else {
            out_ << r.count << (r.truncated ? " (truncated)" : "") << "\n";
        }
        return kOk;
    }

    int fp_enumerate() {
        auto tree = fp::normalize(view(), groups());
        auto r = fp::enumerate_configurations(tree, enumeration());
        if (json_output()) {
            emit(codec::encode(r));
            return kOk;
        }
        for (const auto& c : r.configurations) {
            out_ << join(strs(c.selected), " ");
            if (!c.vp_choices.empty()) {
                std::vector<std::string> choices;
                for (const auto& [vp, label] : c.vp_choices) choices.push_back(vp.str() + "=" + label);
                out_ << " | " << join(choices, " ");
            }
            out_ << "\n";
        }
        out_ << r.configurations.size() << " configurations" << (r.truncated ? " (truncated)" : "") << "\n";
        return kOk;
    }

    int fp_dead() {
        auto tree = fp::normalize(view(), groups());
        auto dead = fp::dead_blocks(tree, enumeration());
        if (json_output()) {
            emit(codec::encode_ids(dead));
        } else if (dead.empty()) {
            out_ << "no dead blocks\n";
        } else {
            for (const auto& id : dead) out_ << id.str() << "\n";
        }
        return kOk;
    }

    int fp_void() {
        auto tree = fp::normalize(view(), groups());
        const bool v = fp::is_void(tree, enumeration());
        if (json_output()) {
            emit(json{{"void", v}});
        } else {
            out_ << (v ? "void" : "not void") << "\n";
        }
        return kOk;
    }

    int fp_propagate() {
        auto tree = fp::normalize(view(), groups());
        fp::Decisions decisions;
        for (const auto& id : o_.in) decisions[ElementId(id)] = fp::Decision::In;
        for (const auto& id : o_.out_ids) {
            auto [it, fresh] = decisions.emplace(ElementId(id), fp::Decision::Out);
            if (!fresh && it->second == fp::Decision::In) throw UsageError("'" + id + "' is given with both --in and --out");
        }
        for (const auto& [id, d] : decisions) tree.index_of(id);  // unknown ids are usage errors
        auto r = fp::propagate(tree, decisions, enumeration());
        if (json_output()) {
            emit(codec::encode(r));
        } else if (r.conflict) {
            out_ << "conflict: " << r.conflict->message << "\n";
        } else {
            out_ << "forced-in: " << or_none(join(strs(r.forced_in))) << "\n";
            out_ << "forced-out: " << or_none(join(strs(r.forced_out))) << "\n";
        }
        return r.conflict ? kErrors : kOk;
    }

    static std::pair<ElementId, std::string> split_choice(const std::string& text, const char* flag) {
        auto eq = text.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError(std::string(flag) + " expects OWNER=CHOICE, got '" + text + "'");
        }
        return {ElementId(text.substr(0, eq)), text.substr(eq + 1)};
    }

    int sp_resolve() {
        auto m = load();
        sp::SelectionState sel;
        for (const auto& v : o_.variants) {
            auto [owner, choice] = split_choice(v, "--variant");
            sel.variant_choices[owner] = choice.empty() ? std::nullopt : std::optional<ElementId>(choice);
        }
        for (const auto& r : o_.refines) {
            auto [owner, choice] = split_choice(r, "--refine");
            if (choice.empty()) throw UsageError("--refine needs a refinement block after '='");
            sel.refinement_choices[owner] = ElementId(choice);
        }
        auto e = sp::resolve_effective_block(m, ElementId(o_.block), sel);
        if (json_output()) {
            emit(codec::encode(e));
            return kOk;
        }
        out_ << e.id.str() << ": " << e.name << "\n";
        out_ << "  level: " << e.level.name() << "\n";
        if (e.stereotype) out_ << "  stereotype: " << e.stereotype->name() << "\n";
        if (!e.description.empty()) out_ << "  description: " << e.description << "\n";
        if (!e.version.empty()) out_ << "  version: " << e.version << "\n";
        out_ << "  variants: " << or_none(join(strs(e.applied_variants), " -> ")) << "\n";
        out_ << "properties:\n";
        for (const auto& p : e.properties) {
            out_ << "  " << p.property.name << " = " << describe(p.property) << "  [" << sp::to_string(p.origin) << " "
                 << p.source.str() << "]\n";
        }
        if (!e.sse.empty()) {
            out_ << "sse:\n";
            for (const auto& s : e.sse) {
                out_ << "  in [" << join(s.input_properties) << "] out [" << join(s.output_properties) << "]\n";
            }
        }
        if (e.decomposition) {
            out_ << "decomposition:\n";
            for (const auto& el : e.decomposition->elements) {
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, SpBlock>) out_ << "  block " << v.id.str() << " \"" << v.name << "\"\n";
                        if constexpr (std::is_same_v<T, SpRelation>) {
                            out_ << "  relation " << v.id.str() << " " << v.source.str() << " -> " << v.target.str() << "\n";
                        }
                        if constexpr (std::is_same_v<T, Package>) out_ << "  package " << v.id.str() << " \"" << v.name << "\"\n";
                        if constexpr (std::is_same_v<T, Note>) out_ << "  note " << v.id.str() << "\n";
                    },
                    el.value);
            }
        }
        if (!e.refinement_groups.empty()) {
            out_ << "refinement groups:\n";
            for (const auto& g : e.refinement_groups) {
                out_ << "  " << g.id.str() << " \"" << g.name << "\": "
                     << (g.selected_refinement ? g.selected_refinement->str() : std::string("(none selected)")) << "\n";
            }
        }
        if (!e.internal_model_refs.empty()) out_ << "internal models: " << join(e.internal_model_refs) << "\n";
        if (!e.provenance.empty()) {
            out_ << "provenance:\n";
            for (const auto& p : e.provenance) out_ << "  " << p.rule << " " << p.source.str() << ": " << p.detail << "\n";
        }
        return kOk;
    }

    int trace_report() {
        auto r = trace::build_trace_report(view());
        const bool dangling = !r.dangling_links.empty();
        if (json_output()) {
            emit(codec::encode(r));
            return dangling ? kErrors : kOk;
        }
        out_ << "unallocated functions: " << or_none(join(strs(r.unallocated_functions))) << "\n";
        out_ << "unallocated features: " << or_none(join(strs(r.unallocated_features))) << "\n";
        out_ << "dangling links:";
        if (r.dangling_links.empty()) out_ << " (none)";
        out_ << "\n";
        for (const auto& t : r.dangling_links) {
            out_ << "  " << t.id.str() << " " << to_string(t.kind) << " " << t.source.str() << " -> " << t.target.str() << "\n";
        }
        out_ << "orphan requirements: " << or_none(join(strs(r.orphan_requirements))) << "\n";
        std::vector<std::string> reuse;
        for (const auto& k : r.knowledge_reuse) reuse.push_back(k.block.str() + " -> " + k.entry.str());
        out_ << "knowledge reuse: " << or_none(join(reuse)) << "\n";
        return dangling ? kErrors : kOk;
    }

    int qp_query() {
        auto m = view();
        std::vector<trace::Predicate> preds;
        for (const auto& w : o_.where) preds.push_back(trace::parse_predicate(w));
        auto rows = trace::query_requirements(m, preds);
        if (json_output()) {
            json list = json::array();
            for (const auto& r : rows) list.push_back(codec::encode(r));
            emit(list);
            return kOk;
        }
        std::vector<std::vector<std::string>> table = {{"id", "name", "satisfiability", "availability", "level", "status"}};
        for (const auto& r : rows) {
            std::ostringstream sat;
            sat << r.satisfiability;
            std::string status = r.status() == RequirementStatus::Confirmed  ? "Confirmed"
                                 : r.status() == RequirementStatus::Proposed ? "Proposed"
                                                                             : "Discarded";
            table.push_back({r.id.str(), r.name, sat.str(),
                             r.future_availability.year ? std::to_string(*r.future_availability.year) : "Now",
                             r.level.name(), status});
        }
        std::vector<std::size_t> width(table[0].size(), 0);
        for (const auto& row : table) {
            for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
        }
        for (const auto& row : table) {
            std::string line;
            for (std::size_t i = 0; i < row.size(); ++i) {
                line += row[i];
                if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
            }
            out_ << line << "\n";
        }
        out_ << rows.size() << " requirements\n";
        return kOk;
    }

    int export_dot() {
        static const std::pair<const char*, Perspective> names[] = {
            {"functional", Perspective::Functional}, {"quality", Perspective::Quality}, {"structural", Perspective::Structural}};
        std::optional<Perspective> p;
        for (const auto& [n, v] : names) {
            if (o_.perspective == n) p = v;
        }
        if (!p) throw UsageError("--perspective must be functional, quality or structural");
        auto dot = imog::export_dot(view(), *p);
        if (o_.output.empty()) {
            out_ << dot;
            return kOk;
        }
        std::ofstream f(o_.output, std::ios::binary);
        f << dot;
        f.close();
        if (!f) throw std::ios_base::failure("cannot write '" + o_.output + "'");
        return kOk;
    }

    int serve() {
        service::SessionOptions so;
        so.groups_enabled = groups();
        so.cap = cap();
        so.save_path = o_.file;
        so.cors_origin = o_.cors_origin;
        service::Session session(load(), so);
        service::Server server(session, {o_.host, o_.port, o_.static_dir});
        const int port = server.bind();
        out_ << "serving " << o_.file << " on http://" << o_.host << ":" << port << "\n" << std::flush;
        server.listen();
        return kOk;
    }

private:
    Options& o_;
    std::ostream& out_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Analyses for IMoG models (.imog.json)", "imog"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    // Shared flags live on the top-level app; subcommands fall through to it.
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--level", o.levels, "Abstraction levels to keep (repeatable or comma-separated)");
    app.add_option("--groups", o.groups, "Apply enabled groups as constraints")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--cap", o.cap, "Largest feature tree analysed without --limit (default 64, env IMOG_CAP)");
    app.add_option("--limit", o.limit, "Stop after this many configurations");

    auto file_arg = [&](CLI::App* sub) {
        sub->fallthrough();
        sub->add_option("file", o.file, "Model document")->required();
    };

    auto* validate = app.add_subcommand("validate", "Check a document and report diagnostics");
    file_arg(validate);
    validate->add_flag("--all", o.all, "Also print Info diagnostics");

    auto* fp = app.add_subcommand("fp", "Functional perspective analyses");
    fp->fallthrough();
    fp->require_subcommand(1);
    auto* fp_count = fp->add_subcommand("count", "Number of valid configurations");
    auto* fp_enum = fp->add_subcommand("enumerate", "List valid configurations");
    auto* fp_dead = fp->add_subcommand("dead", "Blocks in no valid configuration");
    auto* fp_void = fp->add_subcommand("void", "Whether no valid configuration exists");
    auto* fp_prop = fp->add_subcommand("propagate", "Consequences of selection decisions");
    for (auto* s : {fp_count, fp_enum, fp_dead, fp_void, fp_prop}) file_arg(s);
    fp_prop->add_option("--in", o.in, "Block id decided In (repeatable)");
    fp_prop->add_option("--out", o.out_ids, "Block id decided Out (repeatable)");

    auto* sp = app.add_subcommand("sp", "Structural perspective");
    sp->fallthrough();
    sp->require_subcommand(1);
    auto* sp_resolve = sp->add_subcommand("resolve", "Effective block under variant and refinement choices");
    file_arg(sp_resolve);
    sp_resolve->add_option("block", o.block, "Structural block id")->required();
    sp_resolve->add_option("--variant", o.variants, "BLOCK=VARIANT, or BLOCK= for no variant (repeatable)");
    sp_resolve->add_option("--refine", o.refines, "GROUP=REFINEMENT (repeatable)");

    auto* tr = app.add_subcommand("trace", "Cross-perspective traces");
    tr->fallthrough();
    tr->require_subcommand(1);
    auto* tr_report = tr->add_subcommand("report", "Allocation coverage and dangling links");
    file_arg(tr_report);

    auto* qp = app.add_subcommand("qp", "Quality perspective");
    qp->fallthrough();
    qp->require_subcommand(1);
    auto* qp_query = qp->add_subcommand("query", "Requirements matching all --where predicates");
    file_arg(qp_query);
    qp_query->add_option("--where", o.where, "FIELD OP VALUE, e.g. 'satisfiability >= 1' (repeatable)");

    auto* ex = app.add_subcommand("export", "Export views");
    ex->fallthrough();
    ex->require_subcommand(1);
    auto* ex_dot = ex->add_subcommand("dot", "Graphviz DOT of one perspective");
    file_arg(ex_dot);
    ex_dot->add_option("--perspective", o.perspective, "functional, quality or structural");
    ex_dot->add_option("-o,--output", o.output, "Write to this file instead of stdout");

    auto* serve = app.add_subcommand("serve", "Serve the model and the configurator UI over HTTP");
    file_arg(serve);
    serve->add_option("--host", o.host, "Bind address");
    serve->add_option("--port", o.port, "Port (0 picks a free one)");
    serve->add_option("--static", o.static_dir, "Directory with the UI assets");
    serve->add_option("--cors-origin", o.cors_origin, "Value of Access-Control-Allow-Origin");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kOk;
        err << app.help();
        return kUsage;
    }

    Runner runner(o, out);
    try {
        if (validate->parsed()) return runner.validate();
        if (fp_count->parsed()) return runner.fp_count();
        if (fp_enum->parsed()) return runner.fp_enumerate();
        if (fp_dead->parsed()) return runner.fp_dead();
        if (fp_void->parsed()) return runner.fp_void();
        if (fp_prop->parsed()) return runner.fp_propagate();
        if (sp_resolve->parsed()) return runner.sp_resolve();
        if (tr_report->parsed()) return runner.trace_report();
        if (qp_query->parsed()) return runner.qp_query();
        if (ex_dot->parsed()) return runner.export_dot();
        if (serve->parsed()) return runner.serve();
    } catch (const std::ios_base::failure& e) {
        // libstdc++ appends the error category to the message.
        std::string what = e.what();
        const std::string suffix = ": iostream error";
        if (what.size() > suffix.size() && what.compare(what.size() - suffix.size(), suffix.size(), suffix) == 0) {
            what.resize(what.size() - suffix.size());
        }
        err << "error: " << what << "\n";
        return kIo;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NotFoundError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IllegalSelectionError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnknownFieldError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidPredicateError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const EmptyFilterError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CapExceededError& e) {
        err << "error: " << e.what() << " (raise --cap or IMOG_CAP, or pass --limit)\n";
        return kErrors;
    } catch (const std::exception& e) {
        // Syntax, schema, duplicate ids, invalid model, empty perspective, bind failures.
        err << "error: " << e.what() << "\n";
        return kErrors;
    }
    err << app.help();
    return kUsage;
}

}  // namespace imog::cli
