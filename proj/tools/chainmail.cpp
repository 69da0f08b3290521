// chainmail: surgery-theoretic invariants of chainmail graphs and links.
//
// Subcommands operate on .cmg.json graph files (or certificate JSON for
// `verify`). Exit codes: 0 = success / property holds, 1 = property fails
// or hypotheses unmet, 2 = invalid input.

#include "chainmail/diagram.hpp"
#include "chainmail/exact.hpp"
#include "chainmail/generate.hpp"
#include "chainmail/graph.hpp"
#include "chainmail/io.hpp"
#include "chainmail/lspace.hpp"
#include "chainmail/surgery.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace chainmail;

struct Options {
    std::string format = "text";
    std::string out;
    std::string edge;
    std::string kind = "delete";
    std::string action = "rolfsen";
    bool medial = false;
    bool labels = false;
    int jobs = 1;
};

bool json_mode(const Options& o) { return o.format == "json"; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string matrix_text(const IntMatrix& m) {
    std::ostringstream ss;
    for (int i = 0; i < m.rows; ++i) {
        if (!m.row_labels.empty()) ss << m.row_labels[i] << ":";
        for (int j = 0; j < m.cols; ++j) ss << (j || !m.row_labels.empty() ? " " : "") << m.at(i, j);
        ss << "\n";
    }
    return ss.str();
}

// The matrix a file presents: Lambda, the augmented block matrix, or the
// rational surgery presentation when coefficients are not all integers.
IntMatrix file_matrix(const GraphFile& f) {
    if (!f.augmented) return linking_matrix(f.graph).matrix;
    AugmentedGraph ag = f.augmented_graph();
    if (ag.all_integer_coefficients()) return augmented_matrix(ag).matrix;
    return rational_surgery_matrix(ag);
}

int cmd_validate(const GraphFile& f, const Options& o, std::ostream& out) {
    ValidationReport rep = validate(f.graph);
    if (json_mode(o)) {
        json j;
        j["valid"] = rep.valid;
        j["errors"] = rep.errors;
        j["components"] = json::array();
        for (const auto& c : rep.components)
            j["components"].push_back({{"vertices", c.vertices.size()},
                                       {"edges", c.edge_count},
                                       {"faces", c.face_count},
                                       {"euler", c.euler_characteristic}});
        out << j.dump(2) << "\n";
    } else if (rep.valid) {
        out << "valid: " << f.graph.vertices.size() << " vertices, " << f.graph.edges.size()
            << " edges, " << rep.components.size() << " components\n";
    } else {
        out << "invalid\n";
        for (const auto& e : rep.errors) out << e << "\n";
        for (const auto& c : rep.components)
            if (c.euler_characteristic != 2)
                out << "component of vertex " << *c.vertices.begin() << ": euler "
                    << c.euler_characteristic << " != 2\n";
    }
    return rep.valid ? 0 : 1;
}

int cmd_matrix(const GraphFile& f, const Options& o, std::ostream& out) {
    IntMatrix m = file_matrix(f);
    out << (json_mode(o) ? matrix_json(m).dump(2) + "\n" : matrix_text(m));
    return 0;
}

int cmd_det(const GraphFile& f, const Options& o, std::ostream& out) {
    Int d = determinant(file_matrix(f));
    if (json_mode(o))
        out << json{{"det", d.str()}}.dump(2) << "\n";
    else
        out << d << "\n";
    return 0;
}

int cmd_h1(const GraphFile& f, const Options& o, std::ostream& out) {
    AbelianGroup h = cokernel(file_matrix(f));
    out << (json_mode(o) ? group_json(h).dump(2) + "\n" : h.to_string() + "\n");
    return 0;
}

int cmd_simplify(const GraphFile& f, const Options& o, std::ostream& out) {
    GraphFile s = GraphFile::wrap(simplify(f.graph));
    out << (json_mode(o) ? graph_file_json(s).dump(2) + "\n" : serialize_graph_file(s));
    return 0;
}

int cmd_minor(const GraphFile& f, const Options& o, std::ostream& out) {
    if (o.edge.empty()) throw ParseError("minor: --edge is required");
    EdgeId e = f.edge(o.edge);
    ChainmailGraph g;
    if (o.kind == "delete")
        g = minor(f.graph, e, MinorKind::Delete);
    else if (o.kind == "contract")
        g = contract_delooped(f.graph, e);
    else
        throw ParseError("minor: --kind must be delete or contract");
    GraphFile s = GraphFile::wrap(g);
    out << (json_mode(o) ? graph_file_json(s).dump(2) + "\n" : serialize_graph_file(s));
    return 0;
}

int cmd_dc_check(const GraphFile& f, const Options& o, std::ostream& out) {
    std::vector<EdgeId> targets;
    if (!o.edge.empty()) {
        targets.push_back(f.edge(o.edge));
    } else {
        for (const auto& [e, ed] : f.graph.edges)
            if (!ed.is_loop() && ed.weight == -1) targets.push_back(e);
    }
    bool all_hold = true;
    json arr = json::array();
    for (EdgeId e : targets) {
        DCReport rep = dc_check(f.graph, e);
        all_hold = all_hold && rep.holds;
        if (json_mode(o)) {
            arr.push_back({{"edge", f.edge_names.at(e)},
                           {"det", rep.det_graph.str()},
                           {"det_deleted", rep.det_deleted.str()},
                           {"det_contracted", rep.det_contracted.str()},
                           {"holds", rep.holds}});
        } else {
            if (o.edge.empty()) out << f.edge_names.at(e) << ": ";
            out << rep.det_graph << " = " << rep.det_deleted << " + " << rep.det_contracted
                << (rep.holds ? " OK" : " FAIL") << "\n";
        }
    }
    if (json_mode(o)) out << json{{"checks", arr}, {"holds", all_hold}}.dump(2) << "\n";
    return all_hold ? 0 : 1;
}

int cmd_certify(const GraphFile& f, const Options& o, std::ostream& out) {
    Certificate cert = certify(f.graph);
    if (json_mode(o)) {
        out << certificate_json(cert).dump(2) << "\n";
    } else {
        out << "certified: det " << cert.nodes[cert.root].det << ", " << cert.nodes.size()
            << " nodes, lens-leaf sum " << lens_leaf_sum(cert) << "\n";
    }
    return 0;
}

int cmd_certify_gen(const GraphFile& f, const Options& o, std::ostream& out) {
    if (!f.augmented) throw ParseError("certify-gen: file has no \"augmented\" block");
    GeneralizedCertificate cert = certify_generalized(f.augmented_graph());
    if (json_mode(o)) {
        out << generalized_certificate_json(cert).dump(2) << "\n";
    } else {
        out << "certified: det " << cert.nodes[cert.root].det << ", " << cert.nodes.size()
            << " nodes\n";
    }
    return 0;
}

int cmd_verify(const std::string& text, const Options& o, std::ostream& out) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("certificate: ") + e.what());
    }
    std::string tag = j.is_object() ? j.value("certificate", "") : "";
    bool ok;
    std::string why;
    if (tag == "alternating")
        ok = verify_certificate(parse_certificate(j), &why);
    else if (tag == "generalized")
        ok = verify_generalized_certificate(parse_generalized_certificate(j), &why);
    else
        throw ParseError("certificate: unknown or missing \"certificate\" tag");
    if (json_mode(o))
        out << json{{"ok", ok}, {"why", why}}.dump(2) << "\n";
    else
        out << (ok ? "OK" : "FAIL: " + why) << "\n";
    return ok ? 0 : 1;
}

int cmd_obstruct(const GraphFile& f, const Options& o, std::ostream& out) {
    ObstructionReport rep = orderability_obstruction(f.graph);
    if (json_mode(o)) {
        json arr = json::array();
        for (const auto& w : rep.orientations) {
            json jw;
            jw["sinks"] = w.sinks;
            jw["sources"] = w.sources;
            if (w.zero_weight_witness) jw["zero_weight_witness"] = *w.zero_weight_witness;
            arr.push_back(std::move(jw));
        }
        out << json{{"verdict", rep.verdict}, {"orientations", arr}}.dump(2) << "\n";
    } else {
        out << rep.orientations.size() << " acyclic orientations, obstruction "
            << (rep.verdict ? "holds" : "fails") << "\n";
    }
    return rep.verdict ? 0 : 1;
}

int cmd_sign_check(const GraphFile& f, const Options& o, std::ostream& out) {
    if (!f.augmented) throw ParseError("sign-check: file has no \"augmented\" block");
    SignReport rep = sign_check(f.augmented_graph());
    if (json_mode(o)) {
        out << json{{"det", rep.det.str()},
                    {"crossing_loops", rep.crossing_loop_count},
                    {"holds", rep.holds}}
                   .dump(2)
            << "\n";
    } else {
        out << "det " << rep.det << ", " << rep.crossing_loop_count << " crossing loops, sign "
            << (rep.holds ? "OK" : "FAIL") << "\n";
    }
    return rep.holds ? 0 : 1;
}

int cmd_twist(const GraphFile& f, const Options& o, std::ostream& out) {
    if (!f.augmented) throw ParseError("twist: file has no \"augmented\" block");
    if (o.edge.empty()) throw ParseError("twist: --edge is required");
    CrossingLoopAction action;
    if (o.action == "rolfsen")
        action = CrossingLoopAction::RolfsenTwist;
    else if (o.action == "blowdown")
        action = CrossingLoopAction::BlowDownUnit;
    else if (o.action == "erase")
        action = CrossingLoopAction::Erase;
    else
        throw ParseError("twist: --action must be rolfsen, blowdown, or erase");
    AugmentedGraph ag = crossing_loop_transform(f.augmented_graph(), f.edge(o.edge), action);
    GraphFile s = GraphFile::wrap(ag);
    out << (json_mode(o) ? graph_file_json(s).dump(2) + "\n" : serialize_graph_file(s));
    return 0;
}

int cmd_asym(const GraphFile& f, const Options& o, std::ostream& out) {
    PropertyReport rep = graph_properties(f.graph);
    if (json_mode(o)) {
        out << json{{"simplicial", rep.simplicial},
                    {"triangle_free", rep.triangle_free},
                    {"min_degree_ge3", rep.min_degree_ge3},
                    {"bridge_free", rep.bridge_free},
                    {"sphere_embedding", rep.sphere_embedding},
                    {"asymmetry_candidate", rep.asymmetry_candidate},
                    {"violations", rep.violations}}
                   .dump(2)
            << "\n";
    } else {
        out << "asymmetry candidate: " << (rep.asymmetry_candidate ? "yes" : "no") << "\n";
        for (const auto& v : rep.violations) out << v << "\n";
    }
    return rep.asymmetry_candidate ? 0 : 1;
}

PDCode file_pd(const GraphFile& f, const Options& o) {
    return o.medial ? medial_link_pd(f.graph) : build_chainmail_pd(f.graph);
}

int cmd_diagram(const GraphFile& f, const Options& o, std::ostream& out) {
    PDCode pd = file_pd(f, o);
    DiagramInvariants inv = diagram_invariants(pd);
    if (json_mode(o)) {
        out << json{{"crossings", inv.crossing_count},
                    {"writhe", inv.writhe},
                    {"alternating", inv.alternating},
                    {"seifert_circles", inv.seifert_circles},
                    {"seifert_euler", inv.seifert_euler},
                    {"goeritz_det", inv.goeritz_det.str()},
                    {"lk", matrix_json(inv.lk)}}
                   .dump(2)
            << "\n";
    } else {
        out << "crossings " << inv.crossing_count << ", writhe " << inv.writhe << ", "
            << (inv.alternating ? "alternating" : "non-alternating") << "\n"
            << "seifert circles " << inv.seifert_circles << ", euler " << inv.seifert_euler
            << "\n"
            << "goeritz det " << inv.goeritz_det << "\n"
            << "lk:\n"
            << matrix_text(inv.lk);
    }
    return 0;
}

int cmd_pd(const GraphFile& f, const Options& o, std::ostream& out) {
    out << pd_to_text(file_pd(f, o));
    return 0;
}

int cmd_svg(const GraphFile& f, const Options& o, std::ostream& out) {
    RenderOptions ropt;
    if (o.labels) {
        for (const auto& [e, ed] : f.graph.edges)
            ropt.edge_labels[e] = std::to_string(ed.weight);
        for (const auto& [e, c] : f.coefficients) ropt.edge_labels[e] = c.str();
    }
    out << render_svg(file_pd(f, o), ropt);
    return 0;
}

using GraphCommand = int (*)(const GraphFile&, const Options&, std::ostream&);

// Runs `cmd` on one file, buffering its output; parse errors -> 2,
// hypothesis/precondition failures from the library -> 1.
int run_file(GraphCommand cmd, const std::string& path, const Options& o, std::string& buffer) {
    std::ostringstream out;
    int code;
    try {
        GraphFile f = parse_graph_file(slurp(path));
        code = cmd(f, o, out);
    } catch (const ParseError& e) {
        out << path << ": " << e.what() << "\n";
        code = 2;
    } catch (const std::exception& e) {
        out << path << ": " << e.what() << "\n";
        code = 1;
    }
    buffer = out.str();
    return code;
}

int run_batch(GraphCommand cmd, const std::vector<std::string>& paths, const Options& o,
              std::ostream& out) {
    std::vector<std::string> buffers(paths.size());
    std::vector<int> codes(paths.size(), 0);
    int jobs = std::max(1, o.jobs);
    if (jobs == 1 || paths.size() <= 1) {
        for (size_t i = 0; i < paths.size(); ++i) codes[i] = run_file(cmd, paths[i], o, buffers[i]);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::future<void>> workers;
        for (int w = 0; w < jobs; ++w)
            workers.push_back(std::async(std::launch::async, [&] {
                for (size_t i = next++; i < paths.size(); i = next++)
                    codes[i] = run_file(cmd, paths[i], o, buffers[i]);
            }));
        for (auto& w : workers) w.get();
    }
    int worst = 0;
    for (size_t i = 0; i < paths.size(); ++i) {
        if (paths.size() > 1) out << "== " << paths[i] << " ==\n";
        out << buffers[i];
        worst = std::max(worst, codes[i]);
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surgery-theoretic invariants of chainmail graphs and links"};
    app.require_subcommand(1);

    Options opt;
    std::vector<std::string> files;
    GeneratorParams gen;
    std::string profile = "theorem-alternating";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--out", opt.out, "write output to a file instead of stdout");
    };
    auto add_graph_cmd = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("files", files, "input .cmg.json files")->required()->expected(-1);
        sub->add_option("--jobs", opt.jobs, "process input files concurrently");
        add_common(sub);
        return sub;
    };

    add_graph_cmd("validate", "check the sphere embedding");
    add_graph_cmd("matrix", "print the linking / augmented / surgery matrix");
    add_graph_cmd("det", "determinant of the presentation matrix");
    add_graph_cmd("h1", "first homology of the surgered manifold");
    add_graph_cmd("simplify", "apply the simplifying moves to a fixed point");
    CLI::App* minor_cmd = add_graph_cmd("minor", "delete or contract an edge");
    minor_cmd->add_option("--edge", opt.edge, "edge id")->required();
    minor_cmd->add_option("--kind", opt.kind, "delete | contract");
    CLI::App* dc_cmd = add_graph_cmd("dc-check", "deletion-contraction determinant identity");
    dc_cmd->add_option("--edge", opt.edge, "check a single edge");
    add_graph_cmd("certify", "build an L-space certificate");
    add_graph_cmd("certify-gen", "build a generalized certificate for an augmented file");
    add_graph_cmd("obstruct", "acyclic-orientation orderability obstruction");
    add_graph_cmd("sign-check", "sign lemma for the augmented matrix");
    CLI::App* twist_cmd = add_graph_cmd("twist", "surgery on one crossing loop");
    twist_cmd->add_option("--edge", opt.edge, "augmented edge id")->required();
    twist_cmd->add_option("--action", opt.action, "rolfsen | blowdown | erase");
    add_graph_cmd("asym", "asymmetry-candidate graph properties");
    CLI::App* diagram_cmd = add_graph_cmd("diagram", "diagram invariants of the chainmail link");
    diagram_cmd->add_flag("--medial", opt.medial, "use the medial link instead");
    CLI::App* pd_cmd = add_graph_cmd("pd", "planar diagram code");
    pd_cmd->add_flag("--medial", opt.medial, "use the medial link instead");
    CLI::App* svg_cmd = add_graph_cmd("svg", "render the diagram as SVG");
    svg_cmd->add_flag("--medial", opt.medial, "use the medial link instead");
    svg_cmd->add_flag("--labels", opt.labels, "draw edge weight labels");
    add_graph_cmd("medial", "diagram invariants of the medial link");

    CLI::App* verify_cmd = app.add_subcommand("verify", "verify a certificate JSON file");
    verify_cmd->add_option("files", files, "certificate files")->required()->expected(-1);
    add_common(verify_cmd);

    CLI::App* random_cmd = app.add_subcommand("random", "generate a seeded random graph file");
    random_cmd->add_option("--seed", gen.seed, "PRNG seed");
    random_cmd->add_option("--profile", profile, "theorem-alternating | balanced | augmented | arbitrary");
    random_cmd->add_option("--min-vertices", gen.vertices_min);
    random_cmd->add_option("--max-vertices", gen.vertices_max);
    random_cmd->add_option("--min-edges", gen.edges_min);
    random_cmd->add_option("--max-edges", gen.edges_max);
    random_cmd->add_option("--nu-min", gen.nu_min);
    random_cmd->add_option("--nu-max", gen.nu_max);
    random_cmd->add_option("--eps-min", gen.eps_min);
    random_cmd->add_option("--eps-max", gen.eps_max);
    add_common(random_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::ostringstream buffered;
    int code = 2;
    try {
        std::string name = app.get_subcommands().front()->get_name();
        if (name == "random") {
            gen.profile = parse_profile(profile);
            buffered << serialize_graph_file(random_graph(gen));
            code = 0;
        } else if (name == "verify") {
            code = 0;
            for (const auto& path : files) {
                if (files.size() > 1) buffered << "== " << path << " ==\n";
                code = std::max(code, cmd_verify(slurp(path), opt, buffered));
            }
        } else {
            static const std::map<std::string, GraphCommand> table = {
                {"validate", cmd_validate}, {"matrix", cmd_matrix},
                {"det", cmd_det},           {"h1", cmd_h1},
                {"simplify", cmd_simplify}, {"minor", cmd_minor},
                {"dc-check", cmd_dc_check}, {"certify", cmd_certify},
                {"certify-gen", cmd_certify_gen}, {"obstruct", cmd_obstruct},
                {"sign-check", cmd_sign_check},   {"twist", cmd_twist},
                {"asym", cmd_asym},         {"diagram", cmd_diagram},
                {"pd", cmd_pd},             {"svg", cmd_svg},
                {"medial", [](const GraphFile& f, const Options& o, std::ostream& out) {
                     Options m = o;
                     m.medial = true;
                     return cmd_diagram(f, m, out);
                 }},
            };
            code = run_batch(table.at(name), files, opt, buffered);
        }
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    if (opt.out.empty()) {
        std::cout << buffered.str();
    } else {
        std::ofstream f(opt.out, std::ios::binary);
        if (!f) {
            std::cerr << "cannot write \"" << opt.out << "\"\n";
            return 2;
        }
        f << buffered.str();
    }
    return code;
}
