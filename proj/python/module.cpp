#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "proofweave/json_io.hpp"
#include "proofweave/oracle.hpp"
#include "proofweave/sexpr.hpp"

namespace py = pybind11;
using namespace proofweave;

namespace {

LocallyColoredGraph graph_of(const std::string& text) {
    return LocallyColoredGraph::build(graph_spec_from_json(json::parse(text)));
}

std::string graph_split(const std::string& text) {
    LocallyColoredGraph g = graph_of(text);
    json rep;
    json names = json::array();
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (is_splitting(g, v)) names.push_back(g.vertex_name(v));
    rep["splitting"] = names;
    ParamSplit r = find_splitting_param(g, all_pairs(g));
    if (r.status == ParamSplit::Status::Found) {
        rep["vertex"] = g.vertex_name(r.vertex);
        rep["pair"] = {{"vertex", g.vertex_name(r.pair.v)},
                       {"color", g.color_name(r.pair.color)}};
    } else if (r.status == ParamSplit::Status::CuspFreeCycleExists) {
        rep["error"] = "CuspFreeCycleExists";
        rep["witness"] = path_to_json(*r.witness_cycle);
    } else {
        rep["error"] = r.status == ParamSplit::Status::NoPairs ? "NoPairs" : "DominationFails";
    }
    return rep.dump();
}

std::vector<std::string> splitting_vertices(const std::string& text) {
    LocallyColoredGraph g = graph_of(text);
    std::vector<std::string> out;
    for (Vertex v : brute_splitting(g)) out.push_back(g.vertex_name(v));
    return out;
}

bool has_cuspfree_cycle(const std::string& text) {
    return find_cuspfree_cycle(graph_of(text)).has_value();
}

std::string mll_check(const std::string& text) {
    ProofStructure ps = validate_ps(raw_ps_from_json(json::parse(text)));
    DrReport rep = dr_check(ps);
    json out;
    out["correct"] = rep.correct;
    if (rep.correct)
        out["degree"] = rep.degree;
    else
        out["witness"] = path_to_json(*rep.switching_cycle);
    return out.dump();
}

std::string mll_sequentialize(const std::string& text, const std::string& strategy) {
    ProofStructure ps = validate_ps(raw_ps_from_json(json::parse(text)));
    auto s = mll_strategy_from(strategy);
    if (!s) throw std::invalid_argument("unknown strategy " + strategy);
    return render_derivation_sexpr(sequentialize(ps, *s));
}

std::string mll_desequentialize(const std::string& sexpr) {
    LocGen gen;
    Deriv d = parse_derivation_sexpr(sexpr, gen);
    return ps_to_json(desequentialize(d).ps).dump();
}

bool mll_iso(const std::string& a, const std::string& b) {
    return iso_check(validate_ps(raw_ps_from_json(json::parse(a))),
                     validate_ps(raw_ps_from_json(json::parse(b))));
}

std::string mall_check(const std::string& text, bool connected) {
    LocGen gen;
    MallNet net = mallnet_from_json(json::parse(text), gen);
    CriterionReport rep = check_criterion(net, connected);
    json out;
    out["P1"] = rep.p1;
    out["P2"] = rep.p2;
    out["P3"] = rep.p3;
    if (connected) out["P2c"] = rep.p2c;
    return out.dump();
}

std::string mall_sequentialize(const std::string& text, const std::string& strategy) {
    LocGen gen;
    MallNet net = mallnet_from_json(json::parse(text), gen);
    auto s = mall_strategy_from(strategy);
    if (!s) throw std::invalid_argument("unknown strategy " + strategy);
    return render_derivation_sexpr(sequentialize_mall(net, *s));
}

std::string mall_desequentialize(const std::string& sexpr) {
    LocGen gen;
    Deriv d = parse_derivation_sexpr(sexpr, gen);
    return mallnet_to_json(desequentialize_mall(d)).dump();
}

std::string run_corollary(const std::string& name, const std::string& graph_text,
                          const std::string& aux_text) {
    json input = json::parse(graph_text);
    json aux = aux_text.empty() ? json::object() : json::parse(aux_text);
    json rep;
    try {
        if (name == "yeo") {
            LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(input));
            EdgeColoring ec;
            for (const auto& [k, v] : aux.at("coloring").items()) ec[k] = v.get<std::string>();
            rep["vertex"] = g.vertex_name(yeo_classic(g, ec));
        } else if (name == "kotzig") {
            LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(input));
            std::vector<std::string> f;
            for (const auto& e : aux.at("matching")) f.push_back(e.get<std::string>());
            rep["edge"] = g.edge_name(kotzig(g, f));
        } else if (name == "seymour-giles") {
            LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(input));
            std::map<std::string, std::string> phi;
            for (const auto& [k, v] : aux.at("phi").items()) phi[k] = v.get<std::string>();
            rep["vertex"] = g.vertex_name(seymour_giles(g, phi));
        } else if (name == "grossman-haggkvist") {
            LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(input));
            EdgeColoring ec;
            for (const auto& [k, v] : aux.at("coloring").items()) ec[k] = v.get<std::string>();
            auto res = grossman_haggkvist(g, ec);
            if (std::holds_alternative<Vertex>(res))
                rep["vertex"] = g.vertex_name(std::get<Vertex>(res));
            else
                rep["alternatingCycle"] = path_to_json(std::get<Path>(res));
        } else if (name == "shoesmith-smiley") {
            DirectedGraphView g = directed_from_json(input);
            std::vector<std::string> s;
            for (const auto& v : aux.at("S")) s.push_back(v.get<std::string>());
            rep["vertex"] = g.graph.vertex_name(shoesmith_smiley(g, s));
        } else {
            throw std::invalid_argument("unknown corollary " + name);
        }
    } catch (const CorollaryError& err) {
        rep["error"] = err.code;
    }
    return rep.dump();
}

std::string generate(const std::string& kind, uint64_t seed, int max_vertices, int max_rules) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.max_vertices = max_vertices;
    cfg.max_rules = max_rules;
    if (kind == "graph") return graph_to_json(generate_graph(cfg)).dump();
    LocGen gen;
    if (kind == "mll-derivation")
        return render_derivation_sexpr(generate_mll_derivation(cfg, gen));
    if (kind == "mall-derivation")
        return render_derivation_sexpr(generate_mall_derivation(cfg, gen));
    if (kind == "matching-instance") {
        MatchingInstance inst = generate_matching_instance(cfg);
        return json({{"graph", graph_to_json(inst.graph)}, {"matching", inst.matching}})
            .dump();
    }
    throw std::invalid_argument("unknown kind " + kind);
}

}  // namespace

PYBIND11_MODULE(_proofweave, m) {
    m.doc() = "locally colored graphs, Yeo splittings, and proof net sequentialization";

    m.def("graph_split", &graph_split,
          "splitting vertices and the maximal vertex-color pair, as JSON");
    m.def("splitting_vertices", &splitting_vertices,
          "brute-force splitting vertex names of a graph JSON");
    m.def("has_cuspfree_cycle", &has_cuspfree_cycle);

    m.def("mll_check", &mll_check, "Danos-Regnier report for a net JSON");
    m.def("mll_sequentialize", &mll_sequentialize, py::arg("net"),
          py::arg("strategy") = "all-pairs");
    m.def("mll_desequentialize", &mll_desequentialize);
    m.def("mll_iso", &mll_iso);

    m.def("mall_check", &mall_check, py::arg("net"), py::arg("connected") = false);
    m.def("mall_sequentialize", &mall_sequentialize, py::arg("net"),
          py::arg("strategy") = "any");
    m.def("mall_desequentialize", &mall_desequentialize);

    m.def("corollary", &run_corollary, py::arg("name"), py::arg("graph"),
          py::arg("aux") = "");
    m.def("generate", &generate, py::arg("kind"), py::arg("seed") = 1,
          py::arg("max_vertices") = 8, py::arg("max_rules") = 12);

    py::register_exception<BuildError>(m, "BuildError");
    py::register_exception<PsError>(m, "PsError");
    py::register_exception<MallError>(m, "MallError");
    py::register_exception<DerivError>(m, "DerivError");
    py::register_exception<CorollaryError>(m, "CorollaryError");
}
