#include "proofweave/json_io.hpp"

#include <algorithm>

namespace proofweave {

json graph_to_json(const LocallyColoredGraph& g) {
    json j;
    j["vertices"] = json::array();
    for (int v = 0; v < g.vertex_count(); ++v) j["vertices"].push_back(g.vertex_name(v));
    j["colors"] = json::array();
    for (int c = 0; c < g.color_count(); ++c) j["colors"].push_back(g.color_name(c));
    j["edges"] = json::array();
    for (int e = 0; e < g.edge_count(); ++e) {
        json je;
        je["id"] = g.edge_name(e);
        je["ends"] = json::array();
        for (const auto& end : g.ends(e)) {
            json k;
            k["v"] = g.vertex_name(end.v);
            k["color"] = g.color_name(end.color);
            je["ends"].push_back(k);
        }
        j["edges"].push_back(je);
    }
    return j;
}

GraphSpec graph_spec_from_json(const json& j) {
    GraphSpec spec;
    for (const auto& v : j.at("vertices")) spec.vertices.push_back(v.get<std::string>());
    for (const auto& c : j.at("colors")) spec.colors.push_back(c.get<std::string>());
    for (const auto& e : j.at("edges")) {
        GraphSpec::EdgeSpec es;
        es.id = e.at("id").get<std::string>();
        if (e.contains("ends"))
            for (const auto& end : e.at("ends"))
                es.ends.push_back(
                    {end.at("v").get<std::string>(), end.at("color").get<std::string>()});
        spec.edges.push_back(std::move(es));
    }
    return spec;
}

DirectedGraphView directed_from_json(const json& j) {
    DirectedGraphView view;
    GraphSpec spec = graph_spec_from_json(j);
    for (const auto& e : spec.edges)
        if (e.ends.size() != 2)
            throw BuildError("PartialEdge", "directed graphs need total edges");
    view.graph = LocallyColoredGraph::build(spec);
    view.src.assign(view.graph.edge_count(), -1);
    view.tgt.assign(view.graph.edge_count(), -1);
    for (const auto& e : spec.edges) {
        Edge idx = *view.graph.edge_index(e.id);
        view.src[idx] = *view.graph.vertex_index(e.ends[0].vertex);
        view.tgt[idx] = *view.graph.vertex_index(e.ends[1].vertex);
    }
    return view;
}

json ps_to_json(const ProofStructure& ps) {
    json j;
    j["vertices"] = json::array();
    for (int v = 0; v < ps.vcount(); ++v) {
        json jv;
        jv["id"] = ps.vnames[v];
        jv["kind"] = vkind_name(ps.kinds[v]);
        j["vertices"].push_back(jv);
    }
    j["edges"] = json::array();
    for (int e = 0; e < ps.ecount(); ++e) {
        json je;
        je["id"] = ps.enames[e];
        if (ps.esrc[e] >= 0) je["src"] = ps.vnames[ps.esrc[e]];
        if (ps.etgt[e] >= 0) je["tgt"] = ps.vnames[ps.etgt[e]];
        if (!ps.untyped && ps.etypes[e]) je["type"] = print_formula(ps.etypes[e]);
        j["edges"].push_back(je);
    }
    if (ps.untyped) j["untyped"] = true;
    return j;
}

RawPs raw_ps_from_json(const json& j) {
    RawPs raw;
    raw.untyped = j.value("untyped", false);
    for (const auto& v : j.at("vertices"))
        raw.vertices.push_back({v.at("id").get<std::string>(), v.at("kind").get<std::string>()});
    for (const auto& e : j.at("edges")) {
        RawPs::E re;
        re.id = e.at("id").get<std::string>();
        re.src = e.value("src", "");
        re.tgt = e.value("tgt", "");
        re.type = e.value("type", "");
        raw.edges.push_back(std::move(re));
    }
    return raw;
}

namespace {

Formula subformula_by_path(const Formula& f, const std::string& rel) {
    Formula cur = f;
    size_t i = 0;
    while (i < rel.size()) {
        if (rel[i] != '.') throw MallError("BadPath", "malformed path " + rel);
        ++i;
        if (i >= rel.size() || (rel[i] != 'L' && rel[i] != 'R'))
            throw MallError("BadPath", "malformed path " + rel);
        if (is_atomic(cur)) throw MallError("BadPath", "path descends below a leaf");
        cur = rel[i] == 'L' ? cur->left : cur->right;
        ++i;
    }
    return cur;
}

Formula formula_by_path(const std::vector<Formula>& concs, const std::string& path) {
    size_t dot = path.find('.');
    std::string root = dot == std::string::npos ? path : path.substr(0, dot);
    int idx = std::stoi(root);
    if (idx < 0 || idx >= static_cast<int>(concs.size()))
        throw MallError("BadPath", "root index out of range in " + path);
    return subformula_by_path(concs[idx], dot == std::string::npos ? "" : path.substr(dot));
}

}  // namespace

json mallnet_to_json(const MallNet& net) {
    json j;
    j["sequent"]["concs"] = json::array();
    for (const Formula& f : net.seq.concs)
        j["sequent"]["concs"].push_back(print_formula(f));
    Forest f = build_forest(net.seq);
    j["sequent"]["hyps"] = json::array();
    for (const auto& h : f.hyps) j["sequent"]["hyps"].push_back(h.path);
    // canonical form: links sorted by leaf paths, linkings sorted likewise
    std::vector<std::vector<std::pair<std::string, std::string>>> linkings;
    for (const Linking& l : net.linkings) {
        std::vector<std::pair<std::string, std::string>> lp;
        for (const AxLink& link : l) {
            std::string pa = f.nodes[f.node_by_loc.at(link.a)].path;
            std::string pb = f.nodes[f.node_by_loc.at(link.b)].path;
            if (pb < pa) std::swap(pa, pb);
            lp.push_back({pa, pb});
        }
        std::sort(lp.begin(), lp.end());
        linkings.push_back(std::move(lp));
    }
    std::sort(linkings.begin(), linkings.end());
    j["linkings"] = json::array();
    for (const auto& lp : linkings) {
        json jl = json::array();
        for (const auto& [pa, pb] : lp) jl.push_back(json::array({pa, pb}));
        j["linkings"].push_back(jl);
    }
    return j;
}

MallNet mallnet_from_json(const json& j, LocGen& gen) {
    MallNet net;
    for (const auto& c : j.at("sequent").at("concs"))
        net.seq.concs.push_back(parse_formula(c.get<std::string>(), gen));
    if (j.at("sequent").contains("hyps"))
        for (const auto& h : j.at("sequent").at("hyps"))
            net.seq.hyp_locs.push_back(
                formula_by_path(net.seq.concs, h.get<std::string>())->loc);
    // resolve leaf paths against the forest (which needs the hypotheses known)
    Forest f = build_forest(net.seq);
    for (const auto& jl : j.at("linkings")) {
        Linking l;
        for (const auto& pair : jl) {
            auto a = f.leaf_by_path(pair.at(0).get<std::string>());
            auto b = f.leaf_by_path(pair.at(1).get<std::string>());
            if (!a || !b) throw MallError("BadLinking", "link on unknown leaf path");
            AxLink link{f.nodes[*a].loc, f.nodes[*b].loc};
            if (link.b < link.a) std::swap(link.a, link.b);
            l.push_back(link);
        }
        net.linkings.push_back(l);
    }
    canonicalize(net);
    return net;
}

json path_to_json(const Path& p) {
    json j = json::array();
    j.push_back(p.g->vertex_name(p.verts[0]));
    for (size_t i = 0; i < p.edges.size(); ++i) {
        j.push_back(p.g->edge_name(p.edges[i]));
        j.push_back(p.g->vertex_name(p.verts[i + 1]));
    }
    return j;
}

}  // namespace proofweave
