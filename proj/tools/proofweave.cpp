#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "proofweave/json_io.hpp"
#include "proofweave/oracle.hpp"
#include "proofweave/sexpr.hpp"

using namespace proofweave;

namespace {

// ---------------------------------------------------------------------------
// sha256, for generator manifests

struct Sha256 {
    uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                     0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    static constexpr uint32_t k[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};

    static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const uint8_t* p) {
        uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (uint32_t(p[4 * i]) << 24) | (uint32_t(p[4 * i + 1]) << 16) |
                   (uint32_t(p[4 * i + 2]) << 8) | uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6],
                 hh = h[7];
        for (int i = 0; i < 64; ++i) {
            uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            uint32_t ch = (e & f) ^ (~e & g);
            uint32_t t1 = hh + s1 + ch + k[i] + w[i];
            uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            uint32_t t2 = s0 + maj;
            hh = g;
            g = f;
            f = e;
            e = d + t1;
            d = c;
            c = b;
            b = a;
            a = t1 + t2;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
        h[5] += f;
        h[6] += g;
        h[7] += hh;
    }

    std::string hex(const std::string& data) {
        std::string msg = data;
        uint64_t bits = uint64_t(data.size()) * 8;
        msg.push_back(char(0x80));
        while (msg.size() % 64 != 56) msg.push_back('\0');
        for (int i = 7; i >= 0; --i) msg.push_back(char((bits >> (8 * i)) & 0xff));
        for (size_t i = 0; i < msg.size(); i += 64)
            block(reinterpret_cast<const uint8_t*>(msg.data() + i));
        std::ostringstream os;
        for (uint32_t word : h) {
            for (int i = 7; i >= 0; --i) os << "0123456789abcdef"[(word >> (4 * i)) & 0xf];
        }
        return os.str();
    }
};
constexpr uint32_t Sha256::k[64];

std::string sha256_hex(const std::string& data) { return Sha256().hex(data); }

// ---------------------------------------------------------------------------

std::string fixture_dir() {
    const char* env = std::getenv("PROOFWEAVE_FIXTURES");
    return env ? env : "fixtures";
}

std::string resolve_input(const std::string& arg) {
    std::ifstream probe(arg);
    if (probe.good()) return arg;
    std::string alt =
        fixture_dir() + "/" + arg + (arg.find('.') == std::string::npos ? ".json" : "");
    std::ifstream probe2(alt);
    if (probe2.good()) return alt;
    throw BuildError("NoSuchFile", "cannot open " + arg);
}

json read_json(const std::string& path) {
    std::ifstream in(resolve_input(path));
    json j;
    in >> j;
    return j;
}

std::string read_text(const std::string& path) {
    std::ifstream in(resolve_input(path));
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
    }
}

int cmd_graph_check(const std::string& file) {
    LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(read_json(file)));
    json rep;
    rep["vertices"] = g.vertex_count();
    rep["edges"] = g.edge_count();
    rep["colors"] = g.color_count();
    rep["components"] = connected_components(g).size();
    json cps = json::array();
    for (const VertexColorPair& cp : cusp_points(g))
        cps.push_back({{"vertex", g.vertex_name(cp.v)}, {"color", g.color_name(cp.color)}});
    rep["cuspPoints"] = cps;
    auto cyc = find_cuspfree_cycle(g);
    rep["cuspFreeCycle"] = cyc ? path_to_json(*cyc) : json(nullptr);
    emit(rep, "");
    return cyc ? 1 : 0;
}

int cmd_graph_split(const std::string& file) {
    LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(read_json(file)));
    json rep;
    json names = json::array();
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (is_splitting(g, v)) names.push_back(g.vertex_name(v));
    rep["splitting"] = names;
    ParamSplit r = find_splitting_param(g, all_pairs(g));
    switch (r.status) {
        case ParamSplit::Status::Found:
            rep["param"] = {{"vertex", g.vertex_name(r.vertex)},
                            {"pair",
                             {{"vertex", g.vertex_name(r.pair.v)},
                              {"color", g.color_name(r.pair.color)}}}};
            break;
        case ParamSplit::Status::CuspFreeCycleExists:
            rep["param"] = {{"error", "CuspFreeCycleExists"},
                            {"witness", path_to_json(*r.witness_cycle)}};
            break;
        case ParamSplit::Status::NoPairs:
            rep["param"] = {{"error", "NoPairs"}};
            break;
        case ParamSplit::Status::DominationFails:
            rep["param"] = {{"error", "DominationFails"}};
            break;
    }
    emit(rep, "");
    return 0;
}

int cmd_graph_corollary(const std::string& name, const std::string& file,
                        const std::string& aux_file) {
    json input = read_json(file);
    json aux = aux_file.empty() ? json::object() : read_json(aux_file);
    json rep;
    try {
        if (name == "encode") {
            LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(input));
            Encoding enc = encode_local_as_edge(g);
            rep["graph"] = graph_to_json(enc.graph);
            rep["added"] = enc.added;
        } else if (name == "yeo") {
            LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(input));
            EdgeColoring ec;
            for (const auto& [k, v] : aux.at("coloring").items())
                ec[k] = v.get<std::string>();
            Vertex v = yeo_classic(g, ec);
            rep["vertex"] = g.vertex_name(v);
            rep["revalidated"] = yeo_conclusion_holds(g, ec, v);
        } else if (name == "kotzig") {
            LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(input));
            std::vector<std::string> f;
            for (const auto& e : aux.at("matching")) f.push_back(e.get<std::string>());
            Edge e = kotzig(g, f);
            rep["edge"] = g.edge_name(e);
            rep["bridge"] = is_bridge(g, e);
        } else if (name == "seymour-giles") {
            LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(input));
            std::map<std::string, std::string> phi;
            for (const auto& [k, v] : aux.at("phi").items()) phi[k] = v.get<std::string>();
            Vertex v = seymour_giles(g, phi);
            rep["vertex"] = g.vertex_name(v);
            rep["phiEdge"] = phi.at(g.vertex_name(v));
            rep["bridge"] = is_bridge(g, *g.edge_index(phi.at(g.vertex_name(v))));
        } else if (name == "grossman-haggkvist") {
            LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(input));
            EdgeColoring ec;
            for (const auto& [k, v] : aux.at("coloring").items())
                ec[k] = v.get<std::string>();
            auto res = grossman_haggkvist(g, ec);
            if (std::holds_alternative<Vertex>(res))
                rep["vertex"] = g.vertex_name(std::get<Vertex>(res));
            else
                rep["alternatingCycle"] = path_to_json(std::get<Path>(res));
        } else if (name == "shoesmith-smiley") {
            DirectedGraphView g = directed_from_json(input);
            std::vector<std::string> s;
            for (const auto& v : aux.at("S")) s.push_back(v.get<std::string>());
            Vertex v = shoesmith_smiley(g, s);
            rep["vertex"] = g.graph.vertex_name(v);
            rep["revalidated"] = turning_in_every_cycle(g, v);
        } else if (name == "h-yeo") {
            LocallyColoredGraph g = LocallyColoredGraph::build(graph_spec_from_json(input));
            EdgeColoring ec;
            for (const auto& [k, v] : aux.at("coloring").items())
                ec[k] = v.get<std::string>();
            PatternGraph h;
            for (const auto& c : aux.at("H").at("vertices"))
                h.colors.push_back(c.get<std::string>());
            for (const auto& e : aux.at("H").at("edges"))
                h.edges.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
            Vertex v = h_yeo(g, ec, h);
            rep["vertex"] = g.vertex_name(v);
        } else {
            std::cerr << "unknown corollary " << name << "\n";
            return 2;
        }
    } catch (const CorollaryError& err) {
        rep["error"] = {{"code", err.code}, {"message", err.what()}};
        if (err.witness) rep["error"]["witness"] = path_to_json(*err.witness);
        emit(rep, "");
        return 1;
    }
    emit(rep, "");
    return 0;
}

int cmd_mll_check(const std::string& file) {
    ProofStructure ps = validate_ps(raw_ps_from_json(read_json(file)));
    DrReport rep = dr_check(ps);
    json out;
    out["correct"] = rep.correct;
    if (rep.correct)
        out["degree"] = rep.degree;
    else
        out["witness"] = path_to_json(*rep.switching_cycle);
    emit(out, "");
    return rep.correct ? 0 : 1;
}

int cmd_mll_seq(const std::string& file, const std::string& strategy,
                const std::string& format) {
    ProofStructure ps = validate_ps(raw_ps_from_json(read_json(file)));
    auto s = mll_strategy_from(strategy);
    if (!s) {
        std::cerr << "unknown strategy " << strategy << "\n";
        return 2;
    }
    try {
        Deriv d = sequentialize(ps, *s);
        if (format == "text")
            std::cout << render_derivation_text(d);
        else if (format == "json")
            std::cout << json({{"derivation", render_derivation_sexpr(d)}}).dump(2) << "\n";
        else
            std::cout << render_derivation_sexpr(d) << "\n";
        return 0;
    } catch (const PsError& err) {
        if (err.code == "NotCorrect") {
            std::cout << json({{"error", err.code}}).dump(2) << "\n";
            return 1;
        }
        throw;
    }
}

int cmd_mll_deseq(const std::string& file) {
    LocGen gen;
    Deriv d = parse_derivation_sexpr(read_text(file), gen);
    if (!derivation_is_mll(d)) {
        std::cerr << "NotMll: derivation uses additive rules\n";
        return 2;
    }
    emit(ps_to_json(desequentialize(d).ps), "");
    return 0;
}

int cmd_mall_check(const std::string& file, bool connected) {
    LocGen gen;
    MallNet net = mallnet_from_json(read_json(file), gen);
    CriterionReport rep = check_criterion(net, connected);
    json out;
    out["P1"] = rep.p1;
    out["P2"] = rep.p2;
    out["P3"] = rep.p3;
    if (!rep.p1) out["P1witness"] = rep.p1_witness;
    if (!rep.p2) out["P2witness"] = rep.p2_witness;
    if (!rep.p3) out["P3witness"] = rep.p3_witness;
    if (connected) {
        out["P2c"] = rep.p2c;
        if (!rep.p2c) out["P2cWitness"] = rep.p2c_witness;
    }
    emit(out, "");
    return rep.all() ? 0 : 1;
}

int cmd_mall_seq(const std::string& file, const std::string& strategy,
                 const std::string& format) {
    LocGen gen;
    MallNet net = mallnet_from_json(read_json(file), gen);
    auto s = mall_strategy_from(strategy);
    if (!s) {
        std::cerr << "unknown strategy " << strategy << "\n";
        return 2;
    }
    try {
        Deriv d = sequentialize_mall(net, *s);
        if (format == "text")
            std::cout << render_derivation_text(d);
        else if (format == "json")
            std::cout << json({{"derivation", render_derivation_sexpr(d)}}).dump(2) << "\n";
        else
            std::cout << render_derivation_sexpr(d) << "\n";
        return 0;
    } catch (const MallError& err) {
        if (err.code == "NotCorrect") {
            std::cout << json({{"error", err.code}}).dump(2) << "\n";
            return 1;
        }
        throw;
    }
}

int cmd_mall_deseq(const std::string& file) {
    LocGen gen;
    Deriv d = parse_derivation_sexpr(read_text(file), gen);
    try {
        emit(mallnet_to_json(desequentialize_mall(d)), "");
        return 0;
    } catch (const MallError& err) {
        std::cout << json({{"error", err.code}}).dump(2) << "\n";
        return 1;
    }
}

int cmd_oracle_verify(uint64_t seed, int count, int max_vertices) {
    bool ok = true;

    {
        GeneratorConfig cfg;
        cfg.max_vertices = max_vertices;
        cfg.max_edges = max_vertices + 2;
        cfg.max_colors = 4;
        int fail = 0;
        for (int i = 0; i < count; ++i) {
            cfg.seed = seed + static_cast<uint64_t>(i);
            LocallyColoredGraph g = generate_graph(cfg);
            auto oracle = brute_splitting(g);
            std::vector<Vertex> engine;
            for (Vertex v = 0; v < g.vertex_count(); ++v)
                if (is_splitting(g, v)) engine.push_back(v);
            if (engine != oracle) ++fail;
        }
        std::cout << "splitting-agreement: " << (fail ? "FAIL" : "PASS") << " (" << count
                  << " graphs)\n";
        ok = ok && !fail;
    }
    {
        GeneratorConfig cfg;
        cfg.max_rules = 12;
        int fail = 0;
        for (int i = 0; i < count; ++i) {
            cfg.seed = seed + static_cast<uint64_t>(i);
            LocGen gen;
            Deriv d = generate_mll_derivation(cfg, gen);
            ProofStructure ps = desequentialize(d).ps;
            DrReport a = dr_check(ps);
            SwitchingsReport b = brute_switchings(ps);
            if (a.correct != b.correct || (a.correct && a.degree != b.degree)) ++fail;
        }
        std::cout << "dr-vs-switchings: " << (fail ? "FAIL" : "PASS") << " (" << count
                  << " derivations)\n";
        ok = ok && !fail;
    }
    {
        GeneratorConfig cfg;
        cfg.max_rules = 10;
        cfg.max_with = 1;
        int fail = 0, done = 0;
        for (int i = 0; i < count * 2 && done < count; ++i) {
            cfg.seed = seed + static_cast<uint64_t>(i);
            LocGen gen;
            Deriv d = generate_mall_derivation(cfg, gen);
            MallNet net = desequentialize_mall(d);
            if (net.linkings.size() > 6) continue;
            ++done;
            CriterionReport a = check_criterion(net, false);
            MallBrute b = brute_mall_check(net);
            if (a.p1 != b.p1 || a.p2 != b.p2 || a.p3 != b.p3) ++fail;
        }
        std::cout << "mall-vs-brute: " << (fail ? "FAIL" : "PASS") << " (" << done
                  << " nets)\n";
        ok = ok && !fail;
    }
    return ok ? 0 : 1;
}

int cmd_gen(const std::string& kind, uint64_t seed, int max_vertices, int max_edges,
            int max_colors, int max_rules, const std::string& out_path) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.max_vertices = max_vertices;
    cfg.max_edges = max_edges;
    cfg.max_colors = max_colors;
    cfg.max_rules = max_rules;
    json fixture;
    if (kind == "graph") {
        fixture = graph_to_json(generate_graph(cfg));
    } else if (kind == "mll-derivation") {
        LocGen gen;
        fixture = render_derivation_sexpr(generate_mll_derivation(cfg, gen));
    } else if (kind == "mall-derivation") {
        LocGen gen;
        fixture = render_derivation_sexpr(generate_mall_derivation(cfg, gen));
    } else if (kind == "matching-instance") {
        MatchingInstance inst = generate_matching_instance(cfg);
        fixture = {{"graph", graph_to_json(inst.graph)}, {"matching", inst.matching}};
    } else {
        std::cerr << "unknown kind " << kind << "\n";
        return 2;
    }
    json out;
    out["fixture"] = fixture;
    out["manifest"] = {{"seed", seed},
                       {"config",
                        {{"maxVertices", max_vertices},
                         {"maxEdges", max_edges},
                         {"maxColors", max_colors},
                         {"maxRules", max_rules},
                         {"kind", kind}}},
                       {"sha256", sha256_hex(fixture.dump())}};
    emit(out, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"locally colored graphs, Yeo splittings, and proof net sequentialization"};
    app.require_subcommand(1);

    std::string file, aux, strategy = "all-pairs", format = "sexpr", name, kind = "graph",
                      out_path;
    uint64_t seed = 1;
    int count = 50, max_vertices = 8, max_edges = 10, max_colors = 3, max_rules = 12;
    bool connected = false;

    auto* graph = app.add_subcommand("graph", "locally colored graph operations");
    graph->require_subcommand(1);
    auto* gcheck = graph->add_subcommand("check", "validate and report cusp structure");
    gcheck->add_option("file", file)->required();
    auto* gsplit = graph->add_subcommand("split", "splitting vertices and the maximal pair");
    gsplit->add_option("file", file)->required();
    auto* gcor = graph->add_subcommand("corollary", "run a classical corollary");
    gcor->add_option("name", name)->required();
    gcor->add_option("file", file)->required();
    gcor->add_option("--aux", aux, "per-theorem auxiliary JSON");

    auto* mll = app.add_subcommand("mll", "multiplicative proof structures");
    mll->require_subcommand(1);
    auto* mcheck = mll->add_subcommand("check", "Danos-Regnier correctness");
    mcheck->add_option("file", file)->required();
    auto* mseq = mll->add_subcommand("seq", "sequentialize");
    mseq->add_option("file", file)->required();
    mseq->add_option("--strategy", strategy, "all-pairs|sections|terminal|non-ax|direct-par");
    mseq->add_option("--format", format, "json|text|sexpr");
    auto* mdeseq = mll->add_subcommand("deseq", "desequentialize an s-expression derivation");
    mdeseq->add_option("file", file)->required();

    auto* mall = app.add_subcommand("mall", "multiplicative-additive proof nets");
    mall->require_subcommand(1);
    auto* acheck = mall->add_subcommand("check", "P1-P3 criterion");
    acheck->add_option("file", file)->required();
    acheck->add_flag("--connected", connected, "also check the connected variant");
    auto* aseq = mall->add_subcommand("seq", "sequentialize");
    aseq->add_option("file", file)->required();
    aseq->add_option("--strategy", strategy, "any|pw|terminal|non-ax");
    aseq->add_option("--format", format, "json|text|sexpr");
    auto* adeseq = mall->add_subcommand("deseq", "desequentialize an s-expression derivation");
    adeseq->add_option("file", file)->required();

    auto* verify = app.add_subcommand("oracle-verify", "engine vs brute-force agreement");
    verify->add_option("--seed", seed);
    verify->add_option("--count", count);
    verify->add_option("--max-vertices", max_vertices);

    auto* gen = app.add_subcommand("gen", "deterministic fixture generation");
    gen->add_option("--kind", kind, "graph|mll-derivation|mall-derivation|matching-instance");
    gen->add_option("--seed", seed);
    gen->add_option("--max-vertices", max_vertices);
    gen->add_option("--max-edges", max_edges);
    gen->add_option("--max-colors", max_colors);
    gen->add_option("--max-rules", max_rules);
    gen->add_option("-o,--output", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gcheck->parsed()) return cmd_graph_check(file);
        if (gsplit->parsed()) return cmd_graph_split(file);
        if (gcor->parsed()) return cmd_graph_corollary(name, file, aux);
        if (mcheck->parsed()) return cmd_mll_check(file);
        if (mseq->parsed()) return cmd_mll_seq(file, strategy, format);
        if (mdeseq->parsed()) return cmd_mll_deseq(file);
        if (acheck->parsed()) return cmd_mall_check(file, connected);
        if (aseq->parsed()) return cmd_mall_seq(file, strategy, format);
        if (adeseq->parsed()) return cmd_mall_deseq(file);
        if (verify->parsed()) return cmd_oracle_verify(seed, count, max_vertices);
        if (gen->parsed())
            return cmd_gen(kind, seed, max_vertices, max_edges, max_colors, max_rules,
                           out_path);
    } catch (const BuildError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const PsError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const MallError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const DerivError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const FormulaError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const CorollaryError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const OracleError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "InvalidJson: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
