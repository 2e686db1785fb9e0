#include "proofweave/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace proofweave {

namespace {

std::string cycle_key(const LocallyColoredGraph& g, const Path& cycle) {
    std::vector<std::string> ids;
    for (Edge e : cycle.edges) ids.push_back(g.edge_name(e));
    auto min_rotation = [](std::vector<std::string> v) {
        std::vector<std::string> best = v;
        for (size_t r = 1; r < v.size(); ++r) {
            std::rotate(v.begin(), v.begin() + 1, v.end());
            if (v < best) best = v;
        }
        return best;
    };
    std::vector<std::string> fwd = min_rotation(ids);
    std::reverse(ids.begin(), ids.end());
    std::vector<std::string> bwd = min_rotation(ids);
    const std::vector<std::string>& best = fwd < bwd ? fwd : bwd;
    std::string key;
    for (const auto& s : best) {
        key += s;
        key += '|';
    }
    return key;
}

}  // namespace

namespace {

std::vector<Path> enumerate_cycles_impl(const LocallyColoredGraph& g);

}  // namespace

std::vector<Path> enumerate_cycles(const LocallyColoredGraph& g) {
    if (g.vertex_count() > 14) throw OracleError("TooLarge", "cycle enumeration beyond 14 vertices");
    return enumerate_cycles_impl(g);
}

namespace {

std::vector<Path> enumerate_cycles_impl(const LocallyColoredGraph& g) {
    std::vector<Path> out;
    std::set<std::string> seen;
    for (Vertex s = 0; s < g.vertex_count(); ++s) {
        std::vector<char> visited(g.vertex_count(), 0);
        visited[s] = 1;
        Path path;
        path.g = &g;
        path.verts = {s};
        std::function<void()> step = [&]() {
            Vertex at = path.verts.back();
            for (Edge e : g.edges_at(at)) {
                auto w = g.other_end(e, at);
                if (!w || *w < s) continue;
                if (*w == s && !path.edges.empty() && e != path.edges.front()) {
                    Path cycle = path;
                    cycle.edges.push_back(e);
                    cycle.verts.push_back(s);
                    if (seen.insert(cycle_key(g, cycle)).second) out.push_back(cycle);
                }
                if (visited[*w]) continue;
                path.edges.push_back(e);
                path.verts.push_back(*w);
                visited[*w] = 1;
                step();
                visited[*w] = 0;
                path.verts.pop_back();
                path.edges.pop_back();
            }
        };
        step();
    }
    return out;
}

}  // namespace

bool brute_is_splitting(const LocallyColoredGraph& g, Vertex v) {
    for (const Path& cycle : enumerate_cycles(g)) {
        if (!cycle.contains_vertex(v)) continue;
        // locate v on the cycle and check the two surrounding edges
        bool cusp = false;
        int n = cycle.length();
        for (int i = 0; i < n; ++i) {
            if (cycle.verts[i] != v) continue;
            Edge left = i == 0 ? cycle.edges[n - 1] : cycle.edges[i - 1];
            Edge right = cycle.edges[i];
            if (left != right && g.color_at(left, v) == g.color_at(right, v)) cusp = true;
            break;
        }
        if (!cusp) return false;
    }
    return true;
}

std::vector<Vertex> brute_splitting(const LocallyColoredGraph& g) {
    std::vector<Path> cycles = enumerate_cycles(g);
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        bool split = true;
        for (const Path& cycle : cycles) {
            if (!cycle.contains_vertex(v)) continue;
            bool cusp = false;
            int n = cycle.length();
            for (int i = 0; i < n; ++i) {
                if (cycle.verts[i] != v) continue;
                Edge left = i == 0 ? cycle.edges[n - 1] : cycle.edges[i - 1];
                Edge right = cycle.edges[i];
                if (left != right && g.color_at(left, v) == g.color_at(right, v)) cusp = true;
                break;
            }
            if (!cusp) {
                split = false;
                break;
            }
        }
        if (split) out.push_back(v);
    }
    return out;
}

SwitchingsReport brute_switchings(const ProofStructure& ps) {
    SwitchingsReport rep;
    std::vector<int> pars;
    for (int v = 0; v < ps.vcount(); ++v)
        if (ps.kinds[v] == VKind::Par) pars.push_back(v);
    if (pars.size() > 12) throw OracleError("TooLarge", "too many par-vertices");
    int k = static_cast<int>(pars.size());
    rep.switchings = 1 << k;
    rep.correct = true;
    int degree = -1;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        // correctness graph: drop one premise target per par
        std::set<int> dropped;
        for (int i = 0; i < k; ++i) {
            auto prem = ps.premises(pars[i]);
            dropped.insert(prem[(mask >> i) & 1]);
        }
        GraphSpec spec;
        spec.vertices = ps.vnames;
        spec.colors = {"k"};
        for (int e = 0; e < ps.ecount(); ++e) {
            GraphSpec::EdgeSpec es;
            es.id = ps.enames[e];
            if (ps.esrc[e] >= 0) es.ends.push_back({ps.vnames[ps.esrc[e]], "k"});
            if (ps.etgt[e] >= 0 && !dropped.count(e))
                es.ends.push_back({ps.vnames[ps.etgt[e]], "k"});
            spec.edges.push_back(std::move(es));
        }
        LocallyColoredGraph g = LocallyColoredGraph::build(spec);
        // acyclic: adding total edges must never join two already-joined vertices
        std::vector<int> parent(g.vertex_count());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        bool acyclic = true;
        for (Edge e = 0; e < g.edge_count(); ++e) {
            if (!g.is_total(e)) continue;
            int a = find(g.ends(e)[0].v), b = find(g.ends(e)[1].v);
            if (a == b) {
                acyclic = false;
                break;
            }
            parent[a] = b;
        }
        if (!acyclic) {
            rep.correct = false;
            return rep;
        }
        int comps = static_cast<int>(connected_components(g).size());
        if (degree < 0) degree = comps;
        if (degree != comps) throw OracleError("Inconsistent", "degree varies across switchings");
    }
    rep.degree = ps.empty() ? 0 : degree;
    return rep;
}

namespace {

// Explicit switching-cycle search: enumerates simple cycles of the linking
// graph and counts switch edges per par/with vertex.
bool has_switching_cycle(const CheckedNet& cn, const LinkingGraph& lg,
                         int through_node /* -1 = anywhere */) {
    const LocallyColoredGraph& g = lg.colored;
    auto is_pw = [&](Vertex v) {
        const std::string& n = g.vertex_name(v);
        if (n.rfind("n:", 0) != 0) return false;
        FKind k = cn.forest.nodes[cn.forest.node_by_path.at(n.substr(2))].kind;
        return k == FKind::Par || k == FKind::With;
    };
    auto is_switch_edge = [&](Edge e, Vertex pw) {
        // premise of pw (edge named c:<child> or h:<path> with target pw) or jump
        const std::string& nm = g.edge_name(e);
        const std::string& vn = g.vertex_name(pw);
        std::string path = vn.substr(2);
        if (nm.rfind("j:", 0) == 0) return nm.substr(nm.find('>') + 1) == path;
        if (nm.rfind("c:", 0) == 0 || nm.rfind("h:", 0) == 0)
            return nm.substr(2) != path;  // not its own conclusion: a premise
        return false;
    };
    auto cycle_is_switching = [&](const Path& cycle) {
        int n = cycle.length();
        for (int i = 0; i < n; ++i) {
            Vertex v = cycle.verts[i];
            if (!is_pw(v)) continue;
            Edge left = i == 0 ? cycle.edges[n - 1] : cycle.edges[i - 1];
            Edge right = cycle.edges[i];
            int c = 0;
            if (is_switch_edge(left, v)) ++c;
            if (is_switch_edge(right, v)) ++c;
            if (c > 1) return false;
        }
        return true;
    };
    for (const Path& cycle : enumerate_cycles_impl(g)) {
        if (through_node >= 0) {
            Vertex wv = *g.vertex_index("n:" + cn.forest.nodes[through_node].path);
            if (!cycle.contains_vertex(wv)) continue;
        }
        if (cycle_is_switching(cycle)) return true;
    }
    return false;
}

}  // namespace

MallBrute brute_mall_check(const MallNet& net) {
    MallBrute rep;
    CheckedNet cn = check_linkings(net);
    int with_count = 0;
    for (const auto& n : cn.forest.nodes)
        if (n.kind == FKind::With) ++with_count;
    if (with_count > 5 || cn.net.linkings.size() > 6)
        throw OracleError("TooLarge", "brute MALL check beyond desk scale");

    // P1: literally one linking on each with-resolution (the linking's whole
    // additive resolution, hypothesis edges included, must survive in it)
    rep.p1 = true;
    for (const Resolution& r : cn.withres) {
        int count = 0;
        for (size_t i = 0; i < cn.net.linkings.size(); ++i) {
            const Resolution& mine = cn.additive[cn.res_of_linking[i]];
            bool on = true;
            for (size_t n = 0; n < cn.forest.nodes.size(); ++n)
                if (mine.kept[n] && !r.kept[n]) on = false;
            for (size_t hi = 0; hi < cn.forest.hyps.size() && on; ++hi) {
                int parent = cn.forest.hyps[hi].parent;
                if (parent < 0) continue;
                if (!r.kept[parent]) {
                    on = false;
                    break;
                }
                const auto& p = cn.forest.nodes[parent];
                if (p.kind == FKind::With || p.kind == FKind::Plus) {
                    auto it = r.additive_choice.find(parent);
                    int side = p.hyp_l == static_cast<int>(hi) ? 0 : 1;
                    if (it != r.additive_choice.end() && it->second != side) on = false;
                }
            }
            if (on) ++count;
        }
        if (count != 1) rep.p1 = false;
    }

    // P2: no switching cycle in any single-linking graph
    rep.p2 = true;
    for (size_t i = 0; i < cn.net.linkings.size(); ++i) {
        LinkingGraph lg = build_linking_graph(cn, {static_cast<int>(i)});
        if (has_switching_cycle(cn, lg, -1)) rep.p2 = false;
    }

    // P3: literal subset enumeration
    rep.p3 = true;
    int m = static_cast<int>(cn.net.linkings.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (__builtin_popcount(mask) < 2) continue;
        std::vector<int> subset;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) subset.push_back(i);
        LinkingGraph lg = build_linking_graph(cn, subset);
        Toggling tog = toggling_analysis(cn, subset);
        bool ok = false;
        for (int w : tog.toggled)
            if (!has_switching_cycle(cn, lg, w)) ok = true;
        if (!ok) rep.p3 = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Generators

LocallyColoredGraph generate_graph(const GeneratorConfig& cfg) {
    Rng rng(cfg.seed * 2654435761u + 17);
    GraphSpec spec;
    int nv = 1 + rng.below(std::max(1, cfg.max_vertices));
    int nc = 1 + rng.below(std::max(1, cfg.max_colors));
    for (int i = 0; i < nv; ++i) spec.vertices.push_back("v" + std::to_string(i));
    for (int i = 0; i < nc; ++i) spec.colors.push_back("c" + std::to_string(i));
    int ne = rng.below(cfg.max_edges + 1);
    for (int i = 0; i < ne; ++i) {
        GraphSpec::EdgeSpec e;
        e.id = "e" + std::to_string(i);
        if (cfg.allow_partial && rng.chance(10)) {
            if (rng.chance(50))
                e.ends.push_back({spec.vertices[rng.below(nv)],
                                  spec.colors[rng.below(nc)]});
        } else if (nv >= 2) {
            int a = rng.below(nv);
            int b = rng.below(nv - 1);
            if (b >= a) ++b;
            e.ends.push_back({spec.vertices[a], spec.colors[rng.below(nc)]});
            e.ends.push_back({spec.vertices[b], spec.colors[rng.below(nc)]});
        } else {
            continue;  // a single vertex admits no total edge
        }
        spec.edges.push_back(std::move(e));
    }
    return LocallyColoredGraph::build(spec);
}

namespace {

Formula random_formula(Rng& rng, LocGen& gen, int atoms, int depth, bool mall) {
    if (depth <= 0 || rng.chance(55)) {
        std::string name = "X" + std::to_string(rng.below(atoms));
        return rng.chance(50) ? mk_atom(name, gen.fresh()) : mk_natom(name, gen.fresh());
    }
    FKind kinds_mll[] = {FKind::Tensor, FKind::Par};
    FKind kinds_mall[] = {FKind::Tensor, FKind::Par, FKind::With, FKind::Plus};
    FKind k = mall ? kinds_mall[rng.below(4)] : kinds_mll[rng.below(2)];
    Formula l = random_formula(rng, gen, atoms, depth - 1, mall);
    Formula r = random_formula(rng, gen, atoms, depth - 1, mall);
    return mk_bin(k, l, r, gen.fresh());
}

}  // namespace

Deriv generate_mll_derivation(const GeneratorConfig& cfg, LocGen& gen) {
    Rng rng(cfg.seed * 0x9e3779b9u + 29);
    std::vector<Deriv> pool;
    auto add_ax = [&]() {
        std::string name = "X" + std::to_string(rng.below(cfg.atoms));
        pool.push_back(d_ax(mk_atom(name, gen.fresh()), gen));
    };
    add_ax();
    int rules = 1;
    while (rules < cfg.max_rules) {
        int op = rng.below(10);
        if (op < 2) {
            add_ax();
            ++rules;
        } else if (op == 2 && cfg.allow_hyp) {
            pool.push_back(d_hyp(random_formula(rng, gen, cfg.atoms, 2, false)));
            ++rules;
        } else if (op == 3 && cfg.allow_mix && rng.chance(25)) {
            pool.push_back(d_mix0());
            ++rules;
        } else if (op <= 5) {
            // par on some derivation with >= 2 conclusions
            std::vector<int> cands;
            for (size_t i = 0; i < pool.size(); ++i)
                if (pool[i]->conclusion.size() >= 2) cands.push_back(static_cast<int>(i));
            if (cands.empty()) {
                add_ax();
                ++rules;
                continue;
            }
            int pi = cands[rng.below(static_cast<int>(cands.size()))];
            const Deriv& d = pool[pi];
            int n = static_cast<int>(d->conclusion.size());
            int i = rng.below(n);
            int j = rng.below(n - 1);
            if (j >= i) ++j;
            pool[pi] = d_par(d, d->conclusion[i], d->conclusion[j], gen.fresh());
            ++rules;
        } else if (op <= 7 && pool.size() >= 2) {
            int a = rng.below(static_cast<int>(pool.size()));
            int b = rng.below(static_cast<int>(pool.size()) - 1);
            if (b >= a) ++b;
            Deriv da = pool[a], db = pool[b];
            if (da->conclusion.empty() || db->conclusion.empty()) {
                if (cfg.allow_mix) {
                    Deriv m = d_mix2(da, db);
                    pool.erase(pool.begin() + std::max(a, b));
                    pool.erase(pool.begin() + std::min(a, b));
                    pool.push_back(m);
                    ++rules;
                }
                continue;
            }
            Formula fa = da->conclusion[rng.below(static_cast<int>(da->conclusion.size()))];
            Formula fb = db->conclusion[rng.below(static_cast<int>(db->conclusion.size()))];
            Deriv t = d_tensor(da, fa, db, fb, gen.fresh());
            pool.erase(pool.begin() + std::max(a, b));
            pool.erase(pool.begin() + std::min(a, b));
            pool.push_back(t);
            ++rules;
        } else if (op == 8 && cfg.allow_cut && !pool.empty()) {
            int a = rng.below(static_cast<int>(pool.size()));
            Deriv da = pool[a];
            if (da->conclusion.empty()) continue;
            Formula fa = da->conclusion[rng.below(static_cast<int>(da->conclusion.size()))];
            Deriv ax = d_ax(relabel(fa, gen), gen);
            // cut da's fa against the dual conclusion of the fresh axiom
            const Formula& negside =
                untagged_dual(fa, ax->conclusion[0]) ? ax->conclusion[0] : ax->conclusion[1];
            Deriv c = d_cut(da, fa, ax, negside);
            pool[a] = c;
            rules += 2;
        } else if (op == 9 && cfg.allow_mix && pool.size() >= 2) {
            int a = rng.below(static_cast<int>(pool.size()));
            int b = rng.below(static_cast<int>(pool.size()) - 1);
            if (b >= a) ++b;
            Deriv m = d_mix2(pool[a], pool[b]);
            pool.erase(pool.begin() + std::max(a, b));
            pool.erase(pool.begin() + std::min(a, b));
            pool.push_back(m);
            ++rules;
        }
    }
    // combine the pool into a single derivation
    while (pool.size() > 1) {
        Deriv a = pool[pool.size() - 2], b = pool[pool.size() - 1];
        pool.pop_back();
        pool.pop_back();
        if (cfg.allow_mix) {
            pool.push_back(d_mix2(a, b));
        } else if (!a->conclusion.empty() && !b->conclusion.empty()) {
            pool.push_back(d_tensor(a, a->conclusion[0], b, b->conclusion[0], gen.fresh()));
        } else {
            pool.push_back(d_mix2(a, b));
        }
    }
    return pool[0];
}

namespace {

// Closed derivation with exactly one conclusion formula.
Deriv gen_single_closed(Rng& rng, LocGen& gen, const GeneratorConfig& cfg, int budget,
                        bool mall) {
    if (budget <= 2 || rng.chance(45)) {
        std::string name = "X" + std::to_string(rng.below(cfg.atoms));
        Deriv ax = d_ax(mk_atom(name, gen.fresh()), gen);
        return d_par(ax, ax->conclusion[0], ax->conclusion[1], gen.fresh());
    }
    int op = rng.below(mall ? 4 : 2);
    switch (op) {
        case 0: {
            Deriv a = gen_single_closed(rng, gen, cfg, budget / 2, mall);
            Deriv b = gen_single_closed(rng, gen, cfg, budget / 2, mall);
            return d_tensor(a, a->conclusion[0], b, b->conclusion[0], gen.fresh());
        }
        case 1: {
            Deriv a = gen_single_closed(rng, gen, cfg, budget - 1, mall);
            Deriv ax = d_ax(mk_atom("X" + std::to_string(rng.below(cfg.atoms)), gen.fresh()), gen);
            Deriv t = d_tensor(a, a->conclusion[0], ax, ax->conclusion[1], gen.fresh());
            return d_par(t, t->conclusion[0], t->conclusion[1], gen.fresh());
        }
        case 2: {
            Deriv a = gen_single_closed(rng, gen, cfg, budget / 2, mall);
            Deriv b = gen_single_closed(rng, gen, cfg, budget / 2, mall);
            return d_with(a, a->conclusion[0], b, b->conclusion[0], gen.fresh());
        }
        default: {
            Deriv a = gen_single_closed(rng, gen, cfg, budget - 1, mall);
            Formula other = random_formula(rng, gen, cfg.atoms, 1, true);
            return rng.chance(50) ? d_plus1(a, a->conclusion[0], other, gen.fresh())
                                  : d_plus2(a, a->conclusion[0], other, gen.fresh());
        }
    }
}

}  // namespace

Deriv generate_mall_derivation(const GeneratorConfig& cfg, LocGen& gen) {
    Rng rng(cfg.seed * 0x85ebca6bu + 47);
    std::vector<Deriv> pool;
    int with_used = 0;
    auto add_ax = [&]() {
        std::string name = "X" + std::to_string(rng.below(cfg.atoms));
        pool.push_back(d_ax(mk_atom(name, gen.fresh()), gen));
    };
    add_ax();
    int rules = 1;
    while (rules < cfg.max_rules) {
        int op = rng.below(12);
        if (op < 2) {
            add_ax();
            ++rules;
        } else if (op == 2 && cfg.allow_hyp) {
            pool.push_back(d_hyp(random_formula(rng, gen, cfg.atoms, 2, true)));
            ++rules;
        } else if (op <= 4) {
            std::vector<int> cands;
            for (size_t i = 0; i < pool.size(); ++i)
                if (pool[i]->conclusion.size() >= 2) cands.push_back(static_cast<int>(i));
            if (cands.empty()) {
                add_ax();
                ++rules;
                continue;
            }
            int pi = cands[rng.below(static_cast<int>(cands.size()))];
            const Deriv& d = pool[pi];
            int n = static_cast<int>(d->conclusion.size());
            int i = rng.below(n);
            int j = rng.below(n - 1);
            if (j >= i) ++j;
            pool[pi] = d_par(d, d->conclusion[i], d->conclusion[j], gen.fresh());
            ++rules;
        } else if (op <= 6 && pool.size() >= 2) {
            int a = rng.below(static_cast<int>(pool.size()));
            int b = rng.below(static_cast<int>(pool.size()) - 1);
            if (b >= a) ++b;
            Deriv da = pool[a], db = pool[b];
            if (da->conclusion.empty() || db->conclusion.empty()) continue;
            Formula fa = da->conclusion[rng.below(static_cast<int>(da->conclusion.size()))];
            Formula fb = db->conclusion[rng.below(static_cast<int>(db->conclusion.size()))];
            Deriv t = d_tensor(da, fa, db, fb, gen.fresh());
            pool.erase(pool.begin() + std::max(a, b));
            pool.erase(pool.begin() + std::min(a, b));
            pool.push_back(t);
            ++rules;
        } else if (op == 7 && !pool.empty()) {
            int a = rng.below(static_cast<int>(pool.size()));
            const Deriv& d = pool[a];
            if (d->conclusion.empty()) continue;
            Formula fa = d->conclusion[rng.below(static_cast<int>(d->conclusion.size()))];
            Formula other = random_formula(rng, gen, cfg.atoms, 1, true);
            pool[a] = rng.chance(50) ? d_plus1(d, fa, other, gen.fresh())
                                     : d_plus2(d, fa, other, gen.fresh());
            ++rules;
        } else if (op == 8 && with_used < cfg.max_with && !pool.empty()) {
            // with over a shared context: both branches extend the same context
            // derivation with fresh single-conclusion closed proofs
            int a = rng.below(static_cast<int>(pool.size()));
            Deriv g0 = pool[a];
            Deriv e1 = gen_single_closed(rng, gen, cfg, 3, true);
            Deriv e2 = gen_single_closed(rng, gen, cfg, 3, true);
            Deriv left = d_mix2(e1, g0);
            Deriv right = d_mix2(e2, g0);
            pool[a] = d_with(left, e1->conclusion[0], right, e2->conclusion[0], gen.fresh());
            ++with_used;
            rules += 7;
        } else if (op == 9 && with_used < cfg.max_with) {
            // with whose branches link the same four shared atom occurrences
            // straight and crossed; the union graph then carries switching
            // cycles through the doubly-linked leaves
            std::string nm = "X" + std::to_string(rng.below(cfg.atoms));
            Formula n1 = mk_natom(nm, gen.fresh()), p1 = mk_atom(nm, gen.fresh());
            Formula n2 = mk_natom(nm, gen.fresh()), p2 = mk_atom(nm, gen.fresh());
            Deriv straight = d_mix2(d_ax_pair(n1, p1), d_ax_pair(n2, p2));
            Deriv crossed = d_mix2(d_ax_pair(n1, p2), d_ax_pair(n2, p1));
            Deriv e1 = gen_single_closed(rng, gen, cfg, 2, true);
            Deriv e2 = gen_single_closed(rng, gen, cfg, 2, true);
            Deriv left = d_mix2(e1, straight);
            Deriv right = d_mix2(e2, crossed);
            pool.push_back(
                d_with(left, e1->conclusion[0], right, e2->conclusion[0], gen.fresh()));
            ++with_used;
            rules += 10;
        } else if (op <= 11 && cfg.allow_mix && pool.size() >= 2) {
            int a = rng.below(static_cast<int>(pool.size()));
            int b = rng.below(static_cast<int>(pool.size()) - 1);
            if (b >= a) ++b;
            Deriv m = d_mix2(pool[a], pool[b]);
            pool.erase(pool.begin() + std::max(a, b));
            pool.erase(pool.begin() + std::min(a, b));
            pool.push_back(m);
            ++rules;
        }
    }
    while (pool.size() > 1) {
        Deriv a = pool[pool.size() - 2], b = pool[pool.size() - 1];
        pool.pop_back();
        pool.pop_back();
        pool.push_back(d_mix2(a, b));
    }
    return pool[0];
}

MatchingInstance generate_matching_instance(const GeneratorConfig& cfg) {
    Rng rng(cfg.seed * 0xc2b2ae35u + 71);
    GraphSpec spec;
    std::vector<std::string> matching;
    int pairs = 1 + rng.below(std::max(1, cfg.max_vertices / 2));
    int edge_id = 0;
    // grow: each new matched edge hangs the new pendant pair off the existing
    // graph with non-matching edges on one endpoint only
    for (int i = 0; i < pairs; ++i) {
        std::string u = "v" + std::to_string(2 * i);
        std::string w = "v" + std::to_string(2 * i + 1);
        spec.vertices.push_back(u);
        spec.vertices.push_back(w);
        std::string f = "e" + std::to_string(edge_id++);
        spec.edges.push_back({f, {{u, "m"}, {w, "m"}}});
        matching.push_back(f);
        if (i > 0) {
            int extra = 1 + rng.below(2);
            for (int k = 0; k < extra; ++k) {
                std::string to = "v" + std::to_string(rng.below(2 * i));
                std::string g = "e" + std::to_string(edge_id++);
                spec.edges.push_back({g, {{u, "m"}, {to, "m"}}});
            }
        }
    }
    spec.colors = {"m"};
    MatchingInstance out;
    out.graph = LocallyColoredGraph::build(spec);
    out.matching = matching;
    return out;
}

void enumerate_small_graphs(int max_v, int max_e, int max_c,
                            const std::function<void(const LocallyColoredGraph&)>& fn) {
    for (int nv = 0; nv <= max_v; ++nv) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < nv; ++i)
            for (int j = i + 1; j < nv; ++j) pairs.push_back({i, j});
        int np = static_cast<int>(pairs.size());

        std::vector<std::string> vnames, cnames;
        for (int i = 0; i < nv; ++i) vnames.push_back("v" + std::to_string(i));
        for (int c = 0; c < max_c; ++c) cnames.push_back("c" + std::to_string(c));

        for (int ne = 0; ne <= max_e; ++ne) {
            if (ne > 0 && np == 0) continue;
            // multisets of size ne over the pair list
            std::vector<int> edge_pairs(ne, 0);
            std::function<void(int, int)> pick = [&](int pos, int minp) {
                if (pos == ne) {
                    // colorings in restricted growth form over 2*ne slots
                    std::vector<int> colors(2 * ne, 0);
                    std::function<void(int, int)> colr = [&](int slot, int used) {
                        if (slot == 2 * ne) {
                            GraphSpec spec;
                            spec.vertices = vnames;
                            spec.colors.assign(cnames.begin(), cnames.begin() + std::max(used, 1));
                            if (used == 0) spec.colors = {"c0"};
                            for (int e = 0; e < ne; ++e) {
                                GraphSpec::EdgeSpec es;
                                es.id = "e" + std::to_string(e);
                                es.ends.push_back(
                                    {vnames[pairs[edge_pairs[e]].first], cnames[colors[2 * e]]});
                                es.ends.push_back(
                                    {vnames[pairs[edge_pairs[e]].second], cnames[colors[2 * e + 1]]});
                                spec.edges.push_back(std::move(es));
                            }
                            fn(LocallyColoredGraph::build(spec));
                            return;
                        }
                        int limit = std::min(used + 1, max_c);
                        for (int c = 0; c < limit; ++c) {
                            colors[slot] = c;
                            colr(slot + 1, std::max(used, c + 1));
                        }
                    };
                    colr(0, 0);
                    return;
                }
                for (int p = minp; p < np; ++p) {
                    edge_pairs[pos] = p;
                    pick(pos + 1, p);
                }
            };
            pick(0, 0);
        }
    }
}

}  // namespace proofweave
