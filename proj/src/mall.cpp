#include "proofweave/mall.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace proofweave {

void canonicalize(MallNet& net) {
    for (Linking& l : net.linkings) std::sort(l.begin(), l.end());
    std::sort(net.linkings.begin(), net.linkings.end());
    net.linkings.erase(std::unique(net.linkings.begin(), net.linkings.end()),
                       net.linkings.end());
    std::sort(net.seq.hyp_locs.begin(), net.seq.hyp_locs.end());
}

std::optional<int> Forest::leaf_by_path(const std::string& p) const {
    auto it = node_by_path.find(p);
    if (it == node_by_path.end() || !is_leaf(it->second)) return std::nullopt;
    return it->second;
}

Forest build_forest(const MallSequent& seq) {
    Forest f;
    std::set<int> hyp_set(seq.hyp_locs.begin(), seq.hyp_locs.end());
    std::set<int> hyp_used;
    std::set<int> seen_locs;

    std::function<int(const Formula&, int, const std::string&, int)> walk =
        [&](const Formula& fo, int parent, const std::string& path, int root) -> int {
        if (!seen_locs.insert(fo->loc).second)
            throw MallError("LocationClash", "location used twice in the sequent");
        int id = static_cast<int>(f.nodes.size());
        Forest::Node node;
        node.kind = fo->kind;
        node.atom = fo->atom;
        node.loc = fo->loc;
        node.parent = parent;
        node.path = path;
        node.root_index = root;
        f.nodes.push_back(node);
        f.node_by_loc[fo->loc] = id;
        f.node_by_path[path] = id;
        if (!is_atomic(fo)) {
            for (int side = 0; side < 2; ++side) {
                const Formula& child = side == 0 ? fo->left : fo->right;
                std::string cpath = path + (side == 0 ? ".L" : ".R");
                if (hyp_set.count(child->loc)) {
                    hyp_used.insert(child->loc);
                    int h = static_cast<int>(f.hyps.size());
                    f.hyps.push_back({id, child->loc, cpath, root});
                    if (side == 0)
                        f.nodes[id].hyp_l = h;
                    else
                        f.nodes[id].hyp_r = h;
                } else {
                    int c = walk(child, id, cpath, root);
                    if (side == 0)
                        f.nodes[id].child_l = c;
                    else
                        f.nodes[id].child_r = c;
                }
            }
        }
        return id;
    };

    for (size_t i = 0; i < seq.concs.size(); ++i) {
        const Formula& fo = seq.concs[i];
        std::string path = std::to_string(i);
        if (hyp_set.count(fo->loc)) {
            hyp_used.insert(fo->loc);
            f.hyps.push_back({-1, fo->loc, path, static_cast<int>(i)});
            f.roots.push_back(-1);
        } else {
            f.roots.push_back(walk(fo, -1, path, static_cast<int>(i)));
        }
    }
    for (int h : seq.hyp_locs)
        if (!hyp_used.count(h))
            throw MallError("BadHypothesis", "hypothesis location " + std::to_string(h) +
                                                 " is not an occurrence of the sequent");
    return f;
}

namespace {

struct PartialRes {
    std::vector<int> nodes;
    std::map<int, int> choice;
};

std::vector<char> subtree_has_hyp_table(const Forest& f) {
    std::vector<char> out(f.nodes.size(), 0);
    // nodes are stored preorder, so children come after parents; walk backwards
    for (int i = static_cast<int>(f.nodes.size()) - 1; i >= 0; --i) {
        const auto& n = f.nodes[i];
        bool h = n.hyp_l >= 0 || n.hyp_r >= 0;
        if (n.child_l >= 0) h = h || out[n.child_l];
        if (n.child_r >= 0) h = h || out[n.child_r];
        out[i] = h;
    }
    return out;
}

}  // namespace

std::vector<Resolution> enumerate_resolutions(const Forest& f, bool with_only) {
    std::vector<char> has_hyp = subtree_has_hyp_table(f);

    std::function<std::vector<PartialRes>(int)> resolve = [&](int n) -> std::vector<PartialRes> {
        const auto& node = f.nodes[n];
        if (f.is_leaf(n)) return {PartialRes{{n}, {}}};
        bool resolving = node.kind == FKind::With || (!with_only && node.kind == FKind::Plus);
        if (resolving) {
            std::vector<PartialRes> out;
            for (int side = 0; side < 2; ++side) {
                // deleting the other side must not delete a hypothesis edge
                int other_child = side == 0 ? node.child_r : node.child_l;
                int other_hyp = side == 0 ? node.hyp_r : node.hyp_l;
                if (!with_only) {
                    if (other_hyp >= 0) continue;
                    if (other_child >= 0 && has_hyp[other_child]) continue;
                }
                int child = side == 0 ? node.child_l : node.child_r;
                int hyp = side == 0 ? node.hyp_l : node.hyp_r;
                if (hyp >= 0) {
                    PartialRes r;
                    r.nodes = {n};
                    r.choice[n] = side;
                    out.push_back(std::move(r));
                } else {
                    for (PartialRes sub : resolve(child)) {
                        sub.nodes.push_back(n);
                        sub.choice[n] = side;
                        out.push_back(std::move(sub));
                    }
                }
            }
            return out;
        }
        // keep both arguments
        std::vector<PartialRes> left = {PartialRes{{}, {}}};
        if (node.child_l >= 0) left = resolve(node.child_l);
        std::vector<PartialRes> right = {PartialRes{{}, {}}};
        if (node.child_r >= 0) right = resolve(node.child_r);
        std::vector<PartialRes> out;
        for (const PartialRes& l : left)
            for (const PartialRes& r : right) {
                PartialRes c;
                c.nodes = l.nodes;
                c.nodes.insert(c.nodes.end(), r.nodes.begin(), r.nodes.end());
                c.nodes.push_back(n);
                c.choice = l.choice;
                c.choice.insert(r.choice.begin(), r.choice.end());
                out.push_back(std::move(c));
            }
        return out;
    };

    std::vector<PartialRes> acc = {PartialRes{{}, {}}};
    for (int root : f.roots) {
        if (root < 0) continue;  // root hypothesis: just the partial edge
        std::vector<PartialRes> opts = resolve(root);
        std::vector<PartialRes> next;
        for (const PartialRes& a : acc)
            for (const PartialRes& o : opts) {
                PartialRes c = a;
                c.nodes.insert(c.nodes.end(), o.nodes.begin(), o.nodes.end());
                c.choice.insert(o.choice.begin(), o.choice.end());
                next.push_back(std::move(c));
            }
        acc = std::move(next);
    }

    std::vector<Resolution> out;
    for (const PartialRes& p : acc) {
        Resolution r;
        r.kept.assign(f.nodes.size(), 0);
        for (int n : p.nodes) r.kept[n] = 1;
        for (size_t n = 0; n < f.nodes.size(); ++n)
            if (r.kept[n] && f.is_leaf(static_cast<int>(n)))
                r.leaves.push_back(static_cast<int>(n));
        std::sort(r.leaves.begin(), r.leaves.end());
        r.additive_choice = p.choice;
        out.push_back(std::move(r));
    }
    return out;
}

CheckedNet check_linkings(const MallNet& net_in) {
    CheckedNet cn;
    cn.net = net_in;
    canonicalize(cn.net);
    cn.forest = build_forest(cn.net.seq);
    cn.additive = enumerate_resolutions(cn.forest, false);
    cn.withres = enumerate_resolutions(cn.forest, true);
    if (cn.additive.empty())
        throw MallError("NoAdditiveResolution",
                        "a hypothesis sits under a mandatory-deleted branch");

    for (const Linking& l : cn.net.linkings) {
        std::set<int> leaves;
        for (const AxLink& link : l) {
            auto ia = cn.forest.node_by_loc.find(link.a);
            auto ib = cn.forest.node_by_loc.find(link.b);
            if (ia == cn.forest.node_by_loc.end() || ib == cn.forest.node_by_loc.end())
                throw MallError("BadLinking", "axiom link on unknown leaf");
            int na = ia->second, nb = ib->second;
            if (!cn.forest.is_leaf(na) || !cn.forest.is_leaf(nb))
                throw MallError("BadLinking", "axiom link on a non-leaf");
            const auto& A = cn.forest.nodes[na];
            const auto& B = cn.forest.nodes[nb];
            bool dualpair = A.atom == B.atom && A.kind != B.kind;
            if (!dualpair) throw MallError("BadLinking", "axiom link on non-dual leaves");
            if (!leaves.insert(na).second || !leaves.insert(nb).second)
                throw MallError("BadLinking", "axiom links overlap");
        }
        std::vector<int> sorted_leaves(leaves.begin(), leaves.end());
        int found = -1;
        for (size_t r = 0; r < cn.additive.size(); ++r) {
            if (cn.additive[r].leaves == sorted_leaves) {
                if (found >= 0) throw MallError("BadLinking", "ambiguous additive resolution");
                found = static_cast<int>(r);
            }
        }
        if (found < 0)
            throw MallError("BadLinking",
                            "links do not partition the leaves of an additive resolution");
        cn.res_of_linking.push_back(found);
    }
    return cn;
}

Toggling toggling_analysis(const CheckedNet& cn, const std::vector<int>& subset) {
    Toggling out;
    auto toggles_of_pair = [&](int i, int j) {
        std::vector<int> t;
        const Resolution& ri = cn.additive[cn.res_of_linking[i]];
        const Resolution& rj = cn.additive[cn.res_of_linking[j]];
        for (size_t n = 0; n < cn.forest.nodes.size(); ++n) {
            if (cn.forest.nodes[n].kind != FKind::With) continue;
            bool left = false, right = false;
            for (const Resolution* r : {&ri, &rj}) {
                auto it = r->additive_choice.find(static_cast<int>(n));
                if (it == r->additive_choice.end()) continue;
                (it->second == 0 ? left : right) = true;
            }
            if (left && right) t.push_back(static_cast<int>(n));
        }
        return t;
    };

    std::set<int> toggled;
    for (size_t n = 0; n < cn.forest.nodes.size(); ++n) {
        if (cn.forest.nodes[n].kind != FKind::With) continue;
        bool left = false, right = false;
        for (int i : subset) {
            const Resolution& r = cn.additive[cn.res_of_linking[i]];
            auto it = r.additive_choice.find(static_cast<int>(n));
            if (it == r.additive_choice.end()) continue;
            (it->second == 0 ? left : right) = true;
        }
        if (left && right) toggled.insert(static_cast<int>(n));
    }
    out.toggled.assign(toggled.begin(), toggled.end());

    std::set<std::pair<AxLink, int>> deps;
    for (size_t a = 0; a < subset.size(); ++a) {
        for (size_t b = 0; b < subset.size(); ++b) {
            if (a == b) continue;
            int i = subset[a], j = subset[b];
            std::vector<int> t = toggles_of_pair(i, j);
            if (t.size() != 1) continue;
            const Linking& li = cn.net.linkings[i];
            const Linking& lj = cn.net.linkings[j];
            for (const AxLink& link : li)
                if (std::find(lj.begin(), lj.end(), link) == lj.end())
                    deps.insert({link, t[0]});
        }
    }
    out.dependencies.assign(deps.begin(), deps.end());
    return out;
}

std::string LinkingGraph::node_vertex_name(const Forest& f, int node) const {
    return "n:" + f.nodes[node].path;
}

std::string LinkingGraph::ax_vertex_name(const Forest& f, const AxLink& l) const {
    return "x:" + f.nodes[f.node_by_loc.at(l.a)].path + "+" + f.nodes[f.node_by_loc.at(l.b)].path;
}

LinkingGraph build_linking_graph(const CheckedNet& cn, const std::vector<int>& subset) {
    if (subset.empty()) throw MallError("EmptySubset", "linking graph of an empty set");
    LinkingGraph lg;
    const Forest& f = cn.forest;

    std::vector<char> kept(f.nodes.size(), 0);
    for (int i : subset)
        for (size_t n = 0; n < f.nodes.size(); ++n)
            if (cn.additive[cn.res_of_linking[i]].kept[n]) kept[n] = 1;
    for (size_t n = 0; n < f.nodes.size(); ++n)
        if (kept[n]) lg.kept_nodes.push_back(static_cast<int>(n));

    std::set<AxLink> links;
    for (int i : subset)
        for (const AxLink& l : cn.net.linkings[i]) links.insert(l);
    lg.ax_links.assign(links.begin(), links.end());

    Toggling tog = toggling_analysis(cn, subset);
    for (const auto& [link, w] : tog.dependencies) {
        int ax = static_cast<int>(
            std::find(lg.ax_links.begin(), lg.ax_links.end(), link) - lg.ax_links.begin());
        lg.jump_edges.push_back({ax, w});
    }
    std::sort(lg.jump_edges.begin(), lg.jump_edges.end());

    // Build the colored graph. pw-vertices take solid in-edges and a dashed
    // conclusion; all other vertices color their incident edges pairwise
    // distinctly from an indexed palette.
    GraphSpec spec;
    for (int n : lg.kept_nodes) spec.vertices.push_back(lg.node_vertex_name(f, n));
    for (const AxLink& l : lg.ax_links) spec.vertices.push_back(lg.ax_vertex_name(f, l));

    struct PendingEnd {
        std::string vertex;
        bool pw_in = false;    // premise or jump into a pw-vertex
        bool pw_out = false;   // conclusion of a pw-vertex
    };
    struct PendingEdge {
        std::string id;
        std::vector<PendingEnd> ends;
    };
    std::vector<PendingEdge> edges;

    auto is_pw_node = [&](int n) {
        return f.nodes[n].kind == FKind::Par || f.nodes[n].kind == FKind::With;
    };

    for (int n : lg.kept_nodes) {
        // conclusion edge of node n
        PendingEdge e;
        e.id = "c:" + f.nodes[n].path;
        e.ends.push_back({lg.node_vertex_name(f, n), false, is_pw_node(n)});
        int p = f.nodes[n].parent;
        if (p >= 0) e.ends.push_back({lg.node_vertex_name(f, p), is_pw_node(p), false});
        edges.push_back(std::move(e));
    }
    for (const auto& h : f.hyps) {
        PendingEdge e;
        e.id = "h:" + h.path;
        if (h.parent >= 0)
            e.ends.push_back({lg.node_vertex_name(f, h.parent), is_pw_node(h.parent), false});
        edges.push_back(std::move(e));
    }
    for (const AxLink& l : lg.ax_links) {
        std::string ax = lg.ax_vertex_name(f, l);
        for (int loc : {l.a, l.b}) {
            int leaf = f.node_by_loc.at(loc);
            PendingEdge e;
            e.id = "a:" + ax + ">" + f.nodes[leaf].path;
            e.ends.push_back({ax, false, false});
            e.ends.push_back({lg.node_vertex_name(f, leaf), false, false});
            edges.push_back(std::move(e));
        }
    }
    for (const auto& [ax_idx, w] : lg.jump_edges) {
        PendingEdge e;
        std::string ax = lg.ax_vertex_name(f, lg.ax_links[ax_idx]);
        e.id = "j:" + ax + ">" + f.nodes[w].path;
        e.ends.push_back({ax, false, false});
        e.ends.push_back({lg.node_vertex_name(f, w), true, false});
        edges.push_back(std::move(e));
    }

    // assign colors: count per-vertex slots for the distinct palette
    std::sort(edges.begin(), edges.end(),
              [](const PendingEdge& a, const PendingEdge& b) { return a.id < b.id; });
    std::map<std::string, int> slot;
    int max_slot = 0;
    GraphSpec final_spec;
    final_spec.vertices = spec.vertices;
    for (const PendingEdge& e : edges) {
        GraphSpec::EdgeSpec es;
        es.id = e.id;
        for (const PendingEnd& end : e.ends) {
            std::string color;
            if (end.pw_in)
                color = "solid";
            else if (end.pw_out)
                color = "dashed";
            else {
                int s = slot[end.vertex]++;
                max_slot = std::max(max_slot, s + 1);
                color = "k" + std::to_string(s);
            }
            es.ends.push_back({end.vertex, color});
        }
        final_spec.edges.push_back(std::move(es));
    }
    final_spec.colors = {"solid", "dashed"};
    for (int s = 0; s < std::max(max_slot, 1); ++s)
        final_spec.colors.push_back("k" + std::to_string(s));
    lg.colored = LocallyColoredGraph::build(final_spec);
    return lg;
}

MallColoring well_color_mall(const MallNet& net) {
    CheckedNet cn = check_linkings(net);
    std::vector<int> all;
    for (size_t i = 0; i < cn.net.linkings.size(); ++i) all.push_back(static_cast<int>(i));
    MallColoring out;
    out.graph = build_linking_graph(cn, all);
    const LocallyColoredGraph& g = out.graph.colored;
    const Forest& f = cn.forest;

    out.clauses_ok = true;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const std::string& name = g.vertex_name(v);
        bool pw = false;
        if (name.rfind("n:", 0) == 0) {
            FKind k = f.nodes[f.node_by_path.at(name.substr(2))].kind;
            pw = k == FKind::Par || k == FKind::With;
        }
        std::vector<Edge> in_edges, out_edges;
        for (Edge e : g.edges_at(v)) {
            const std::string& nm = g.edge_name(e);
            bool is_own_concl = nm.rfind("c:", 0) == 0 && name.rfind("n:", 0) == 0 &&
                                nm.substr(2) == name.substr(2);
            bool outgoing = is_own_concl || (name.rfind("x:", 0) == 0);
            (outgoing ? out_edges : in_edges).push_back(e);
        }
        if (pw) {
            for (Edge e : in_edges)
                for (Edge e2 : out_edges)
                    if (g.color_at(e, v) == g.color_at(e2, v)) out.clauses_ok = false;
            for (size_t i = 1; i < in_edges.size(); ++i)
                if (g.color_at(in_edges[i], v) != g.color_at(in_edges[0], v))
                    out.clauses_ok = false;
        } else {
            std::set<Color> seen;
            for (Edge e : g.edges_at(v))
                if (!seen.insert(g.color_at(e, v)).second) out.clauses_ok = false;
        }
    }
    out.cusp_pts = cusp_points(g);
    return out;
}

namespace {

std::vector<int> all_linkings(const CheckedNet& cn) {
    std::vector<int> out;
    for (size_t i = 0; i < cn.net.linkings.size(); ++i) out.push_back(static_cast<int>(i));
    return out;
}

// Is the hypothesis edge with index hi present in the (partial) resolution r?
bool hyp_present(const Forest& f, const Resolution& r, int hi) {
    int parent = f.hyps[hi].parent;
    if (parent < 0) return true;  // a whole conclusion: always kept
    if (!r.kept[parent]) return false;
    const auto& p = f.nodes[parent];
    if (p.kind == FKind::With || p.kind == FKind::Plus) {
        auto it = r.additive_choice.find(parent);
        if (it != r.additive_choice.end()) {
            int side = p.hyp_l == hi ? 0 : 1;
            if (it->second != side) return false;
        }
    }
    return true;
}

// A linking is on a with-resolution when its additive resolution is a
// sub-forest of it: kept nodes included and every hypothesis edge surviving.
bool linking_on_resolution(const CheckedNet& cn, int i, const Resolution& r) {
    const Resolution& mine = cn.additive[cn.res_of_linking[i]];
    for (size_t n = 0; n < cn.forest.nodes.size(); ++n)
        if (mine.kept[n] && !r.kept[n]) return false;
    for (int hi = 0; hi < static_cast<int>(cn.forest.hyps.size()); ++hi)
        if (!hyp_present(cn.forest, r, hi)) return false;
    return true;
}

}  // namespace

CriterionReport check_criterion(const MallNet& net, bool connected_variant) {
    CriterionReport rep;
    rep.connected_checked = connected_variant;
    CheckedNet cn = check_linkings(net);

    // P1: exactly one linking on each with-resolution
    rep.p1 = true;
    for (size_t r = 0; r < cn.withres.size(); ++r) {
        int count = 0;
        for (size_t i = 0; i < cn.net.linkings.size(); ++i)
            if (linking_on_resolution(cn, static_cast<int>(i), cn.withres[r])) ++count;
        if (count != 1) {
            rep.p1 = false;
            std::ostringstream os;
            os << "with-resolution " << r << " carries " << count << " linkings";
            rep.p1_witness = os.str();
            break;
        }
    }

    // P2: no switching cycle in any single-linking graph
    rep.p2 = true;
    for (size_t i = 0; i < cn.net.linkings.size(); ++i) {
        LinkingGraph lg = build_linking_graph(cn, {static_cast<int>(i)});
        if (auto cyc = find_cuspfree_cycle(lg.colored)) {
            rep.p2 = false;
            rep.p2_witness = "linking " + std::to_string(i) + ": " + cyc->encode();
            break;
        }
    }

    // P3: every subset of >= 2 linkings toggles a with-vertex out of all its
    // switching cycles
    rep.p3 = true;
    int m = static_cast<int>(cn.net.linkings.size());
    if (m <= 30) {
        for (unsigned mask = 0; mask < (1u << m) && rep.p3; ++mask) {
            if (__builtin_popcount(mask) < 2) continue;
            std::vector<int> subset;
            for (int i = 0; i < m; ++i)
                if (mask & (1u << i)) subset.push_back(i);
            LinkingGraph lg = build_linking_graph(cn, subset);
            Toggling tog = toggling_analysis(cn, subset);
            bool ok = false;
            for (int w : tog.toggled) {
                Vertex wv = *lg.colored.vertex_index(lg.node_vertex_name(cn.forest, w));
                if (!find_cuspfree_cycle_through(lg.colored, wv)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                rep.p3 = false;
                std::ostringstream os;
                os << "subset {";
                for (int i : subset) os << i << ",";
                os << "} has no safe toggled with-vertex";
                rep.p3_witness = os.str();
            }
        }
    } else {
        throw MallError("TooLarge", "P3 enumeration over too many linkings");
    }

    if (connected_variant) {
        rep.p2c = true;
        for (size_t i = 0; i < cn.net.linkings.size() && rep.p2c; ++i) {
            LinkingGraph lg = build_linking_graph(cn, {static_cast<int>(i)});
            // collect par-vertices with their two premise edges
            std::vector<std::array<Edge, 2>> switches;
            for (int n : lg.kept_nodes) {
                if (cn.forest.nodes[n].kind != FKind::Par) continue;
                std::vector<Edge> prem;
                Vertex pv = *lg.colored.vertex_index(lg.node_vertex_name(cn.forest, n));
                for (Edge e : lg.colored.edges_at(pv)) {
                    // premises of the par: edges whose name is c:<child> or h:<child>
                    const std::string& nm = lg.colored.edge_name(e);
                    if (nm.rfind("c:", 0) == 0 || nm.rfind("h:", 0) == 0) {
                        if (nm.substr(2) != cn.forest.nodes[n].path) prem.push_back(e);
                    }
                }
                if (prem.size() == 2) switches.push_back({prem[0], prem[1]});
            }
            int k = static_cast<int>(switches.size());
            for (unsigned mask = 0; mask < (1u << k) && rep.p2c; ++mask) {
                // rebuild the switched partial graph
                GraphSpec spec;
                for (Vertex v = 0; v < lg.colored.vertex_count(); ++v)
                    spec.vertices.push_back(lg.colored.vertex_name(v));
                spec.colors = {"k"};
                std::set<std::pair<Edge, Vertex>> cut;
                for (int s = 0; s < k; ++s) {
                    Edge drop = switches[s][(mask >> s) & 1];
                    // disconnect the par end of the dropped premise
                    for (const auto& end : lg.colored.ends(drop)) {
                        const std::string& vn = lg.colored.vertex_name(end.v);
                        if (vn.rfind("n:", 0) == 0) {
                            auto it = cn.forest.node_by_path.find(vn.substr(2));
                            if (it != cn.forest.node_by_path.end() &&
                                cn.forest.nodes[it->second].kind == FKind::Par)
                                cut.insert({drop, end.v});
                        }
                    }
                }
                for (Edge e = 0; e < lg.colored.edge_count(); ++e) {
                    GraphSpec::EdgeSpec es;
                    es.id = lg.colored.edge_name(e);
                    for (const auto& end : lg.colored.ends(e))
                        if (!cut.count({e, end.v}))
                            es.ends.push_back({lg.colored.vertex_name(end.v), "k"});
                    spec.edges.push_back(std::move(es));
                }
                LocallyColoredGraph sg = LocallyColoredGraph::build(spec);
                auto comps = connected_components(sg);
                bool cyclic = find_cuspfree_cycle(sg).has_value();  // single color: any cycle
                if (cyclic || comps.size() != 1) {
                    rep.p2c = false;
                    rep.p2c_witness = "linking " + std::to_string(i) +
                                      (cyclic ? ": cyclic switching" : ": disconnected switching");
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Exit jumps (Lemma 4.32)

std::variant<ExitJump, Violations> find_exit_jump(const CheckedNet& cn, const SubGraph& omega,
                                                  const LinkingGraph& full) {
    Violations bad;
    if (omega.edges.empty()) bad.push_back("omega-empty");
    for (Edge e : omega.edges)
        if (!find_cuspfree_cycle_through_edge(full.colored, e, &omega)) {
            bad.push_back("omega-not-union-of-switching-cycles");
            break;
        }
    if (!bad.empty()) return bad;

    int m = static_cast<int>(cn.net.linkings.size());

    // fast membership predicates for edges of the full graph in G_Lambda
    auto edge_in_subset = [&](Edge e, const std::vector<int>& subset) -> bool {
        const std::string& name = full.colored.edge_name(e);
        if (name.rfind("h:", 0) == 0) return true;
        if (name.rfind("c:", 0) == 0) {
            int n = cn.forest.node_by_path.at(name.substr(2));
            for (int i : subset)
                if (cn.additive[cn.res_of_linking[i]].kept[n]) return true;
            return false;
        }
        if (name.rfind("a:", 0) == 0 || name.rfind("j:", 0) == 0) {
            // recover the ax link from the vertex name on the edge
            for (const auto& end : full.colored.ends(e)) {
                const std::string& vn = full.colored.vertex_name(end.v);
                if (vn.rfind("x:", 0) != 0) continue;
                int ax = -1;
                for (size_t k = 0; k < full.ax_links.size(); ++k)
                    if (full.ax_vertex_name(cn.forest, full.ax_links[k]) == vn)
                        ax = static_cast<int>(k);
                if (ax < 0) return false;
                const AxLink& link = full.ax_links[ax];
                if (name.rfind("a:", 0) == 0) {
                    for (int i : subset) {
                        const Linking& li = cn.net.linkings[i];
                        if (std::find(li.begin(), li.end(), link) != li.end()) return true;
                    }
                    return false;
                }
                // jump edge: the dependency must hold within the subset
                int w = cn.forest.node_by_path.at(name.substr(name.find('>') + 1));
                Toggling tog = toggling_analysis(cn, subset);
                for (const auto& [l2, w2] : tog.dependencies)
                    if (l2 == link && w2 == w) return true;
                return false;
            }
            return false;
        }
        return false;
    };

    auto contains_omega = [&](const std::vector<int>& subset) {
        for (Edge e : omega.edges)
            if (!edge_in_subset(e, subset)) return false;
        return true;
    };

    // right-premise usage per linking, for W(Lambda)
    std::vector<std::set<int>> right_used(m);
    std::vector<int> with_nodes;
    for (size_t n = 0; n < cn.forest.nodes.size(); ++n)
        if (cn.forest.nodes[n].kind == FKind::With) with_nodes.push_back(static_cast<int>(n));
    for (int i = 0; i < m; ++i) {
        const Resolution& r = cn.additive[cn.res_of_linking[i]];
        for (auto& [node, side] : r.additive_choice)
            if (side == 1 && cn.forest.nodes[node].kind == FKind::With) right_used[i].insert(node);
    }
    auto w_size = [&](const std::vector<int>& subset) {
        std::set<int> used;
        for (int i : subset) used.insert(right_used[i].begin(), right_used[i].end());
        return static_cast<int>(with_nodes.size() - used.size());
    };

    std::vector<int> best;
    int best_w = -1;
    if (m > 20) return Violations{"too-many-linkings"};
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) subset.push_back(i);
        if (!contains_omega(subset)) continue;
        int w = w_size(subset);
        if (w > best_w) {
            best_w = w;
            best = subset;
        }
    }
    if (best.size() < 2) return Violations{"omega-not-in-two-linkings"};

    // P3 on the chosen subset
    LinkingGraph lg = build_linking_graph(cn, best);
    Toggling tog = toggling_analysis(cn, best);
    int w_node = -1;
    for (int w : tog.toggled) {
        Vertex wv = *lg.colored.vertex_index(lg.node_vertex_name(cn.forest, w));
        if (!find_cuspfree_cycle_through(lg.colored, wv)) {
            w_node = w;
            break;
        }
    }
    if (w_node < 0) return Violations{"toggling-fails"};

    // re-resolve every linking of the subset through the left premise of w
    auto resolve_through = [&](int i) -> int {
        const Resolution& r = cn.additive[cn.res_of_linking[i]];
        // choice map for every with-vertex of the forest
        std::map<int, int> want;
        for (int w : with_nodes) {
            if (w == w_node)
                want[w] = 0;
            else if (r.additive_choice.count(w))
                want[w] = r.additive_choice.at(w);
            else
                want[w] = 0;
        }
        // find the with-resolution realizing `want`
        int res_idx = -1;
        for (size_t k = 0; k < cn.withres.size(); ++k) {
            bool match = true;
            for (int w : with_nodes) {
                auto it = cn.withres[k].additive_choice.find(w);
                if (it != cn.withres[k].additive_choice.end() && it->second != want[w])
                    match = false;
            }
            if (match) {
                res_idx = static_cast<int>(k);
                break;
            }
        }
        if (res_idx < 0) return -1;
        for (int j = 0; j < m; ++j)
            if (linking_on_resolution(cn, j, cn.withres[res_idx])) return j;
        return -1;
    };

    std::set<int> lambda_w;
    for (int i : best) {
        int j = resolve_through(i);
        if (j < 0) return Violations{"resolution-without-linking"};
        lambda_w.insert(j);
    }
    std::vector<int> subset_w(lambda_w.begin(), lambda_w.end());

    // an Omega edge with an ax source missing from G_{Lambda^w}
    for (Edge e : omega.edges) {
        const std::string& name = full.colored.edge_name(e);
        if (name.rfind("a:", 0) != 0 && name.rfind("j:", 0) != 0) continue;
        if (edge_in_subset(e, subset_w)) continue;
        // recover the link
        for (const auto& end : full.colored.ends(e)) {
            const std::string& vn = full.colored.vertex_name(end.v);
            if (vn.rfind("x:", 0) != 0) continue;
            for (size_t k = 0; k < full.ax_links.size(); ++k) {
                if (full.ax_vertex_name(cn.forest, full.ax_links[k]) != vn) continue;
                const AxLink& link = full.ax_links[k];
                // verify (link -> w_node) is a jump edge of the full graph
                for (const auto& [ax_idx, w2] : full.jump_edges) {
                    if (full.ax_links[ax_idx] == link && w2 == w_node) {
                        ExitJump out;
                        out.link = link;
                        out.with_node = w_node;
                        out.ax_name = vn;
                        out.with_name = lg.node_vertex_name(cn.forest, w_node);
                        return out;
                    }
                }
            }
        }
    }
    return Violations{"exit-jump-not-found"};
}

// ---------------------------------------------------------------------------
// Splitting vertices in nets

std::optional<MallStrategy> mall_strategy_from(const std::string& s) {
    if (s == "any") return MallStrategy::Any;
    if (s == "pw") return MallStrategy::Pw;
    if (s == "terminal") return MallStrategy::Terminal;
    if (s == "non-ax") return MallStrategy::NonAx;
    return std::nullopt;
}

MallSplit find_splitting_mallnet(const MallNet& net, MallStrategy strategy) {
    MallSplit out;
    CriterionReport rep = check_criterion(net, false);
    if (!rep.standard()) {
        out.error = "NotCorrect";
        return out;
    }
    CheckedNet cn = check_linkings(net);
    LinkingGraph full = build_linking_graph(cn, all_linkings(cn));
    const LocallyColoredGraph& g = full.colored;
    if (g.vertex_count() == 0) {
        out.error = "Empty";
        return out;
    }

    std::vector<CycleUnion> unions = max_cuspfree_unions(g);
    std::vector<ExitSpec> exits;
    for (const CycleUnion& u : unions) {
        auto ej = find_exit_jump(cn, u.sub, full);
        if (std::holds_alternative<Violations>(ej)) {
            out.error = "NotCorrect";
            return out;
        }
        const ExitJump& x = std::get<ExitJump>(ej);
        std::string ename = "j:" + x.ax_name + ">" + cn.forest.nodes[x.with_node].path;
        ExitSpec spec;
        spec.e = *g.edge_index(ename);
        spec.inside = *g.vertex_index(x.ax_name);
        spec.outside = *g.vertex_index(x.with_name);
        exits.push_back(spec);
    }

    auto classify = [&](Vertex v) -> std::pair<bool, int> {  // (is_ax, node or ax idx)
        const std::string& name = g.vertex_name(v);
        if (name.rfind("x:", 0) == 0) {
            for (size_t k = 0; k < full.ax_links.size(); ++k)
                if (full.ax_vertex_name(cn.forest, full.ax_links[k]) == name)
                    return {true, static_cast<int>(k)};
            throw MallError("Internal", "unknown ax vertex");
        }
        return {false, cn.forest.node_by_path.at(name.substr(2))};
    };

    std::vector<VertexColorPair> pairs;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        auto [is_ax, idx] = classify(v);
        FKind kind = is_ax ? FKind::Atom : cn.forest.nodes[idx].kind;
        bool leaf = !is_ax && (kind == FKind::Atom || kind == FKind::NegAtom);
        bool connective = !is_ax && !leaf;
        bool pw = connective && (kind == FKind::Par || kind == FKind::With);
        std::set<Color> excluded;
        switch (strategy) {
            case MallStrategy::Any: {
                if (leaf) continue;
                if (is_ax)
                    for (Edge e : g.edges_at(v))
                        if (g.edge_name(e).rfind("j:", 0) == 0) excluded.insert(g.color_at(e, v));
                break;
            }
            case MallStrategy::Pw: {
                if (!pw) continue;
                for (Color c = 0; c < g.color_count(); ++c)
                    if (!is_cusp_point(g, {v, c})) excluded.insert(c);
                break;
            }
            case MallStrategy::Terminal: {
                if (!connective) continue;
                for (Edge e : g.edges_at(v)) {
                    const std::string& nm = g.edge_name(e);
                    if (nm == "c:" + cn.forest.nodes[idx].path) excluded.insert(g.color_at(e, v));
                }
                break;
            }
            case MallStrategy::NonAx: {
                if (!connective) continue;
                break;
            }
        }
        for (Color c = 0; c < g.color_count(); ++c)
            if (!excluded.count(c)) pairs.push_back({v, c});
    }

    if (pairs.empty()) {
        // pw / non-ax strategies on nets without matching vertices fall back to
        // the general parameter (every non-leaf pair minus jump colors)
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            auto [is_ax, idx] = classify(v);
            bool leaf = !is_ax && (cn.forest.nodes[idx].kind == FKind::Atom ||
                                   cn.forest.nodes[idx].kind == FKind::NegAtom);
            if (leaf) continue;
            std::set<Color> excluded;
            if (is_ax)
                for (Edge e : g.edges_at(v))
                    if (g.edge_name(e).rfind("j:", 0) == 0) excluded.insert(g.color_at(e, v));
            for (Color c = 0; c < g.color_count(); ++c)
                if (!excluded.count(c)) pairs.push_back({v, c});
        }
    }

    MallGraphSplit res = find_splitting_mall_graph(g, exits, pairs);
    if (res.status != MallGraphSplit::Status::Found) {
        out.error = "Internal";
        return out;
    }
    auto [is_ax, idx] = classify(res.vertex);
    out.ok = true;
    out.is_ax = is_ax;
    out.vertex_name = g.vertex_name(res.vertex);
    if (is_ax)
        out.ax = full.ax_links[idx];
    else
        out.node = idx;
    return out;
}

// ---------------------------------------------------------------------------
// Split and sequentialization

namespace {

Formula formula_at_loc(const std::vector<Formula>& concs, int loc) {
    std::function<Formula(const Formula&)> walk = [&](const Formula& f) -> Formula {
        if (f->loc == loc) return f;
        if (is_atomic(f)) return nullptr;
        if (Formula l = walk(f->left)) return l;
        return walk(f->right);
    };
    for (const Formula& f : concs)
        if (Formula r = walk(f)) return r;
    throw MallError("Internal", "location not found in sequent");
}

// side identifiers for the cut-graph components
struct Sides {
    std::vector<int> comp_of_vertex;  // per colored-graph vertex
    int side_of(Vertex v) const { return comp_of_vertex[v]; }
};

Sides components_without(const LocallyColoredGraph& g, const std::set<Edge>& cut) {
    Sides s;
    s.comp_of_vertex.assign(g.vertex_count(), -1);
    std::vector<int> parent(g.vertex_count());
    for (int i = 0; i < g.vertex_count(); ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (Edge e = 0; e < g.edge_count(); ++e) {
        if (cut.count(e)) continue;
        const auto& ends = g.ends(e);
        if (ends.size() == 2) parent[find(ends[0].v)] = find(ends[1].v);
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v) s.comp_of_vertex[v] = find(v);
    return s;
}

struct SideSplit {
    MallNet net0, net1;
};

// Splits the net along the conclusion edge of forest node `cutnode`: side 1 is
// the side of the node itself (which roots the sub-formula there), side 0 the
// rest (where the occurrence becomes a hypothesis).
SideSplit split_along_node_edge(const CheckedNet& cn, const LinkingGraph& full, int cutnode) {
    const Forest& f = cn.forest;
    const LocallyColoredGraph& g = full.colored;
    Edge ce = *g.edge_index("c:" + f.nodes[cutnode].path);
    Sides sides = components_without(g, {ce});
    Vertex node_v = *g.vertex_index(full.node_vertex_name(f, cutnode));
    int side1 = sides.side_of(node_v);

    SideSplit out;
    Formula A = formula_at_loc(cn.net.seq.concs, f.nodes[cutnode].loc);

    // conclusions: a root tree follows its root node's side; the tree holding
    // the cut node stays in side 0 with the occurrence turned into a hypothesis
    int cut_root_index = f.nodes[cutnode].root_index;
    out.net1.seq.concs.push_back(A);
    for (size_t i = 0; i < cn.net.seq.concs.size(); ++i) {
        if (static_cast<int>(i) == cut_root_index) {
            out.net0.seq.concs.push_back(cn.net.seq.concs[i]);
            continue;
        }
        int root = f.roots[i];
        bool to1 = false;
        if (root >= 0) {
            Vertex rv = *g.vertex_index(full.node_vertex_name(f, root));
            to1 = sides.side_of(rv) == side1;
        }
        (to1 ? out.net1 : out.net0).seq.concs.push_back(cn.net.seq.concs[i]);
    }
    out.net0.seq.hyp_locs.push_back(f.nodes[cutnode].loc);
    // distribute the original hypotheses: those inside the cut sub-tree go to
    // side 1, the rest follow their tree
    for (const auto& h : f.hyps) {
        bool under_cut = false;
        for (int p = h.parent; p >= 0; p = f.nodes[p].parent)
            if (p == cutnode) under_cut = true;
        bool to1;
        if (under_cut)
            to1 = true;
        else if (h.root_index == cut_root_index)
            to1 = false;
        else {
            int root = f.roots[h.root_index];
            if (root >= 0) {
                Vertex rv = *g.vertex_index(full.node_vertex_name(f, root));
                to1 = sides.side_of(rv) == side1;
            } else {
                to1 = false;  // isolated hypothesis edges stay with the rest
            }
        }
        (to1 ? out.net1 : out.net0).seq.hyp_locs.push_back(h.loc);
    }

    // linkings: assign links by the side of their leaves
    std::set<Linking> l0, l1;
    for (const Linking& l : cn.net.linkings) {
        Linking a, b;
        for (const AxLink& link : l) {
            Vertex leaf = *g.vertex_index(full.node_vertex_name(f, f.node_by_loc.at(link.a)));
            bool to1 = sides.side_of(leaf) == side1;
            Vertex leaf2 = *g.vertex_index(full.node_vertex_name(f, f.node_by_loc.at(link.b)));
            if ((sides.side_of(leaf2) == side1) != to1)
                throw MallError("Internal", "axiom link crosses a splitting edge");
            (to1 ? b : a).push_back(link);
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        l0.insert(a);
        l1.insert(b);
    }
    out.net0.linkings.assign(l0.begin(), l0.end());
    out.net1.linkings.assign(l1.begin(), l1.end());
    canonicalize(out.net0);
    canonicalize(out.net1);
    return out;
}

bool node_is_terminal(const Forest& f, int n) { return f.nodes[n].parent < 0; }

}  // namespace

MallSplitParts split_at(const MallNet& net, const MallSplit& vertex, bool recheck) {
    CheckedNet cn = check_linkings(net);
    LinkingGraph full = build_linking_graph(cn, all_linkings(cn));
    const Forest& f = cn.forest;
    const LocallyColoredGraph& g = full.colored;
    MallSplitParts out;

    auto assert_ok = [&](const MallNet& n) {
        if (!recheck) return;
        CriterionReport r = check_criterion(n, false);
        if (!r.standard()) throw MallError("Internal", "split output fails the criterion");
    };
    auto as_set = [](const std::vector<Linking>& ls) {
        std::set<Linking> out;
        for (Linking l : ls) {
            std::sort(l.begin(), l.end());
            out.insert(std::move(l));
        }
        return out;
    };
    // the recombination equations of the splitting lemmas, checked exactly
    auto assert_product = [&](const MallNet& n0, const MallNet& n1,
                              const Linking& extra) {
        if (!recheck) return;
        std::set<Linking> combined;
        for (const Linking& a : n0.linkings)
            for (const Linking& b : n1.linkings) {
                Linking u = extra;
                u.insert(u.end(), a.begin(), a.end());
                u.insert(u.end(), b.begin(), b.end());
                std::sort(u.begin(), u.end());
                combined.insert(std::move(u));
            }
        if (combined != as_set(net.linkings))
            throw MallError("Internal", "split recombination mismatch");
    };
    auto assert_union = [&](const MallNet& n0, const MallNet& n1) {
        if (!recheck) return;
        std::set<Linking> combined = as_set(n0.linkings);
        for (const Linking& l : as_set(n1.linkings)) combined.insert(l);
        if (combined != as_set(net.linkings))
            throw MallError("Internal", "split union mismatch");
    };

    if (vertex.is_ax) {
        const AxLink& link = vertex.ax;
        int la = f.node_by_loc.at(link.a), lb = f.node_by_loc.at(link.b);
        // order the two leaves: negated atom first
        if (f.nodes[la].kind != FKind::NegAtom) std::swap(la, lb);
        Formula neg = formula_at_loc(net.seq.concs, f.nodes[la].loc);
        Formula pos = formula_at_loc(net.seq.concs, f.nodes[lb].loc);
        Edge e0 = *g.edge_index("c:" + f.nodes[la].path);
        Edge e1 = *g.edge_index("c:" + f.nodes[lb].path);
        Sides sides = components_without(g, {e0, e1});
        // side 0: the component above la's conclusion (its parent side)
        int side0 = -2, side1 = -2;
        if (f.nodes[la].parent >= 0)
            side0 = sides.side_of(*g.vertex_index(full.node_vertex_name(f, f.nodes[la].parent)));
        if (f.nodes[lb].parent >= 0)
            side1 = sides.side_of(*g.vertex_index(full.node_vertex_name(f, f.nodes[lb].parent)));

        MallNet n0, n1;
        auto conc_side = [&](size_t i) -> int {  // 0, 1
            if (static_cast<int>(i) == f.nodes[la].root_index && f.nodes[la].parent < 0) return 0;
            if (static_cast<int>(i) == f.nodes[lb].root_index && f.nodes[lb].parent < 0) return 1;
            int root = f.roots[i];
            if (root >= 0) {
                int s = sides.side_of(*g.vertex_index(full.node_vertex_name(f, root)));
                if (s == side0) return 0;
                if (s == side1) return 1;
                // trees disconnected from both leaves: keep with side 1 (the rest)
                return 1;
            }
            return 1;
        };
        for (size_t i = 0; i < net.seq.concs.size(); ++i)
            (conc_side(i) == 0 ? n0 : n1).seq.concs.push_back(net.seq.concs[i]);
        n0.seq.hyp_locs.push_back(f.nodes[la].loc);
        n1.seq.hyp_locs.push_back(f.nodes[lb].loc);
        for (const auto& h : f.hyps) (conc_side(h.root_index) == 0 ? n0 : n1)
            .seq.hyp_locs.push_back(h.loc);

        std::set<Linking> s0, s1;
        for (const Linking& l : net.linkings) {
            bool found = false;
            Linking a, b;
            for (const AxLink& lk : l) {
                if (lk == link) {
                    found = true;
                    continue;
                }
                Vertex leaf = *g.vertex_index(full.node_vertex_name(f, f.node_by_loc.at(lk.a)));
                int s = sides.side_of(leaf);
                (s == side0 ? a : b).push_back(lk);
            }
            if (!found) throw MallError("Internal", "splitting ax missing from a linking");
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            s0.insert(a);
            s1.insert(b);
        }
        n0.linkings.assign(s0.begin(), s0.end());
        n1.linkings.assign(s1.begin(), s1.end());
        canonicalize(n0);
        canonicalize(n1);
        out.kind = MallSplitParts::Kind::Ax;
        out.ax = link;
        out.ax_neg = neg;
        out.ax_pos = pos;
        out.nets = {n0, n1};
        assert_ok(n0);
        assert_ok(n1);
        assert_product(n0, n1, {link});
        return out;
    }

    int v = vertex.node;
    FKind kind = f.nodes[v].kind;
    if (f.is_leaf(v)) throw MallError("LeafVertex", "cannot split at a leaf");

    if (!node_is_terminal(f, v)) {
        SideSplit s = split_along_node_edge(cn, full, v);
        out.kind = MallSplitParts::Kind::Sub;
        out.nets = {s.net0, s.net1};
        assert_ok(s.net0);
        assert_ok(s.net1);
        assert_product(s.net0, s.net1, {});
        return out;
    }

    int root_index = f.nodes[v].root_index;
    Formula root_formula = net.seq.concs[root_index];
    Formula A0 = root_formula->left, A1 = root_formula->right;

    switch (kind) {
        case FKind::Par: {
            MallNet n = net;
            n.seq.concs.clear();
            for (size_t i = 0; i < net.seq.concs.size(); ++i) {
                if (static_cast<int>(i) == root_index) {
                    n.seq.concs.push_back(A0);
                    n.seq.concs.push_back(A1);
                } else {
                    n.seq.concs.push_back(net.seq.concs[i]);
                }
            }
            canonicalize(n);
            out.kind = MallSplitParts::Kind::TerminalPar;
            out.nets = {n};
            assert_ok(n);
            return out;
        }
        case FKind::With: {
            MallNet n0, n1;
            auto mk_seq = [&](const Formula& Ai, MallNet& n) {
                for (size_t i = 0; i < net.seq.concs.size(); ++i)
                    n.seq.concs.push_back(static_cast<int>(i) == root_index ? Ai
                                                                            : net.seq.concs[i]);
                std::set<int> locs;
                for (const Formula& c : n.seq.concs)
                    for (int l : locations(c)) locs.insert(l);
                for (int h : net.seq.hyp_locs)
                    if (locs.count(h)) n.seq.hyp_locs.push_back(h);
            };
            mk_seq(A0, n0);
            mk_seq(A1, n1);
            for (size_t i = 0; i < net.linkings.size(); ++i) {
                const Resolution& r = cn.additive[cn.res_of_linking[i]];
                auto it = r.additive_choice.find(v);
                if (it == r.additive_choice.end())
                    throw MallError("Internal", "terminal with not resolved by a linking");
                (it->second == 0 ? n0 : n1).linkings.push_back(net.linkings[i]);
            }
            canonicalize(n0);
            canonicalize(n1);
            if (n0.linkings.empty() || n1.linkings.empty())
                throw MallError("NotSplitting", "terminal with is not toggled by the net");
            out.kind = MallSplitParts::Kind::TerminalWith;
            out.nets = {n0, n1};
            assert_ok(n0);
            assert_ok(n1);
            assert_union(n0, n1);
            return out;
        }
        case FKind::Plus: {
            int side = -1;
            for (size_t i = 0; i < net.linkings.size(); ++i) {
                const Resolution& r = cn.additive[cn.res_of_linking[i]];
                auto it = r.additive_choice.find(v);
                if (it == r.additive_choice.end())
                    throw MallError("Internal", "terminal plus not resolved by a linking");
                if (side < 0) side = it->second;
                if (side != it->second)
                    throw MallError("NotSplitting", "splitting plus must be unary");
            }
            if (side < 0) side = 0;
            MallNet n = net;
            n.seq.concs.clear();
            for (size_t i = 0; i < net.seq.concs.size(); ++i)
                n.seq.concs.push_back(static_cast<int>(i) == root_index
                                          ? (side == 0 ? A0 : A1)
                                          : net.seq.concs[i]);
            std::set<int> locs;
            for (const Formula& c : n.seq.concs)
                for (int l : locations(c)) locs.insert(l);
            n.seq.hyp_locs.clear();
            for (int h : net.seq.hyp_locs)
                if (locs.count(h)) n.seq.hyp_locs.push_back(h);
            canonicalize(n);
            out.kind = MallSplitParts::Kind::TerminalPlus;
            out.plus_side = side;
            out.nets = {n};
            assert_ok(n);
            return out;
        }
        case FKind::Tensor: {
            // cut both premise edges; three sides: A0's, A1's, and {v}
            std::set<Edge> cut;
            std::vector<std::string> prem_names;
            if (f.nodes[v].child_l >= 0)
                prem_names.push_back("c:" + f.nodes[f.nodes[v].child_l].path);
            else
                prem_names.push_back("h:" + f.hyps[f.nodes[v].hyp_l].path);
            if (f.nodes[v].child_r >= 0)
                prem_names.push_back("c:" + f.nodes[f.nodes[v].child_r].path);
            else
                prem_names.push_back("h:" + f.hyps[f.nodes[v].hyp_r].path);
            for (const std::string& nm : prem_names)
                if (auto e = g.edge_index(nm)) cut.insert(*e);
            Sides sides = components_without(g, cut);
            // everything in the left premise's component goes to net 0, the
            // rest (including isolated pieces) to net 1
            int side0 = -2;
            if (f.nodes[v].child_l >= 0)
                side0 = sides.side_of(
                    *g.vertex_index(full.node_vertex_name(f, f.nodes[v].child_l)));

            MallNet n0, n1;
            n0.seq.concs.push_back(A0);
            n1.seq.concs.push_back(A1);
            for (size_t i = 0; i < net.seq.concs.size(); ++i) {
                if (static_cast<int>(i) == root_index) continue;
                int root = f.roots[i];
                int s = root >= 0 ? sides.side_of(*g.vertex_index(
                                        full.node_vertex_name(f, root)))
                                  : -3;
                (s == side0 ? n0 : n1).seq.concs.push_back(net.seq.concs[i]);
            }
            std::set<int> locs0;
            for (const Formula& c : n0.seq.concs)
                for (int l : locations(c)) locs0.insert(l);
            for (int h : net.seq.hyp_locs)
                (locs0.count(h) ? n0 : n1).seq.hyp_locs.push_back(h);

            std::set<Linking> s0, s1;
            for (const Linking& l : net.linkings) {
                Linking a, b;
                for (const AxLink& lk : l) {
                    Vertex leaf =
                        *g.vertex_index(full.node_vertex_name(f, f.node_by_loc.at(lk.a)));
                    ((sides.side_of(leaf) == side0) ? a : b).push_back(lk);
                }
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                s0.insert(a);
                s1.insert(b);
            }
            n0.linkings.assign(s0.begin(), s0.end());
            n1.linkings.assign(s1.begin(), s1.end());
            canonicalize(n0);
            canonicalize(n1);
            out.kind = MallSplitParts::Kind::TerminalTensor;
            out.nets = {n0, n1};
            assert_ok(n0);
            assert_ok(n1);
            assert_product(n0, n1, {});
            return out;
        }
        default:
            throw MallError("Internal", "unexpected splitting vertex kind");
    }
}

Deriv sequentialize_mall(const MallNet& net_in, MallStrategy strategy) {
    MallNet net = net_in;
    canonicalize(net);
    CriterionReport rep = check_criterion(net, false);
    if (!rep.standard()) throw MallError("NotCorrect", "net fails the correctness criterion");

    std::function<Deriv(const MallNet&)> go = [&](const MallNet& cur) -> Deriv {
        CheckedNet cn = check_linkings(cur);
        LinkingGraph full = build_linking_graph(cn, all_linkings(cn));
        if (full.colored.vertex_count() == 0) {
            // every conclusion is a hypothesis; emit hyps joined by mix2
            if (cur.seq.concs.empty()) return d_mix0();
            Deriv acc = d_hyp(cur.seq.concs[0]);
            for (size_t i = 1; i < cur.seq.concs.size(); ++i)
                acc = d_mix2(acc, d_hyp(cur.seq.concs[i]));
            return acc;
        }
        MallSplit sp = find_splitting_mallnet(cur, strategy);
        if (!sp.ok) throw MallError("Internal", "no splitting vertex: " + sp.error);
        MallSplitParts parts = split_at(cur, sp, true);
        switch (parts.kind) {
            case MallSplitParts::Kind::Sub: {
                Formula A = formula_at_loc(cur.seq.concs, cn.forest.nodes[sp.node].loc);
                Deriv p1 = go(parts.nets[1]);
                Deriv p0 = go(parts.nets[0]);
                return substitute(p1, A, p0);
            }
            case MallSplitParts::Kind::Ax: {
                Deriv p0 = go(parts.nets[0]);
                Deriv p1 = go(parts.nets[1]);
                Deriv ax = d_ax_pair(parts.ax_neg, parts.ax_pos);
                Deriv step1 = substitute(ax, parts.ax_pos, p1);
                return substitute(step1, parts.ax_neg, p0);
            }
            case MallSplitParts::Kind::TerminalTensor: {
                Formula root = cur.seq.concs[cn.forest.nodes[sp.node].root_index];
                Deriv p0 = go(parts.nets[0]);
                Deriv p1 = go(parts.nets[1]);
                return d_tensor(p0, root->left, p1, root->right, root->loc);
            }
            case MallSplitParts::Kind::TerminalPar: {
                Formula root = cur.seq.concs[cn.forest.nodes[sp.node].root_index];
                Deriv p = go(parts.nets[0]);
                return d_par(p, root->left, root->right, root->loc);
            }
            case MallSplitParts::Kind::TerminalWith: {
                Formula root = cur.seq.concs[cn.forest.nodes[sp.node].root_index];
                Deriv p0 = go(parts.nets[0]);
                Deriv p1 = go(parts.nets[1]);
                return d_with(p0, root->left, p1, root->right, root->loc);
            }
            case MallSplitParts::Kind::TerminalPlus: {
                Formula root = cur.seq.concs[cn.forest.nodes[sp.node].root_index];
                Deriv p = go(parts.nets[0]);
                return parts.plus_side == 0 ? d_plus1(p, root->left, root->right, root->loc)
                                            : d_plus2(p, root->right, root->left, root->loc);
            }
        }
        throw MallError("Internal", "unhandled split kind");
    };
    return go(net);
}

// ---------------------------------------------------------------------------
// Desequentialization and the slice constraint

bool hyp_slice_constraint_holds(const Deriv& d) {
    std::set<int> all;
    for (const Formula& h : d->hypotheses) all.insert(h->loc);
    if (all.empty()) return true;

    std::function<std::vector<std::set<int>>(const Deriv&)> slices =
        [&](const Deriv& n) -> std::vector<std::set<int>> {
        switch (n->rule) {
            case Rule::Hyp:
                return {{n->principal->loc}};
            case Rule::Ax:
            case Rule::Mix0:
                return {{}};
            case Rule::With: {
                auto a = slices(n->subs[0]);
                auto b = slices(n->subs[1]);
                a.insert(a.end(), b.begin(), b.end());
                return a;
            }
            case Rule::Mix2:
            case Rule::Tensor:
            case Rule::Cut: {
                auto a = slices(n->subs[0]);
                auto b = slices(n->subs[1]);
                std::vector<std::set<int>> out;
                for (const auto& x : a)
                    for (const auto& y : b) {
                        std::set<int> u = x;
                        u.insert(y.begin(), y.end());
                        out.push_back(std::move(u));
                    }
                return out;
            }
            default: {
                return slices(n->subs[0]);
            }
        }
    };
    for (const std::set<int>& s : slices(d))
        if (s != all) return false;
    return true;
}

MallNet desequentialize_mall(const Deriv& d) {
    std::function<void(const Deriv&)> validate = [&](const Deriv& n) {
        if (n->rule == Rule::Cut) throw MallError("CutNotSupported", "cut-free system only");
        if (n->rule == Rule::Ax && !is_atomic(n->pb))
            throw MallError("NonAtomicAxiom", "MALL axioms are atomic");
        for (const Deriv& s : n->subs) validate(s);
    };
    validate(d);
    if (!hyp_slice_constraint_holds(d))
        throw MallError("SliceConstraintViolated",
                        "a slice misses an hypothesis occurrence");

    std::function<std::set<Linking>(const Deriv&)> th = [&](const Deriv& n) -> std::set<Linking> {
        switch (n->rule) {
            case Rule::Ax: {
                AxLink l{n->pa->loc, n->pb->loc};
                if (l.b < l.a) std::swap(l.a, l.b);
                return {{l}};
            }
            case Rule::Hyp:
            case Rule::Mix0:
                return {{}};
            case Rule::Mix2:
            case Rule::Tensor: {
                auto a = th(n->subs[0]);
                auto b = th(n->subs[1]);
                std::set<Linking> out;
                for (const Linking& x : a)
                    for (const Linking& y : b) {
                        Linking u = x;
                        u.insert(u.end(), y.begin(), y.end());
                        std::sort(u.begin(), u.end());
                        out.insert(u);
                    }
                return out;
            }
            case Rule::With: {
                auto a = th(n->subs[0]);
                auto b = th(n->subs[1]);
                a.insert(b.begin(), b.end());
                return a;
            }
            case Rule::Par:
            case Rule::Plus1:
            case Rule::Plus2:
                return th(n->subs[0]);
            default:
                throw MallError("Internal", "unexpected rule");
        }
    };

    MallNet net;
    net.seq.concs = d->conclusion;
    for (const Formula& h : d->hypotheses) net.seq.hyp_locs.push_back(h->loc);
    for (const Linking& l : th(d)) net.linkings.push_back(l);
    canonicalize(net);
    return net;
}

// ---------------------------------------------------------------------------
// Net equality through paths

namespace {

// re-paths the net with roots permuted by perm (index in net -> presented slot)
std::set<std::vector<std::pair<std::string, std::string>>> link_paths_under(
    const Forest& f, const MallNet& n, const std::vector<int>& perm) {
    std::set<std::vector<std::pair<std::string, std::string>>> out;
    auto repath = [&](int loc) {
        std::string p = f.nodes[f.node_by_loc.at(loc)].path;
        size_t dot = p.find('.');
        std::string root = dot == std::string::npos ? p : p.substr(0, dot);
        std::string rest = dot == std::string::npos ? "" : p.substr(dot);
        return std::to_string(perm[std::stoi(root)]) + rest;
    };
    for (const Linking& l : n.linkings) {
        std::vector<std::pair<std::string, std::string>> lp;
        for (const AxLink& link : l) {
            std::string pa = repath(link.a);
            std::string pb = repath(link.b);
            if (pb < pa) std::swap(pa, pb);
            lp.push_back({pa, pb});
        }
        std::sort(lp.begin(), lp.end());
        out.insert(lp);
    }
    return out;
}

std::set<std::string> hyp_paths_under(const Forest& f, const std::vector<int>& perm) {
    std::set<std::string> out;
    for (const auto& h : f.hyps) {
        size_t dot = h.path.find('.');
        std::string root = dot == std::string::npos ? h.path : h.path.substr(0, dot);
        std::string rest = dot == std::string::npos ? "" : h.path.substr(dot);
        out.insert(std::to_string(perm[std::stoi(root)]) + rest);
    }
    return out;
}

}  // namespace

// Sequents are sets, so nets are compared up to a permutation of the
// conclusion roots (matching untagged formulas).
bool same_net(const MallNet& a, const MallNet& b) {
    size_t n = a.seq.concs.size();
    if (n != b.seq.concs.size()) return false;
    Forest fa = build_forest(a.seq), fb = build_forest(b.seq);
    std::vector<int> ident(n);
    for (size_t i = 0; i < n; ++i) ident[i] = static_cast<int>(i);
    auto b_hyps = hyp_paths_under(fb, ident);
    auto b_links = link_paths_under(fb, b, ident);

    std::vector<int> perm(n, -1);
    std::vector<char> used(n, 0);
    std::function<bool(size_t)> assign = [&](size_t i) -> bool {
        if (i == n) {
            return hyp_paths_under(fa, perm) == b_hyps &&
                   link_paths_under(fa, a, perm) == b_links;
        }
        for (size_t j = 0; j < n; ++j) {
            if (used[j] || !untagged_equal(a.seq.concs[i], b.seq.concs[j])) continue;
            perm[i] = static_cast<int>(j);
            used[j] = 1;
            if (assign(i + 1)) return true;
            used[j] = 0;
            perm[i] = -1;
        }
        return false;
    };
    return assign(0);
}

}  // namespace proofweave
