#include "proofweave/mll.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

namespace proofweave {

std::string vkind_name(VKind k) {
    switch (k) {
        case VKind::Ax:
            return "ax";
        case VKind::Cut:
            return "cut";
        case VKind::Tensor:
            return "tensor";
        case VKind::Par:
            return "par";
    }
    return "?";
}

std::optional<VKind> vkind_from(const std::string& s) {
    if (s == "ax") return VKind::Ax;
    if (s == "cut") return VKind::Cut;
    if (s == "tensor") return VKind::Tensor;
    if (s == "par") return VKind::Par;
    return std::nullopt;
}

std::vector<int> ProofStructure::premises(int v) const {
    std::vector<int> out;
    for (int e = 0; e < ecount(); ++e)
        if (etgt[e] == v) out.push_back(e);
    return out;
}

std::vector<int> ProofStructure::conclusions(int v) const {
    std::vector<int> out;
    for (int e = 0; e < ecount(); ++e)
        if (esrc[e] == v) out.push_back(e);
    return out;
}

std::vector<int> ProofStructure::ps_premises() const {
    std::vector<int> out;
    for (int e = 0; e < ecount(); ++e)
        if (esrc[e] == -1) out.push_back(e);
    return out;
}

std::vector<int> ProofStructure::ps_conclusions() const {
    std::vector<int> out;
    for (int e = 0; e < ecount(); ++e)
        if (etgt[e] == -1) out.push_back(e);
    return out;
}

bool ProofStructure::is_terminal(int v) const {
    for (int e : conclusions(v))
        if (etgt[e] != -1) return false;
    return true;
}

namespace {

int index_of_name(const std::vector<std::string>& names, const std::string& s) {
    auto it = std::lower_bound(names.begin(), names.end(), s);
    if (it == names.end() || *it != s) return -1;
    return static_cast<int>(it - names.begin());
}

FKind connective_of(VKind k) { return k == VKind::Tensor ? FKind::Tensor : FKind::Par; }

}  // namespace

ProofStructure validate_ps(const RawPs& raw) {
    ProofStructure ps;
    ps.untyped = raw.untyped;

    std::vector<const RawPs::V*> vs;
    for (const auto& v : raw.vertices) vs.push_back(&v);
    std::sort(vs.begin(), vs.end(), [](auto* a, auto* b) { return a->id < b->id; });
    for (size_t i = 1; i < vs.size(); ++i)
        if (vs[i]->id == vs[i - 1]->id) throw PsError("DuplicateId", "vertex " + vs[i]->id);
    for (auto* v : vs) {
        auto k = vkind_from(v->kind);
        if (!k) throw PsError("ArityViolation", "unknown vertex kind " + v->kind);
        ps.kinds.push_back(*k);
        ps.vnames.push_back(v->id);
    }

    std::vector<const RawPs::E*> es;
    for (const auto& e : raw.edges) es.push_back(&e);
    std::sort(es.begin(), es.end(), [](auto* a, auto* b) { return a->id < b->id; });
    for (size_t i = 1; i < es.size(); ++i)
        if (es[i]->id == es[i - 1]->id) throw PsError("DuplicateId", "edge " + es[i]->id);
    for (auto* e : es) {
        int s = -1, t = -1;
        if (!e->src.empty()) {
            s = index_of_name(ps.vnames, e->src);
            if (s < 0) throw PsError("UnknownVertex", e->src);
        }
        if (!e->tgt.empty()) {
            t = index_of_name(ps.vnames, e->tgt);
            if (t < 0) throw PsError("UnknownVertex", e->tgt);
        }
        ps.enames.push_back(e->id);
        ps.esrc.push_back(s);
        ps.etgt.push_back(t);
    }
    ps.etypes.assign(ps.ecount(), nullptr);

    // arities
    for (int v = 0; v < ps.vcount(); ++v) {
        size_t np = ps.premises(v).size(), nc = ps.conclusions(v).size();
        bool ok = false;
        switch (ps.kinds[v]) {
            case VKind::Ax:
                ok = np == 0 && nc == 2;
                break;
            case VKind::Cut:
                ok = np == 2 && nc == 0;
                break;
            case VKind::Tensor:
            case VKind::Par:
                ok = np == 2 && nc == 1;
                break;
        }
        if (!ok) throw PsError("ArityViolation", "vertex " + ps.vnames[v]);
    }

    // directed acyclicity
    {
        std::vector<int> state(ps.vcount(), 0);
        std::function<void(int)> dfs = [&](int v) {
            state[v] = 1;
            for (int e : ps.conclusions(v)) {
                int w = ps.etgt[e];
                if (w < 0) continue;
                if (state[w] == 1) throw PsError("DirectedCycle", "through " + ps.vnames[w]);
                if (state[w] == 0) dfs(w);
            }
            state[v] = 2;
        };
        for (int v = 0; v < ps.vcount(); ++v)
            if (state[v] == 0) dfs(v);
    }

    if (ps.untyped) return ps;

    // typing; locations are rebuilt fresh from the initial edges downward
    LocGen gen;
    std::vector<Formula> given(ps.ecount());
    for (int e = 0; e < ps.ecount(); ++e) {
        if (es[e]->type.empty()) throw PsError("TypeMismatch", "edge " + ps.enames[e] + " untyped");
        try {
            given[e] = parse_formula(es[e]->type, gen);
        } catch (const FormulaError& err) {
            throw PsError("TypeMismatch", std::string(err.what()));
        }
    }

    std::vector<Formula> typed(ps.ecount(), nullptr);
    auto initial = [&](int e) {
        return ps.esrc[e] == -1 || ps.kinds[ps.esrc[e]] == VKind::Ax;
    };
    for (int e = 0; e < ps.ecount(); ++e)
        if (initial(e)) typed[e] = given[e];

    // propagate along a topological order of vertices
    {
        std::vector<int> order;
        std::vector<int> state(ps.vcount(), 0);
        std::function<void(int)> dfs = [&](int v) {
            state[v] = 1;
            for (int e : ps.premises(v)) {
                int w = ps.esrc[e];
                if (w >= 0 && state[w] == 0) dfs(w);
            }
            order.push_back(v);
            state[v] = 2;
        };
        for (int v = 0; v < ps.vcount(); ++v)
            if (state[v] == 0) dfs(v);

        for (int v : order) {
            VKind k = ps.kinds[v];
            if (k == VKind::Tensor || k == VKind::Par) {
                auto pre = ps.premises(v);
                int ce = ps.conclusions(v)[0];
                Formula a = typed[pre[0]], b = typed[pre[1]];
                if (!a || !b) throw PsError("TypeMismatch", "untyped premise of " + ps.vnames[v]);
                const Formula& want = given[ce];
                FKind fk = connective_of(k);
                if (want->kind != fk) throw PsError("TypeMismatch", "edge " + ps.enames[ce]);
                Formula built;
                if (untagged_equal(want->left, a) && untagged_equal(want->right, b))
                    built = mk_bin(fk, a, b, gen.fresh());
                else if (untagged_equal(want->left, b) && untagged_equal(want->right, a))
                    built = mk_bin(fk, b, a, gen.fresh());
                else
                    throw PsError("TypeMismatch", "edge " + ps.enames[ce]);
                typed[ce] = built;
            }
        }
    }
    for (int v = 0; v < ps.vcount(); ++v) {
        if (ps.kinds[v] == VKind::Ax) {
            auto con = ps.conclusions(v);
            if (!untagged_dual(typed[con[0]], typed[con[1]]))
                throw PsError("TypeMismatch", "ax " + ps.vnames[v]);
        } else if (ps.kinds[v] == VKind::Cut) {
            auto pre = ps.premises(v);
            if (!typed[pre[0]] || !typed[pre[1]] || !untagged_dual(typed[pre[0]], typed[pre[1]]))
                throw PsError("TypeMismatch", "cut " + ps.vnames[v]);
        }
    }
    for (int e = 0; e < ps.ecount(); ++e) {
        if (!typed[e]) throw PsError("TypeMismatch", "edge " + ps.enames[e]);
        if (!is_mll(typed[e])) throw PsError("TypeMismatch", "additive type on " + ps.enames[e]);
    }
    // initial edges carry pairwise disjoint location sets by the fresh parse;
    // location clashes can only come from within a single given formula
    for (int e = 0; e < ps.ecount(); ++e) {
        std::vector<int> locs = locations(typed[e]);
        std::sort(locs.begin(), locs.end());
        if (std::adjacent_find(locs.begin(), locs.end()) != locs.end())
            throw PsError("LocationClash", "edge " + ps.enames[e]);
    }
    ps.etypes = typed;
    return ps;
}

WellColoring well_color(const ProofStructure& ps) {
    GraphSpec spec;
    spec.vertices = ps.vnames;
    spec.colors = {"dashed", "dotted", "solid"};

    auto color_for = [&](int v, int e) -> std::string {
        VKind k = ps.kinds[v];
        bool is_premise = ps.etgt[e] == v;
        std::vector<int> group = is_premise ? ps.premises(v) : ps.conclusions(v);
        int slot = static_cast<int>(std::find(group.begin(), group.end(), e) - group.begin());
        switch (k) {
            case VKind::Ax:
            case VKind::Cut:
                return slot == 0 ? "solid" : "dotted";
            case VKind::Tensor:
                if (is_premise) return slot == 0 ? "solid" : "dotted";
                return "dashed";
            case VKind::Par:
                return is_premise ? "solid" : "dashed";
        }
        return "solid";
    };

    for (int e = 0; e < ps.ecount(); ++e) {
        GraphSpec::EdgeSpec es;
        es.id = ps.enames[e];
        if (ps.esrc[e] >= 0)
            es.ends.push_back({ps.vnames[ps.esrc[e]], color_for(ps.esrc[e], e)});
        if (ps.etgt[e] >= 0)
            es.ends.push_back({ps.vnames[ps.etgt[e]], color_for(ps.etgt[e], e)});
        spec.edges.push_back(std::move(es));
    }

    WellColoring wc;
    wc.graph = LocallyColoredGraph::build(spec);
    // index alignment: names were already sorted
    for (int v = 0; v < ps.vcount(); ++v) assert(wc.graph.vertex_name(v) == ps.vnames[v]);

    wc.clauses_ok = true;
    for (int v = 0; v < ps.vcount(); ++v) {
        auto pre = ps.premises(v);
        auto con = ps.conclusions(v);
        auto col = [&](int e) { return wc.graph.color_at(*wc.graph.edge_index(ps.enames[e]), v); };
        switch (ps.kinds[v]) {
            case VKind::Ax:
                if (col(con[0]) == col(con[1])) wc.clauses_ok = false;
                break;
            case VKind::Cut:
                if (col(pre[0]) == col(pre[1])) wc.clauses_ok = false;
                break;
            case VKind::Tensor:
                if (col(pre[0]) == col(pre[1]) || col(pre[0]) == col(con[0]) ||
                    col(pre[1]) == col(con[0]))
                    wc.clauses_ok = false;
                break;
            case VKind::Par:
                if (col(pre[0]) != col(pre[1]) || col(pre[0]) == col(con[0]))
                    wc.clauses_ok = false;
                break;
        }
    }
    wc.cusp_pts = cusp_points(wc.graph);
    return wc;
}

DrReport dr_check(const ProofStructure& ps) {
    DrReport rep;
    if (ps.empty()) {
        rep.correct = true;
        rep.degree = 0;
        return rep;
    }
    WellColoring wc = well_color(ps);
    if (auto cyc = find_cuspfree_cycle(wc.graph)) {
        rep.correct = false;
        rep.switching_cycle = *cyc;
        return rep;
    }
    rep.correct = true;

    // one correctness graph: drop the target of the second premise of each par
    GraphSpec spec;
    spec.vertices = ps.vnames;
    spec.colors = {"k"};
    std::set<int> dropped;
    for (int v = 0; v < ps.vcount(); ++v)
        if (ps.kinds[v] == VKind::Par) dropped.insert(ps.premises(v)[1]);
    for (int e = 0; e < ps.ecount(); ++e) {
        GraphSpec::EdgeSpec es;
        es.id = ps.enames[e];
        if (ps.esrc[e] >= 0) es.ends.push_back({ps.vnames[ps.esrc[e]], "k"});
        if (ps.etgt[e] >= 0 && !dropped.count(e))
            es.ends.push_back({ps.vnames[ps.etgt[e]], "k"});
        spec.edges.push_back(std::move(es));
    }
    rep.degree = static_cast<int>(connected_components(LocallyColoredGraph::build(spec)).size());
    return rep;
}

// ---------------------------------------------------------------------------
// Derivations

std::string rule_name(Rule r) {
    switch (r) {
        case Rule::Ax:
            return "ax";
        case Rule::Cut:
            return "cut";
        case Rule::Tensor:
            return "tensor";
        case Rule::Par:
            return "par";
        case Rule::Mix2:
            return "mix2";
        case Rule::Mix0:
            return "mix0";
        case Rule::Hyp:
            return "hyp";
        case Rule::With:
            return "with";
        case Rule::Plus1:
            return "plus1";
        case Rule::Plus2:
            return "plus2";
    }
    return "?";
}

namespace {

int concl_index(const Deriv& d, const Formula& f) {
    for (size_t i = 0; i < d->conclusion.size(); ++i)
        if (localized_equal(d->conclusion[i], f)) return static_cast<int>(i);
    return -1;
}

std::vector<Formula> without_index(const std::vector<Formula>& fs, int i) {
    std::vector<Formula> out;
    for (size_t k = 0; k < fs.size(); ++k)
        if (static_cast<int>(k) != i) out.push_back(fs[k]);
    return out;
}

std::vector<int> deriv_locs(const Deriv& d) {
    std::vector<int> out;
    for (const Formula& f : d->conclusion) collect_locations(f, out);
    for (const Formula& f : d->hypotheses) collect_locations(f, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void check_disjoint(const Deriv& a, const Deriv& b, const char* what) {
    std::vector<int> la = deriv_locs(a), lb = deriv_locs(b);
    std::vector<int> inter;
    std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(inter));
    if (!inter.empty()) throw DerivError("LocationClash", what);
}

std::vector<Formula> merge_hyps(const std::vector<Formula>& a, const std::vector<Formula>& b) {
    std::vector<Formula> out = a;
    for (const Formula& f : b) {
        bool dup = false;
        for (const Formula& g : out)
            if (localized_equal(f, g)) dup = true;
        if (!dup) out.push_back(f);
    }
    return out;
}

}  // namespace

Deriv d_ax_pair(const Formula& neg, const Formula& pos) {
    if (!untagged_dual(neg, pos)) throw DerivError("NotDual", "ax conclusions not dual");
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::Ax;
    d->conclusion = {neg, pos};
    d->pa = neg;
    d->pb = pos;
    d->principal = pos;
    return d;
}

Deriv d_ax(const Formula& pos, LocGen& gen) { return d_ax_pair(dual(pos, gen), pos); }

Deriv d_hyp(const Formula& a) {
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::Hyp;
    d->conclusion = {a};
    d->hypotheses = {a};
    d->principal = a;
    return d;
}

Deriv d_mix0() {
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::Mix0;
    return d;
}

Deriv d_mix2(const Deriv& a, const Deriv& b) {
    check_disjoint(a, b, "mix2 branches share locations");
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::Mix2;
    d->subs = {a, b};
    d->conclusion = a->conclusion;
    d->conclusion.insert(d->conclusion.end(), b->conclusion.begin(), b->conclusion.end());
    d->hypotheses = merge_hyps(a->hypotheses, b->hypotheses);
    return d;
}

Deriv d_tensor(const Deriv& a, const Formula& fa, const Deriv& b, const Formula& fb, int loc) {
    int ia = concl_index(a, fa), ib = concl_index(b, fb);
    if (ia < 0 || ib < 0) throw DerivError("NoSuchConclusion", "tensor principal missing");
    check_disjoint(a, b, "tensor branches share locations");
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::Tensor;
    d->subs = {a, b};
    d->pa = fa;
    d->pb = fb;
    d->principal = mk_bin(FKind::Tensor, fa, fb, loc);
    d->conclusion = {d->principal};
    for (const Formula& f : without_index(a->conclusion, ia)) d->conclusion.push_back(f);
    for (const Formula& f : without_index(b->conclusion, ib)) d->conclusion.push_back(f);
    d->hypotheses = merge_hyps(a->hypotheses, b->hypotheses);
    return d;
}

Deriv d_par(const Deriv& a, const Formula& fa, const Formula& fb, int loc) {
    int ia = concl_index(a, fa), ib = concl_index(a, fb);
    if (ia < 0 || ib < 0 || ia == ib) throw DerivError("NoSuchConclusion", "par principals missing");
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::Par;
    d->subs = {a};
    d->pa = fa;
    d->pb = fb;
    d->principal = mk_bin(FKind::Par, fa, fb, loc);
    d->conclusion = {d->principal};
    for (size_t k = 0; k < a->conclusion.size(); ++k)
        if (static_cast<int>(k) != ia && static_cast<int>(k) != ib)
            d->conclusion.push_back(a->conclusion[k]);
    d->hypotheses = a->hypotheses;
    return d;
}

Deriv d_cut(const Deriv& a, const Formula& fa, const Deriv& b, const Formula& fb) {
    int ia = concl_index(a, fa), ib = concl_index(b, fb);
    if (ia < 0 || ib < 0) throw DerivError("NoSuchConclusion", "cut premises missing");
    if (!untagged_dual(fa, fb)) throw DerivError("NotDual", "cut formulas not dual");
    check_disjoint(a, b, "cut branches share locations");
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::Cut;
    d->subs = {a, b};
    d->pa = fa;
    d->pb = fb;
    d->conclusion = without_index(a->conclusion, ia);
    for (const Formula& f : without_index(b->conclusion, ib)) d->conclusion.push_back(f);
    d->hypotheses = merge_hyps(a->hypotheses, b->hypotheses);
    return d;
}

Deriv d_with(const Deriv& a, const Formula& fa, const Deriv& b, const Formula& fb, int loc) {
    int ia = concl_index(a, fa), ib = concl_index(b, fb);
    if (ia < 0 || ib < 0) throw DerivError("NoSuchConclusion", "with principals missing");
    std::vector<Formula> ctx_a = without_index(a->conclusion, ia);
    std::vector<Formula> ctx_b = without_index(b->conclusion, ib);
    if (ctx_a.size() != ctx_b.size()) throw DerivError("ContextMismatch", "with contexts differ");
    std::vector<char> used(ctx_b.size(), 0);
    for (const Formula& f : ctx_a) {
        bool found = false;
        for (size_t k = 0; k < ctx_b.size(); ++k)
            if (!used[k] && localized_equal(f, ctx_b[k])) {
                used[k] = 1;
                found = true;
                break;
            }
        if (!found) throw DerivError("ContextMismatch", "with contexts differ");
    }
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::With;
    d->subs = {a, b};
    d->pa = fa;
    d->pb = fb;
    d->principal = mk_bin(FKind::With, fa, fb, loc);
    d->conclusion = {d->principal};
    for (const Formula& f : ctx_a) d->conclusion.push_back(f);
    d->hypotheses = merge_hyps(a->hypotheses, b->hypotheses);
    return d;
}

namespace {

Deriv d_plus(const Deriv& a, const Formula& kept, const Formula& other, int loc, bool left) {
    int ia = concl_index(a, kept);
    if (ia < 0) throw DerivError("NoSuchConclusion", "plus principal missing");
    auto d = std::make_shared<Derivation>();
    d->rule = left ? Rule::Plus1 : Rule::Plus2;
    d->subs = {a};
    d->pa = kept;
    d->pb = other;
    d->principal = left ? mk_bin(FKind::Plus, kept, other, loc)
                        : mk_bin(FKind::Plus, other, kept, loc);
    d->conclusion = {d->principal};
    for (const Formula& f : without_index(a->conclusion, ia)) d->conclusion.push_back(f);
    d->hypotheses = a->hypotheses;
    return d;
}

}  // namespace

Deriv d_plus1(const Deriv& a, const Formula& fa, const Formula& other, int loc) {
    return d_plus(a, fa, other, loc, true);
}

Deriv d_plus2(const Deriv& a, const Formula& fb, const Formula& other, int loc) {
    return d_plus(a, fb, other, loc, false);
}

int count_rule(const Deriv& d, Rule r) {
    int n = d->rule == r ? 1 : 0;
    for (const Deriv& s : d->subs) n += count_rule(s, r);
    return n;
}

bool derivation_is_mll(const Deriv& d) {
    if (d->rule == Rule::With || d->rule == Rule::Plus1 || d->rule == Rule::Plus2) return false;
    for (const Deriv& s : d->subs)
        if (!derivation_is_mll(s)) return false;
    return true;
}

int max_location(const Deriv& d) {
    int best = -1;
    for (int l : deriv_locs(d)) best = std::max(best, l);
    for (const Deriv& s : d->subs) best = std::max(best, max_location(s));
    return best;
}

Deriv substitute(const Deriv& provider, const Formula& hyp, const Deriv& host) {
    int found = 0;
    std::function<Deriv(const Deriv&)> walk = [&](const Deriv& d) -> Deriv {
        if (d->rule == Rule::Hyp && localized_equal(d->principal, hyp)) {
            ++found;
            return provider;
        }
        if (d->subs.empty()) return d;
        std::vector<Deriv> subs;
        bool changed = false;
        for (const Deriv& s : d->subs) {
            Deriv r = walk(s);
            if (r != s) changed = true;
            subs.push_back(r);
        }
        if (!changed) return d;
        switch (d->rule) {
            case Rule::Mix2:
                return d_mix2(subs[0], subs[1]);
            case Rule::Tensor:
                return d_tensor(subs[0], d->pa, subs[1], d->pb, d->principal->loc);
            case Rule::Par:
                return d_par(subs[0], d->pa, d->pb, d->principal->loc);
            case Rule::Cut:
                return d_cut(subs[0], d->pa, subs[1], d->pb);
            case Rule::With:
                return d_with(subs[0], d->pa, subs[1], d->pb, d->principal->loc);
            case Rule::Plus1:
                return d_plus1(subs[0], d->pa, d->pb, d->principal->loc);
            case Rule::Plus2:
                return d_plus2(subs[0], d->pa, d->pb, d->principal->loc);
            default:
                throw DerivError("BadRule", "substitute");
        }
    };
    // location discipline: provider and host may only share the hyp formula
    {
        std::vector<int> lp = deriv_locs(provider), lh = deriv_locs(host);
        std::vector<int> inter;
        std::set_intersection(lp.begin(), lp.end(), lh.begin(), lh.end(),
                              std::back_inserter(inter));
        std::vector<int> allowed = locations(hyp);
        std::sort(allowed.begin(), allowed.end());
        if (!std::includes(allowed.begin(), allowed.end(), inter.begin(), inter.end()))
            throw DerivError("LocationClash", "substitution shares locations beyond the hypothesis");
    }
    Deriv out = walk(host);
    if (found == 0) throw DerivError("NoSuchHypothesis", "substitute");
    return out;
}

Deriv mixretore_normalize(const Deriv& d) {
    if (d->subs.empty()) return d;
    std::vector<Deriv> subs;
    for (const Deriv& s : d->subs) subs.push_back(mixretore_normalize(s));
    if (d->rule == Rule::Mix2) {
        if (subs[0]->rule == Rule::Mix0) return subs[1];
        if (subs[1]->rule == Rule::Mix0) return subs[0];
    }
    bool changed = false;
    for (size_t i = 0; i < subs.size(); ++i)
        if (subs[i] != d->subs[i]) changed = true;
    if (!changed) return d;
    switch (d->rule) {
        case Rule::Mix2:
            return d_mix2(subs[0], subs[1]);
        case Rule::Tensor:
            return d_tensor(subs[0], d->pa, subs[1], d->pb, d->principal->loc);
        case Rule::Par:
            return d_par(subs[0], d->pa, d->pb, d->principal->loc);
        case Rule::Cut:
            return d_cut(subs[0], d->pa, subs[1], d->pb);
        case Rule::With:
            return d_with(subs[0], d->pa, subs[1], d->pb, d->principal->loc);
        case Rule::Plus1:
            return d_plus1(subs[0], d->pa, d->pb, d->principal->loc);
        case Rule::Plus2:
            return d_plus2(subs[0], d->pa, d->pb, d->principal->loc);
        default:
            return d;
    }
}

namespace {

struct PsBuilder {
    std::vector<VKind> kinds;
    std::vector<int> src, tgt;
    std::vector<Formula> types;
    std::map<int, int> by_loc;  // root location -> edge index (live conclusions)
    std::vector<int> vertex_rule;

    int add_vertex(VKind k, int rule_id) {
        kinds.push_back(k);
        vertex_rule.push_back(rule_id);
        return static_cast<int>(kinds.size()) - 1;
    }
    int add_edge(int s, int t, const Formula& f) {
        src.push_back(s);
        tgt.push_back(t);
        types.push_back(f);
        return static_cast<int>(src.size()) - 1;
    }
    int take(const Formula& f) {
        auto it = by_loc.find(f->loc);
        if (it == by_loc.end()) throw DerivError("Internal", "missing conclusion edge");
        int e = it->second;
        by_loc.erase(it);
        return e;
    }
};

void deseq_rec(const Deriv& d, PsBuilder& b, int& rule_counter) {
    int my_rule = rule_counter++;
    switch (d->rule) {
        case Rule::Ax: {
            int v = b.add_vertex(VKind::Ax, my_rule);
            b.by_loc[d->pa->loc] = b.add_edge(v, -1, d->pa);
            b.by_loc[d->pb->loc] = b.add_edge(v, -1, d->pb);
            break;
        }
        case Rule::Hyp: {
            b.by_loc[d->principal->loc] = b.add_edge(-1, -1, d->principal);
            break;
        }
        case Rule::Mix0:
            break;
        case Rule::Mix2:
            deseq_rec(d->subs[0], b, rule_counter);
            deseq_rec(d->subs[1], b, rule_counter);
            break;
        case Rule::Cut: {
            deseq_rec(d->subs[0], b, rule_counter);
            deseq_rec(d->subs[1], b, rule_counter);
            int v = b.add_vertex(VKind::Cut, my_rule);
            b.tgt[b.take(d->pa)] = v;
            b.tgt[b.take(d->pb)] = v;
            break;
        }
        case Rule::Tensor: {
            deseq_rec(d->subs[0], b, rule_counter);
            deseq_rec(d->subs[1], b, rule_counter);
            int v = b.add_vertex(VKind::Tensor, my_rule);
            b.tgt[b.take(d->pa)] = v;
            b.tgt[b.take(d->pb)] = v;
            b.by_loc[d->principal->loc] = b.add_edge(v, -1, d->principal);
            break;
        }
        case Rule::Par: {
            deseq_rec(d->subs[0], b, rule_counter);
            int v = b.add_vertex(VKind::Par, my_rule);
            b.tgt[b.take(d->pa)] = v;
            b.tgt[b.take(d->pb)] = v;
            b.by_loc[d->principal->loc] = b.add_edge(v, -1, d->principal);
            break;
        }
        default:
            throw DerivError("NotMll", "additive rule in MLL desequentialization");
    }
}

std::string padded(const char* prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s%04d", prefix, i);
    return buf;
}

}  // namespace

DeseqResult desequentialize(const Deriv& d) {
    PsBuilder b;
    int counter = 0;
    deseq_rec(d, b, counter);
    DeseqResult out;
    ProofStructure& ps = out.ps;
    ps.kinds = b.kinds;
    ps.esrc = b.src;
    ps.etgt = b.tgt;
    ps.etypes = b.types;
    for (size_t i = 0; i < b.kinds.size(); ++i) ps.vnames.push_back(padded("v", static_cast<int>(i)));
    for (size_t i = 0; i < b.src.size(); ++i) ps.enames.push_back(padded("e", static_cast<int>(i)));
    out.vertex_rule = b.vertex_rule;
    return out;
}

// ---------------------------------------------------------------------------
// Orders and splitting strategies

namespace {

// Enumerates simple cusp-free par-paths from par-vertex a in the well-colored
// graph: first edge is a's conclusion, accepted states end with a premise of a
// par-vertex. visit(target_vertex, path) may return true to stop.
template <typename Visit>
void walk_par_paths(const ProofStructure& ps, const LocallyColoredGraph& g, int a,
                    Visit&& visit) {
    auto con = ps.conclusions(a);
    if (con.empty()) return;
    Edge ce = *g.edge_index(ps.enames[con[0]]);
    auto start = g.other_end(ce, a);
    if (!start) return;

    std::vector<char> visited(g.vertex_count(), 0);
    visited[a] = 1;
    Path path;
    path.g = &g;
    path.verts = {a, *start};
    path.edges = {ce};
    visited[*start] = 1;

    std::function<bool()> step = [&]() -> bool {
        Vertex at = path.verts.back();
        Edge last = path.edges.back();
        // par-path end state: `last` is a premise of a par-vertex `at`
        if (at != a && ps.kinds[at] == VKind::Par) {
            int e_ps = index_of_name(ps.enames, g.edge_name(last));
            if (ps.etgt[e_ps] == at) {
                if (visit(at, path)) return true;
            }
        }
        for (Edge e : g.edges_at(at)) {
            auto w = g.other_end(e, at);
            if (!w || visited[*w]) continue;
            if (e == last) continue;
            if (g.color_at(e, at) == g.color_at(last, at)) continue;
            path.edges.push_back(e);
            path.verts.push_back(*w);
            visited[*w] = 1;
            bool stop = step();
            visited[*w] = 0;
            path.verts.pop_back();
            path.edges.pop_back();
            if (stop) return true;
        }
        return false;
    };
    step();
}

}  // namespace

bool order_parr(const ProofStructure& ps, int v, int u) {
    if (v == u) return false;
    if (ps.kinds[v] != VKind::Par || ps.kinds[u] != VKind::Par) return false;
    WellColoring wc = well_color(ps);
    std::set<int> reach_u;
    walk_par_paths(ps, wc.graph, u, [&](int t, const Path&) {
        reach_u.insert(t);
        return false;
    });
    bool holds = false;
    walk_par_paths(ps, wc.graph, v, [&](int t, const Path& p) {
        if (t != u) return false;
        for (Vertex w : p.verts)
            if (reach_u.count(w)) return false;
        holds = true;
        return true;
    });
    return holds;
}

std::optional<MllStrategy> mll_strategy_from(const std::string& s) {
    if (s == "all-pairs") return MllStrategy::AllPairs;
    if (s == "sections") return MllStrategy::Sections;
    if (s == "terminal") return MllStrategy::Terminal;
    if (s == "non-ax") return MllStrategy::NonAx;
    if (s == "direct-par") return MllStrategy::DirectPar;
    return std::nullopt;
}

SplitPs find_splitting_ps(const ProofStructure& ps, MllStrategy strategy) {
    SplitPs out;
    if (ps.vcount() == 0) {
        out.error = "Empty";
        return out;
    }
    DrReport rep = dr_check(ps);
    if (!rep.correct) {
        out.error = "NotCorrect";
        return out;
    }
    WellColoring wc = well_color(ps);
    const LocallyColoredGraph& g = wc.graph;

    auto fallback_parfree = [&]() {
        // par-free proof net: every vertex splitting
        out.ok = true;
        out.vertex = 0;
        return out;
    };

    if (strategy == MllStrategy::DirectPar) {
        std::vector<int> pars;
        for (int v = 0; v < ps.vcount(); ++v)
            if (ps.kinds[v] == VKind::Par) pars.push_back(v);
        if (pars.empty()) return fallback_parfree();
        for (int v : pars) {
            bool beaten = false;
            for (int u : pars)
                if (u != v && order_parr(ps, v, u)) {
                    beaten = true;
                    break;
                }
            if (!beaten) {
                out.ok = true;
                out.vertex = v;
                return out;
            }
        }
        out.error = "Internal";  // unreachable: the order is strict on a finite set
        return out;
    }

    std::vector<VertexColorPair> pairs;
    switch (strategy) {
        case MllStrategy::AllPairs:
            pairs = all_pairs(g);
            break;
        case MllStrategy::Sections:
            pairs = cusp_points(g);
            break;
        case MllStrategy::Terminal:
            for (int v = 0; v < ps.vcount(); ++v) {
                std::set<Color> concl_colors;
                for (int e : ps.conclusions(v))
                    concl_colors.insert(g.color_at(*g.edge_index(ps.enames[e]), v));
                for (Color c = 0; c < g.color_count(); ++c)
                    if (!concl_colors.count(c)) pairs.push_back({v, c});
            }
            break;
        case MllStrategy::NonAx:
            for (int v = 0; v < ps.vcount(); ++v)
                if (ps.kinds[v] != VKind::Ax)
                    for (Color c = 0; c < g.color_count(); ++c) pairs.push_back({v, c});
            break;
        default:
            break;
    }
    if (pairs.empty()) return fallback_parfree();
    ParamSplit res = find_splitting_param(g, pairs);
    if (res.status != ParamSplit::Status::Found) {
        out.error = "Internal";
        return out;
    }
    out.ok = true;
    out.vertex = res.vertex;
    return out;
}

// ---------------------------------------------------------------------------
// Structure surgery

ProofStructure ps_restrict(const ProofStructure& ps, const std::vector<int>& verts,
                           const std::vector<int>& edges) {
    ProofStructure out;
    out.untyped = ps.untyped;
    std::vector<int> vmap(ps.vcount(), -1);
    for (int v : verts) {
        vmap[v] = static_cast<int>(out.kinds.size());
        out.kinds.push_back(ps.kinds[v]);
        out.vnames.push_back(ps.vnames[v]);
    }
    for (int e : edges) {
        out.enames.push_back(ps.enames[e]);
        out.esrc.push_back(ps.esrc[e] >= 0 ? vmap[ps.esrc[e]] : -1);
        out.etgt.push_back(ps.etgt[e] >= 0 ? vmap[ps.etgt[e]] : -1);
        out.etypes.push_back(ps.etypes.empty() ? nullptr : ps.etypes[e]);
    }
    return out;
}

std::vector<ProofStructure> ps_components(const ProofStructure& ps) {
    int nv = ps.vcount(), ne = ps.ecount();
    std::vector<int> parent(nv + ne);
    for (int i = 0; i < nv + ne; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int e = 0; e < ne; ++e) {
        if (ps.esrc[e] >= 0) parent[find(nv + e)] = find(ps.esrc[e]);
        if (ps.etgt[e] >= 0) parent[find(nv + e)] = find(ps.etgt[e]);
    }
    std::map<int, std::pair<std::vector<int>, std::vector<int>>> groups;
    for (int v = 0; v < nv; ++v) groups[find(v)].first.push_back(v);
    for (int e = 0; e < ne; ++e) groups[find(nv + e)].second.push_back(e);
    std::vector<ProofStructure> out;
    for (auto& [root, g] : groups) out.push_back(ps_restrict(ps, g.first, g.second));
    return out;
}

namespace {

ProofStructure ps_remove_vertex(const ProofStructure& ps, int v) {
    std::vector<int> verts;
    for (int w = 0; w < ps.vcount(); ++w)
        if (w != v) verts.push_back(w);
    std::vector<int> edges;
    for (int e = 0; e < ps.ecount(); ++e) edges.push_back(e);
    return ps_restrict(ps, verts, edges);
}

// Merges the components of `parts` whose indices are flagged.
ProofStructure ps_union(const ProofStructure& whole, const std::vector<ProofStructure>& parts,
                        const std::vector<char>& take) {
    std::vector<int> verts, edges;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (!take[i]) continue;
        for (const std::string& n : parts[i].vnames)
            verts.push_back(index_of_name(whole.vnames, n));
        for (const std::string& n : parts[i].enames)
            edges.push_back(index_of_name(whole.enames, n));
    }
    std::sort(verts.begin(), verts.end());
    std::sort(edges.begin(), edges.end());
    return ps_restrict(whole, verts, edges);
}

bool ps_has_edge_named(const ProofStructure& ps, const std::string& name) {
    return index_of_name(ps.enames, name) >= 0;
}

}  // namespace

Deriv sequentialize(const ProofStructure& ps, MllStrategy strategy) {
    if (!ps.untyped) {
        for (int e = 0; e < ps.ecount(); ++e)
            if (!ps.etypes[e]) throw PsError("TypeMismatch", "sequentialize needs types");
    } else {
        throw PsError("Untyped", "sequentialize needs a typed structure");
    }
    DrReport rep = dr_check(ps);
    if (!rep.correct) throw PsError("NotCorrect", "structure has a switching cycle");

    std::function<Deriv(const ProofStructure&)> go = [&](const ProofStructure& cur) -> Deriv {
        if (cur.empty()) return d_mix0();
        std::vector<ProofStructure> comps = ps_components(cur);
        if (comps.size() > 1) {
            Deriv acc = go(comps[0]);
            for (size_t i = 1; i < comps.size(); ++i) acc = d_mix2(acc, go(comps[i]));
            return acc;
        }
        if (cur.vcount() == 0) return d_hyp(cur.etypes[0]);

        SplitPs sp = find_splitting_ps(cur, strategy);
        if (!sp.ok) throw PsError("Internal", "no splitting vertex: " + sp.error);
        int v = sp.vertex;
        ProofStructure rest = ps_remove_vertex(cur, v);
        std::vector<ProofStructure> parts = ps_components(rest);

        auto group_of = [&](int edge_idx) {
            const std::string& name = cur.enames[edge_idx];
            for (size_t i = 0; i < parts.size(); ++i)
                if (ps_has_edge_named(parts[i], name)) return static_cast<int>(i);
            throw PsError("Internal", "lost edge " + name);
        };
        auto merged_except = [&](std::vector<int> skip_groups) {
            std::vector<char> take(parts.size(), 1);
            for (int gidx : skip_groups) take[gidx] = 0;
            return ps_union(rest, parts, take);
        };

        switch (cur.kinds[v]) {
            case VKind::Par: {
                auto pre = cur.premises(v);
                int ce = cur.conclusions(v)[0];
                Formula C = cur.etypes[ce];
                Formula A = C->left, B = C->right;
                int g0 = group_of(ce);
                ProofStructure rho0 = parts[g0];
                ProofStructure rho1 = merged_except({g0});
                (void)pre;
                Deriv p1 = go(rho1);
                Deriv pp = d_par(p1, A, B, C->loc);
                Deriv p0 = go(rho0);
                return substitute(pp, C, p0);
            }
            case VKind::Tensor: {
                auto pre = cur.premises(v);
                int ce = cur.conclusions(v)[0];
                Formula C = cur.etypes[ce];
                Formula A = C->left, B = C->right;
                int ea = localized_equal(cur.etypes[pre[0]], A) ? pre[0] : pre[1];
                int eb = ea == pre[0] ? pre[1] : pre[0];
                if (!localized_equal(cur.etypes[ea], A) || !localized_equal(cur.etypes[eb], B))
                    throw PsError("Internal", "tensor premise types out of sync");
                int ga = group_of(ea), gb = group_of(eb), g0 = group_of(ce);
                if (ga == gb || ga == g0 || gb == g0)
                    throw PsError("Internal", "tensor split not disjoint");
                Deriv pa = go(parts[ga]);
                Deriv pb = go(parts[gb]);
                Deriv pt = d_tensor(pa, A, pb, B, C->loc);
                Deriv p0 = go(parts[g0]);
                return substitute(pt, C, p0);
            }
            case VKind::Cut: {
                auto pre = cur.premises(v);
                Formula F1 = cur.etypes[pre[0]], F2 = cur.etypes[pre[1]];
                int g1 = group_of(pre[0]), g2 = group_of(pre[1]);
                if (g1 == g2) throw PsError("Internal", "cut split not disjoint");
                Deriv p1 = go(parts[g1]);
                Deriv p2 = go(parts[g2]);
                return d_cut(p1, F1, p2, F2);
            }
            case VKind::Ax: {
                auto con = cur.conclusions(v);
                Formula N = cur.etypes[con[0]], P = cur.etypes[con[1]];
                int g1 = group_of(con[0]), g2 = group_of(con[1]);
                if (g1 == g2) throw PsError("Internal", "ax split not disjoint");
                Deriv p1 = go(parts[g1]);
                Deriv p2 = go(parts[g2]);
                Deriv withN = substitute(d_ax_pair(N, P), N, p1);
                return substitute(withN, P, p2);
            }
        }
        throw PsError("Internal", "unhandled vertex kind");
    };
    return go(ps);
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace {

std::string type_key(const Formula& f) { return f ? print_formula(f) : "?"; }

std::string vertex_signature(const ProofStructure& ps, int v) {
    std::vector<std::string> parts;
    for (int e = 0; e < ps.ecount(); ++e) {
        if (ps.esrc[e] == v) {
            int w = ps.etgt[e];
            parts.push_back("c" + type_key(ps.etypes.empty() ? nullptr : ps.etypes[e]) + "/" +
                            (w >= 0 ? vkind_name(ps.kinds[w]) : "-"));
        }
        if (ps.etgt[e] == v) {
            int w = ps.esrc[e];
            parts.push_back("p" + type_key(ps.etypes.empty() ? nullptr : ps.etypes[e]) + "/" +
                            (w >= 0 ? vkind_name(ps.kinds[w]) : "-"));
        }
    }
    std::sort(parts.begin(), parts.end());
    std::string sig = vkind_name(ps.kinds[v]) + ":";
    for (const auto& p : parts) {
        sig += p;
        sig += ';';
    }
    return sig;
}

bool edges_match(const ProofStructure& a, const ProofStructure& b, const std::vector<int>& map) {
    std::map<std::pair<int, int>, std::multiset<std::string>> ga, gb;
    for (int e = 0; e < a.ecount(); ++e) {
        int s = a.esrc[e] >= 0 ? map[a.esrc[e]] : -1;
        int t = a.etgt[e] >= 0 ? map[a.etgt[e]] : -1;
        ga[{s, t}].insert(type_key(a.etypes.empty() ? nullptr : a.etypes[e]));
    }
    for (int e = 0; e < b.ecount(); ++e)
        gb[{b.esrc[e], b.etgt[e]}].insert(type_key(b.etypes.empty() ? nullptr : b.etypes[e]));
    return ga == gb;
}

}  // namespace

bool iso_check(const ProofStructure& a, const ProofStructure& b) {
    if (a.vcount() != b.vcount() || a.ecount() != b.ecount()) return false;
    std::vector<std::string> sa, sb;
    for (int v = 0; v < a.vcount(); ++v) sa.push_back(vertex_signature(a, v));
    for (int v = 0; v < b.vcount(); ++v) sb.push_back(vertex_signature(b, v));
    {
        std::multiset<std::string> ma(sa.begin(), sa.end()), mb(sb.begin(), sb.end());
        if (ma != mb) return false;
    }
    if (a.vcount() == 0) {
        std::vector<int> empty;
        return edges_match(a, b, empty);
    }
    std::vector<int> map(a.vcount(), -1);
    std::vector<char> used(b.vcount(), 0);
    std::function<bool(int)> assign = [&](int v) -> bool {
        if (v == a.vcount()) return edges_match(a, b, map);
        for (int w = 0; w < b.vcount(); ++w) {
            if (used[w] || sa[v] != sb[w]) continue;
            // partial adjacency consistency against already-assigned vertices
            bool ok = true;
            for (int e = 0; e < a.ecount() && ok; ++e) {
                int s = a.esrc[e], t = a.etgt[e];
                if (s == v && t >= 0 && t < v && map[t] >= 0) {
                    bool found = false;
                    for (int f = 0; f < b.ecount(); ++f)
                        if (b.esrc[f] == w && b.etgt[f] == map[t]) found = true;
                    if (!found) ok = false;
                }
                if (t == v && s >= 0 && s < v && map[s] >= 0) {
                    bool found = false;
                    for (int f = 0; f < b.ecount(); ++f)
                        if (b.etgt[f] == w && b.esrc[f] == map[s]) found = true;
                    if (!found) ok = false;
                }
            }
            if (!ok) continue;
            map[v] = w;
            used[w] = 1;
            if (assign(v + 1)) return true;
            map[v] = -1;
            used[w] = 0;
        }
        return false;
    };
    return assign(0);
}

// ---------------------------------------------------------------------------
// Connectedness

namespace {

// Proper cycles of par-vertex v: cycles through both premises with no internal
// cusp. visit(cycle_vertices) may stop the walk.
template <typename Visit>
void walk_proper_cycles(const ProofStructure& ps, const LocallyColoredGraph& g, int v,
                        Visit&& visit) {
    auto pre = ps.premises(v);
    if (ps.esrc[pre[0]] < 0 || ps.esrc[pre[1]] < 0) return;
    int u1 = ps.esrc[pre[0]], u2 = ps.esrc[pre[1]];
    Edge e1 = *g.edge_index(ps.enames[pre[0]]);
    Edge e2 = *g.edge_index(ps.enames[pre[1]]);
    if (u1 == u2) {
        if (g.color_at(e1, u1) != g.color_at(e2, u1)) visit(std::vector<int>{v, u1});
        return;
    }
    std::vector<char> visited(g.vertex_count(), 0);
    visited[v] = 1;
    visited[u1] = 1;
    Path path;
    path.g = &g;
    path.verts = {u1};
    std::function<bool()> step = [&]() -> bool {
        Vertex at = path.verts.back();
        if (at == u2) {
            if (!path.edges.empty() && (path.edges.back() == e2 ||
                                        g.color_at(path.edges.back(), u2) == g.color_at(e2, u2)))
                return false;
            std::vector<int> cyc = {v};
            for (Vertex w : path.verts) cyc.push_back(w);
            if (visit(cyc)) return true;
            return false;
        }
        for (Edge e : g.edges_at(at)) {
            auto w = g.other_end(e, at);
            if (!w || visited[*w]) continue;
            if (path.edges.empty()) {
                if (e == e1 || g.color_at(e, u1) == g.color_at(e1, u1)) continue;
            } else {
                if (e == path.edges.back()) continue;
                if (g.color_at(e, at) == g.color_at(path.edges.back(), at)) continue;
            }
            path.edges.push_back(e);
            path.verts.push_back(*w);
            visited[*w] = 1;
            bool stop = step();
            visited[*w] = 0;
            path.verts.pop_back();
            path.edges.pop_back();
            if (stop) return true;
        }
        return false;
    };
    step();
}

}  // namespace

std::variant<std::vector<ProofStructure>, int> almost_connected_decompose(
    const ProofStructure& ps) {
    if (ps.empty()) throw PsError("Empty", "empty structure");
    DrReport rep = dr_check(ps);
    if (!rep.correct) throw PsError("NotCorrect", "structure has a switching cycle");
    WellColoring wc = well_color(ps);
    for (int v = 0; v < ps.vcount(); ++v) {
        if (ps.kinds[v] != VKind::Par) continue;
        bool has = false;
        walk_proper_cycles(ps, wc.graph, v, [&](const std::vector<int>&) {
            has = true;
            return true;
        });
        if (!has) return v;
    }
    return ps_components(ps);
}

bool cf_connected(const ProofStructure& ps) {
    if (ps.empty()) return false;
    WellColoring wc = well_color(ps);
    const LocallyColoredGraph& g = wc.graph;

    // e and f are joined when some simple traversal has e as its first edge
    // and f as its last, with no internal cusp. The traversal may close up at
    // e's far endpoint (that wrap incidence is the one a correctness graph
    // would have disconnected, so it does not count as a cusp).
    auto joined = [&](Edge e, Edge f) {
        std::vector<char> visited(g.vertex_count(), 0);
        int start_far = -1;
        std::function<bool(Edge, Vertex)> step = [&](Edge cur, Vertex at) -> bool {
            for (Edge nxt : g.edges_at(at)) {
                if (nxt == cur) continue;
                if (g.color_at(nxt, at) == g.color_at(cur, at)) continue;
                auto w = g.other_end(nxt, at);
                if (nxt == f) {
                    if (!w || !visited[*w] || *w == start_far) return true;
                    continue;
                }
                if (!w || visited[*w]) continue;
                visited[*w] = 1;
                if (step(nxt, *w)) return true;
                visited[*w] = 0;
            }
            return false;
        };
        for (const auto& end : g.ends(e)) {
            std::fill(visited.begin(), visited.end(), 0);
            start_far = -1;
            for (const auto& other : g.ends(e)) {
                visited[other.v] = 1;
                if (other.v != end.v) start_far = other.v;
            }
            if (step(e, end.v)) return true;
        }
        return false;
    };

    for (Edge e = 0; e < g.edge_count(); ++e)
        for (Edge f = e + 1; f < g.edge_count(); ++f)
            if (!joined(e, f)) return false;
    return true;
}

SubStructure kingdom(const ProofStructure& ps, int v) {
    DrReport rep = dr_check(ps);
    if (!rep.correct || rep.degree != 1 || !ps.is_closed())
        throw PsError("NotConnectedClosed", "kingdoms need a connected closed proof net");
    WellColoring wc = well_color(ps);

    std::vector<std::optional<SubStructure>> memo(ps.vcount());
    std::vector<char> visiting(ps.vcount(), 0);

    std::function<SubStructure(int)> king = [&](int u) -> SubStructure {
        if (memo[u]) return *memo[u];
        if (visiting[u]) throw PsError("Internal", "kingdom recursion loop");
        visiting[u] = 1;
        std::set<int> kv, ke;
        kv.insert(u);
        for (int e : ps.conclusions(u)) ke.insert(e);
        auto absorb = [&](const SubStructure& s) {
            kv.insert(s.verts.begin(), s.verts.end());
            ke.insert(s.edges.begin(), s.edges.end());
        };
        switch (ps.kinds[u]) {
            case VKind::Ax:
                break;
            case VKind::Tensor:
            case VKind::Cut: {
                for (int e : ps.premises(u)) {
                    absorb(king(ps.esrc[e]));
                    ke.insert(e);
                }
                break;
            }
            case VKind::Par: {
                std::optional<SubStructure> result;
                bool first = true;
                walk_proper_cycles(ps, wc.graph, u, [&](const std::vector<int>& cyc) {
                    std::set<int> cv, cedges;
                    cv.insert(u);
                    for (int w : cyc)
                        if (w != u) {
                            SubStructure s = king(w);
                            cv.insert(s.verts.begin(), s.verts.end());
                            cedges.insert(s.edges.begin(), s.edges.end());
                        }
                    for (int e : ps.premises(u)) cedges.insert(e);
                    for (int e : ps.conclusions(u)) cedges.insert(e);
                    SubStructure candidate;
                    candidate.verts.assign(cv.begin(), cv.end());
                    candidate.edges.assign(cedges.begin(), cedges.end());
                    if (first) {
                        result = candidate;
                        first = false;
                    } else if (result->verts != candidate.verts ||
                               result->edges != candidate.edges) {
                        throw PsError("Internal", "kingdom depends on the proper cycle choice");
                    }
                    return false;
                });
                if (!result) throw PsError("Internal", "par-vertex without proper cycle");
                kv.insert(result->verts.begin(), result->verts.end());
                ke.insert(result->edges.begin(), result->edges.end());
                break;
            }
        }
        visiting[u] = 0;
        SubStructure out;
        out.verts.assign(kv.begin(), kv.end());
        out.edges.assign(ke.begin(), ke.end());
        memo[u] = out;
        return out;
    };
    return king(v);
}

}  // namespace proofweave
