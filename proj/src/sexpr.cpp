#include "proofweave/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace proofweave {

namespace {

bool plain_token(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '^') return false;
    return true;
}

std::string formula_arg(const Formula& f) {
    std::string s = print_formula(f);
    if (plain_token(s)) return s;
    return "\"" + s + "\"";
}

int concl_index_of(const Deriv& d, const Formula& f) {
    for (size_t i = 0; i < d->conclusion.size(); ++i)
        if (localized_equal(d->conclusion[i], f)) return static_cast<int>(i);
    throw DerivError("Internal", "principal not in sub conclusion");
}

void render_rec(const Deriv& d, std::string& out) {
    switch (d->rule) {
        case Rule::Ax:
            out += "(ax " + formula_arg(d->pb) + ")";
            return;
        case Rule::Hyp:
            out += "(hyp " + formula_arg(d->principal) + ")";
            return;
        case Rule::Mix0:
            out += "(mix0)";
            return;
        case Rule::Mix2:
            out += "(mix2 ";
            render_rec(d->subs[0], out);
            out += " ";
            render_rec(d->subs[1], out);
            out += ")";
            return;
        case Rule::Cut:
        case Rule::Tensor:
        case Rule::With: {
            int i = concl_index_of(d->subs[0], d->pa);
            int j = concl_index_of(d->subs[1], d->pb);
            out += "(" + rule_name(d->rule);
            if (i != 0 || j != 0) out += " " + std::to_string(i) + " " + std::to_string(j);
            out += " ";
            render_rec(d->subs[0], out);
            out += " ";
            render_rec(d->subs[1], out);
            out += ")";
            return;
        }
        case Rule::Par: {
            int i = concl_index_of(d->subs[0], d->pa);
            int j = concl_index_of(d->subs[0], d->pb);
            out += "(par";
            if (i != 0 || j != 1) out += " " + std::to_string(i) + " " + std::to_string(j);
            out += " ";
            render_rec(d->subs[0], out);
            out += ")";
            return;
        }
        case Rule::Plus1:
        case Rule::Plus2: {
            int i = concl_index_of(d->subs[0], d->pa);
            out += "(" + rule_name(d->rule);
            if (i != 0) out += " " + std::to_string(i);
            out += " " + formula_arg(d->pb) + " ";
            render_rec(d->subs[0], out);
            out += ")";
            return;
        }
    }
}

}  // namespace

std::string sequent_to_string(const std::vector<Formula>& fs) {
    std::string out;
    for (size_t i = 0; i < fs.size(); ++i) {
        if (i) out += ", ";
        out += print_formula(fs[i]);
    }
    return out;
}

std::string render_derivation_sexpr(const Deriv& d) {
    std::string out;
    render_rec(d, out);
    return out;
}

std::string render_derivation_text(const Deriv& d) {
    std::ostringstream os;
    std::function<void(const Deriv&, int)> rec = [&](const Deriv& n, int depth) {
        for (int i = 0; i < depth; ++i) os << "  ";
        os << rule_name(n->rule);
        std::string hyps;
        for (size_t i = 0; i < n->hypotheses.size(); ++i) {
            if (i) hyps += ", ";
            hyps += print_formula(n->hypotheses[i]);
        }
        os << "  " << hyps << (hyps.empty() ? "" : " ") << "|- "
           << sequent_to_string(n->conclusion) << "\n";
        for (const Deriv& s : n->subs) rec(s, depth + 1);
    };
    rec(d, 0);
    return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum Kind { LParen, RParen, Atom, String } kind;
    std::string text;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(') {
            out.push_back({Token::LParen, "("});
            ++i;
        } else if (c == ')') {
            out.push_back({Token::RParen, ")"});
            ++i;
        } else if (c == '"') {
            size_t j = s.find('"', i + 1);
            if (j == std::string::npos) throw DerivError("ParseError", "unterminated string");
            out.push_back({Token::String, s.substr(i + 1, j - i - 1)});
            i = j + 1;
        } else {
            size_t j = i;
            while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) &&
                   s[j] != '(' && s[j] != ')')
                ++j;
            out.push_back({Token::Atom, s.substr(i, j - i)});
            i = j;
        }
    }
    return out;
}

struct SNode {
    Rule rule;
    int i = 0, j = 0;
    std::string formula;  // ax/hyp/plus argument
    std::vector<SNode> subs;
    // bottom-up untagged conclusion (throwaway locations)
    std::vector<Formula> concl;
};

struct SParser {
    const std::vector<Token>& toks;
    size_t pos = 0;
    explicit SParser(const std::vector<Token>& t) : toks(t) {}

    [[noreturn]] void fail(const std::string& why) { throw DerivError("ParseError", why); }

    const Token& need(Token::Kind k, const char* what) {
        if (pos >= toks.size() || toks[pos].kind != k) fail(std::string("expected ") + what);
        return toks[pos++];
    }

    bool peek_int() {
        if (pos >= toks.size() || toks[pos].kind != Token::Atom) return false;
        const std::string& t = toks[pos].text;
        return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
        });
    }

    std::string formula_token() {
        if (pos >= toks.size()) fail("expected formula");
        if (toks[pos].kind == Token::String || toks[pos].kind == Token::Atom)
            return toks[pos++].text;
        fail("expected formula");
    }

    SNode parse() {
        need(Token::LParen, "(");
        const Token& head = need(Token::Atom, "rule name");
        SNode n;
        std::string r = head.text;
        if (r == "ax")
            n.rule = Rule::Ax;
        else if (r == "hyp")
            n.rule = Rule::Hyp;
        else if (r == "mix0")
            n.rule = Rule::Mix0;
        else if (r == "mix2")
            n.rule = Rule::Mix2;
        else if (r == "cut")
            n.rule = Rule::Cut;
        else if (r == "tensor")
            n.rule = Rule::Tensor;
        else if (r == "par")
            n.rule = Rule::Par;
        else if (r == "with")
            n.rule = Rule::With;
        else if (r == "plus1")
            n.rule = Rule::Plus1;
        else if (r == "plus2")
            n.rule = Rule::Plus2;
        else
            fail("unknown rule " + r);

        switch (n.rule) {
            case Rule::Ax:
            case Rule::Hyp:
                n.formula = formula_token();
                break;
            case Rule::Mix0:
                break;
            case Rule::Mix2:
                n.subs.push_back(parse());
                n.subs.push_back(parse());
                break;
            case Rule::Cut:
            case Rule::Tensor:
            case Rule::With:
                if (peek_int()) {
                    n.i = std::stoi(toks[pos++].text);
                    if (!peek_int()) fail("expected second index");
                    n.j = std::stoi(toks[pos++].text);
                }
                n.subs.push_back(parse());
                n.subs.push_back(parse());
                break;
            case Rule::Par:
                if (peek_int()) {
                    n.i = std::stoi(toks[pos++].text);
                    if (!peek_int()) fail("expected second index");
                    n.j = std::stoi(toks[pos++].text);
                } else {
                    n.i = 0;
                    n.j = 1;
                }
                n.subs.push_back(parse());
                break;
            case Rule::Plus1:
            case Rule::Plus2:
                if (peek_int()) n.i = std::stoi(toks[pos++].text);
                n.formula = formula_token();
                n.subs.push_back(parse());
                break;
        }
        need(Token::RParen, ")");
        return n;
    }
};

// bottom-up pass: untagged conclusion sequents
void compute_untagged(SNode& n, LocGen& scratch) {
    for (SNode& s : n.subs) compute_untagged(s, scratch);
    auto sub_concl = [&](int k) -> std::vector<Formula>& { return n.subs[k].concl; };
    auto check_index = [&](int idx, const std::vector<Formula>& fs, const char* what) {
        if (idx < 0 || idx >= static_cast<int>(fs.size()))
            throw DerivError("ParseError", std::string("principal index out of range in ") + what);
    };
    switch (n.rule) {
        case Rule::Ax: {
            Formula f = parse_formula(n.formula, scratch);
            n.concl = {dual(f, scratch), f};
            break;
        }
        case Rule::Hyp:
            n.concl = {parse_formula(n.formula, scratch)};
            break;
        case Rule::Mix0:
            break;
        case Rule::Mix2:
            n.concl = sub_concl(0);
            n.concl.insert(n.concl.end(), sub_concl(1).begin(), sub_concl(1).end());
            break;
        case Rule::Cut: {
            check_index(n.i, sub_concl(0), "cut");
            check_index(n.j, sub_concl(1), "cut");
            if (!untagged_dual(sub_concl(0)[n.i], sub_concl(1)[n.j]))
                throw DerivError("ParseError", "cut formulas are not dual");
            for (int k = 0; k < static_cast<int>(sub_concl(0).size()); ++k)
                if (k != n.i) n.concl.push_back(sub_concl(0)[k]);
            for (int k = 0; k < static_cast<int>(sub_concl(1).size()); ++k)
                if (k != n.j) n.concl.push_back(sub_concl(1)[k]);
            break;
        }
        case Rule::Tensor: {
            check_index(n.i, sub_concl(0), "tensor");
            check_index(n.j, sub_concl(1), "tensor");
            n.concl.push_back(mk_bin(FKind::Tensor, sub_concl(0)[n.i], sub_concl(1)[n.j],
                                     scratch.fresh()));
            for (int k = 0; k < static_cast<int>(sub_concl(0).size()); ++k)
                if (k != n.i) n.concl.push_back(sub_concl(0)[k]);
            for (int k = 0; k < static_cast<int>(sub_concl(1).size()); ++k)
                if (k != n.j) n.concl.push_back(sub_concl(1)[k]);
            break;
        }
        case Rule::Par: {
            check_index(n.i, sub_concl(0), "par");
            check_index(n.j, sub_concl(0), "par");
            if (n.i == n.j) throw DerivError("ParseError", "par needs two distinct formulas");
            n.concl.push_back(
                mk_bin(FKind::Par, sub_concl(0)[n.i], sub_concl(0)[n.j], scratch.fresh()));
            for (int k = 0; k < static_cast<int>(sub_concl(0).size()); ++k)
                if (k != n.i && k != n.j) n.concl.push_back(sub_concl(0)[k]);
            break;
        }
        case Rule::With: {
            check_index(n.i, sub_concl(0), "with");
            check_index(n.j, sub_concl(1), "with");
            std::vector<Formula> ctx_a, ctx_b;
            for (int k = 0; k < static_cast<int>(sub_concl(0).size()); ++k)
                if (k != n.i) ctx_a.push_back(sub_concl(0)[k]);
            for (int k = 0; k < static_cast<int>(sub_concl(1).size()); ++k)
                if (k != n.j) ctx_b.push_back(sub_concl(1)[k]);
            if (ctx_a.size() != ctx_b.size())
                throw DerivError("ParseError", "with contexts differ");
            std::vector<char> used(ctx_b.size(), 0);
            for (const Formula& f : ctx_a) {
                bool matched = false;
                for (size_t k = 0; k < ctx_b.size(); ++k)
                    if (!used[k] && untagged_equal(f, ctx_b[k])) {
                        used[k] = 1;
                        matched = true;
                        break;
                    }
                if (!matched) throw DerivError("ParseError", "with contexts differ");
            }
            n.concl.push_back(
                mk_bin(FKind::With, sub_concl(0)[n.i], sub_concl(1)[n.j], scratch.fresh()));
            for (const Formula& f : ctx_a) n.concl.push_back(f);
            break;
        }
        case Rule::Plus1:
        case Rule::Plus2: {
            check_index(n.i, sub_concl(0), "plus");
            Formula other = parse_formula(n.formula, scratch);
            Formula kept = sub_concl(0)[n.i];
            n.concl.push_back(n.rule == Rule::Plus1
                                  ? mk_bin(FKind::Plus, kept, other, scratch.fresh())
                                  : mk_bin(FKind::Plus, other, kept, scratch.fresh()));
            for (int k = 0; k < static_cast<int>(sub_concl(0).size()); ++k)
                if (k != n.i) n.concl.push_back(sub_concl(0)[k]);
            break;
        }
    }
}

// top-down pass: build the localized derivation for a given localized
// conclusion sequent
Deriv build_localized(const SNode& n, const std::vector<Formula>& concl, LocGen& gen) {
    auto insert_at = [](const std::vector<Formula>& rest, int idx, const Formula& f) {
        std::vector<Formula> out;
        for (int k = 0; k <= static_cast<int>(rest.size()); ++k) {
            if (k == idx) out.push_back(f);
            if (k < static_cast<int>(rest.size())) out.push_back(rest[k]);
        }
        return out;
    };
    auto insert_two = [](const std::vector<Formula>& rest, int i, const Formula& a, int j,
                         const Formula& b) {
        int total = static_cast<int>(rest.size()) + 2;
        std::vector<Formula> out(total);
        std::vector<char> taken(total, 0);
        out[i] = a;
        out[j] = b;
        taken[i] = taken[j] = 1;
        int r = 0;
        for (int k = 0; k < total; ++k)
            if (!taken[k]) out[k] = rest[r++];
        return out;
    };

    switch (n.rule) {
        case Rule::Ax:
            return d_ax_pair(concl[0], concl[1]);
        case Rule::Hyp:
            return d_hyp(concl[0]);
        case Rule::Mix0:
            return d_mix0();
        case Rule::Mix2: {
            size_t k = n.subs[0].concl.size();
            std::vector<Formula> c1(concl.begin(), concl.begin() + k);
            std::vector<Formula> c2(concl.begin() + k, concl.end());
            return d_mix2(build_localized(n.subs[0], c1, gen),
                          build_localized(n.subs[1], c2, gen));
        }
        case Rule::Cut: {
            Formula a = relabel(n.subs[0].concl[n.i], gen);
            Formula b = dual(a, gen);
            size_t r1 = n.subs[0].concl.size() - 1;
            std::vector<Formula> rest1(concl.begin(), concl.begin() + r1);
            std::vector<Formula> rest2(concl.begin() + r1, concl.end());
            Deriv d1 = build_localized(n.subs[0], insert_at(rest1, n.i, a), gen);
            Deriv d2 = build_localized(n.subs[1], insert_at(rest2, n.j, b), gen);
            return d_cut(d1, a, d2, b);
        }
        case Rule::Tensor: {
            const Formula& p = concl[0];
            size_t r1 = n.subs[0].concl.size() - 1;
            std::vector<Formula> rest1(concl.begin() + 1, concl.begin() + 1 + r1);
            std::vector<Formula> rest2(concl.begin() + 1 + r1, concl.end());
            Deriv d1 = build_localized(n.subs[0], insert_at(rest1, n.i, p->left), gen);
            Deriv d2 = build_localized(n.subs[1], insert_at(rest2, n.j, p->right), gen);
            return d_tensor(d1, p->left, d2, p->right, p->loc);
        }
        case Rule::Par: {
            const Formula& p = concl[0];
            std::vector<Formula> rest(concl.begin() + 1, concl.end());
            Deriv d1 =
                build_localized(n.subs[0], insert_two(rest, n.i, p->left, n.j, p->right), gen);
            return d_par(d1, p->left, p->right, p->loc);
        }
        case Rule::With: {
            const Formula& p = concl[0];
            std::vector<Formula> ctx(concl.begin() + 1, concl.end());
            Deriv d1 = build_localized(n.subs[0], insert_at(ctx, n.i, p->left), gen);
            // sub2's own context order may permute; match greedily by shape
            std::vector<Formula> ctx_b_order;
            {
                std::vector<Formula> pool = ctx;
                for (int k = 0; k < static_cast<int>(n.subs[1].concl.size()); ++k) {
                    if (k == n.j) continue;
                    const Formula& want = n.subs[1].concl[k];
                    bool matched = false;
                    for (size_t t = 0; t < pool.size(); ++t)
                        if (untagged_equal(pool[t], want)) {
                            ctx_b_order.push_back(pool[t]);
                            pool.erase(pool.begin() + t);
                            matched = true;
                            break;
                        }
                    if (!matched) throw DerivError("ParseError", "with contexts differ");
                }
            }
            Deriv d2 =
                build_localized(n.subs[1], insert_at(ctx_b_order, n.j, p->right), gen);
            return d_with(d1, p->left, d2, p->right, p->loc);
        }
        case Rule::Plus1:
        case Rule::Plus2: {
            const Formula& p = concl[0];
            std::vector<Formula> rest(concl.begin() + 1, concl.end());
            Formula kept = n.rule == Rule::Plus1 ? p->left : p->right;
            Formula other = n.rule == Rule::Plus1 ? p->right : p->left;
            Deriv d1 = build_localized(n.subs[0], insert_at(rest, n.i, kept), gen);
            return n.rule == Rule::Plus1 ? d_plus1(d1, kept, other, p->loc)
                                         : d_plus2(d1, kept, other, p->loc);
        }
    }
    throw DerivError("ParseError", "unreachable");
}

}  // namespace

Deriv parse_derivation_sexpr(const std::string& text, LocGen& gen) {
    std::vector<Token> toks = tokenize(text);
    SParser parser(toks);
    SNode root = parser.parse();
    if (parser.pos != toks.size()) parser.fail("trailing input");
    LocGen scratch;
    compute_untagged(root, scratch);
    std::vector<Formula> concl;
    for (const Formula& f : root.concl) concl.push_back(relabel(f, gen));
    return build_localized(root, concl, gen);
}

}  // namespace proofweave
