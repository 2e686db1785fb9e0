#include "proofweave/formula.hpp"

#include <algorithm>
#include <cctype>

namespace proofweave {

Formula mk_atom(const std::string& name, int loc) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FKind::Atom;
    n->atom = name;
    n->loc = loc;
    return n;
}

Formula mk_natom(const std::string& name, int loc) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FKind::NegAtom;
    n->atom = name;
    n->loc = loc;
    return n;
}

Formula mk_bin(FKind kind, Formula l, Formula r, int loc) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = kind;
    n->loc = loc;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

bool is_atomic(const Formula& f) {
    return f->kind == FKind::Atom || f->kind == FKind::NegAtom;
}

bool is_mll(const Formula& f) {
    if (!f) return true;
    if (f->kind == FKind::With || f->kind == FKind::Plus) return false;
    if (is_atomic(f)) return true;
    return is_mll(f->left) && is_mll(f->right);
}

Formula dual(const Formula& f, LocGen& gen) {
    switch (f->kind) {
        case FKind::Atom:
            return mk_natom(f->atom, gen.fresh());
        case FKind::NegAtom:
            return mk_atom(f->atom, gen.fresh());
        case FKind::Tensor:
            return mk_bin(FKind::Par, dual(f->left, gen), dual(f->right, gen), gen.fresh());
        case FKind::Par:
            return mk_bin(FKind::Tensor, dual(f->left, gen), dual(f->right, gen), gen.fresh());
        case FKind::With:
            return mk_bin(FKind::Plus, dual(f->left, gen), dual(f->right, gen), gen.fresh());
        case FKind::Plus:
            return mk_bin(FKind::With, dual(f->left, gen), dual(f->right, gen), gen.fresh());
    }
    throw FormulaError("bad formula kind");
}

bool untagged_equal(const Formula& a, const Formula& b) {
    if (a->kind != b->kind) return false;
    if (is_atomic(a)) return a->atom == b->atom;
    return untagged_equal(a->left, b->left) && untagged_equal(a->right, b->right);
}

bool untagged_dual(const Formula& a, const Formula& b) {
    switch (a->kind) {
        case FKind::Atom:
            return b->kind == FKind::NegAtom && a->atom == b->atom;
        case FKind::NegAtom:
            return b->kind == FKind::Atom && a->atom == b->atom;
        case FKind::Tensor:
            return b->kind == FKind::Par && untagged_dual(a->left, b->left) &&
                   untagged_dual(a->right, b->right);
        case FKind::Par:
            return b->kind == FKind::Tensor && untagged_dual(a->left, b->left) &&
                   untagged_dual(a->right, b->right);
        case FKind::With:
            return b->kind == FKind::Plus && untagged_dual(a->left, b->left) &&
                   untagged_dual(a->right, b->right);
        case FKind::Plus:
            return b->kind == FKind::With && untagged_dual(a->left, b->left) &&
                   untagged_dual(a->right, b->right);
    }
    return false;
}

bool localized_equal(const Formula& a, const Formula& b) {
    if (a->kind != b->kind || a->loc != b->loc) return false;
    if (is_atomic(a)) return a->atom == b->atom;
    return localized_equal(a->left, b->left) && localized_equal(a->right, b->right);
}

void collect_locations(const Formula& f, std::vector<int>& out) {
    out.push_back(f->loc);
    if (!is_atomic(f)) {
        collect_locations(f->left, out);
        collect_locations(f->right, out);
    }
}

std::vector<int> locations(const Formula& f) {
    std::vector<int> out;
    collect_locations(f, out);
    return out;
}

Formula relabel(const Formula& f, LocGen& gen) {
    if (is_atomic(f)) {
        return f->kind == FKind::Atom ? mk_atom(f->atom, gen.fresh())
                                      : mk_natom(f->atom, gen.fresh());
    }
    Formula l = relabel(f->left, gen);
    Formula r = relabel(f->right, gen);
    return mk_bin(f->kind, std::move(l), std::move(r), gen.fresh());
}

namespace {

char op_char(FKind k) {
    switch (k) {
        case FKind::Tensor:
            return '*';
        case FKind::Par:
            return '@';
        case FKind::With:
            return '&';
        case FKind::Plus:
            return '+';
        default:
            return '?';
    }
}

void print_rec(const Formula& f, std::string& out) {
    if (f->kind == FKind::Atom) {
        out += f->atom;
        return;
    }
    if (f->kind == FKind::NegAtom) {
        out += f->atom;
        out += '^';
        return;
    }
    auto side = [&](const Formula& s) {
        if (is_atomic(s)) {
            print_rec(s, out);
        } else {
            out += '(';
            print_rec(s, out);
            out += ')';
        }
    };
    side(f->left);
    out += op_char(f->kind);
    side(f->right);
}

struct Parser {
    const std::string& text;
    size_t pos = 0;
    LocGen& gen;

    Parser(const std::string& t, LocGen& g) : text(t), gen(g) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& why) {
        throw FormulaError("formula parse error at position " + std::to_string(pos) + ": " + why);
    }

    Formula parse_primary() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end");
        char c = text[pos];
        Formula f;
        if (c == '(') {
            ++pos;
            f = parse_expr();
            skip_ws();
            if (pos >= text.size() || text[pos] != ')') fail("expected )");
            ++pos;
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (pos < text.size() &&
                   std::isalnum(static_cast<unsigned char>(text[pos]))) {
                name += text[pos];
                ++pos;
            }
            f = mk_atom(name, gen.fresh());
        } else {
            fail("expected atom or (");
        }
        while (pos < text.size() && text[pos] == '^') {
            ++pos;
            f = dual(f, gen);
        }
        return f;
    }

    Formula parse_expr() {
        Formula f = parse_primary();
        while (true) {
            char c = peek();
            FKind kind;
            if (c == '*')
                kind = FKind::Tensor;
            else if (c == '@')
                kind = FKind::Par;
            else if (c == '&')
                kind = FKind::With;
            else if (c == '+')
                kind = FKind::Plus;
            else
                break;
            ++pos;
            Formula r = parse_primary();
            f = mk_bin(kind, std::move(f), std::move(r), gen.fresh());
        }
        return f;
    }
};

}  // namespace

std::string print_formula(const Formula& f) {
    std::string out;
    print_rec(f, out);
    return out;
}

Formula parse_formula(const std::string& text, LocGen& gen) {
    Parser p(text, gen);
    Formula f = p.parse_expr();
    if (!p.at_end()) p.fail("trailing input");
    return f;
}

std::vector<Formula> parse_sequent(const std::string& text, LocGen& gen) {
    std::vector<Formula> out;
    size_t start = 0;
    int depth = 0;
    auto flush = [&](size_t end) {
        std::string part = text.substr(start, end - start);
        bool blank = true;
        for (char c : part)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (!blank) out.push_back(parse_formula(part, gen));
    };
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')') --depth;
        if (text[i] == ',' && depth == 0) {
            flush(i);
            start = i + 1;
        }
    }
    flush(text.size());
    return out;
}

}  // namespace proofweave
