#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symvf/common.hpp"
#include "symvf/rng.hpp"

namespace symvf {

// The elementary function set. Exactly these six; arities are fixed.
enum class Func : std::uint8_t { Add, Sub, Mul, Square, Cube, Bent };

inline int arity(Func f) {
    switch (f) {
    case Func::Add:
    case Func::Sub:
    case Func::Mul:
        return 2;
    default:
        return 1;
    }
}

inline const char* func_name(Func f) {
    switch (f) {
    case Func::Add: return "add";
    case Func::Sub: return "sub";
    case Func::Mul: return "mul";
    case Func::Square: return "sq";
    case Func::Cube: return "cube";
    case Func::Bent: return "bent";
    }
    return "?";
}

// bent(x) = (sqrt(x^2 + 1) - 1)/2 + x
inline double bent(double x) { return 0.5 * (std::sqrt(x * x + 1.0) - 1.0) + x; }

inline double apply_func(Func f, double a, double b) {
    switch (f) {
    case Func::Add: return a + b;
    case Func::Sub: return a - b;
    case Func::Mul: return a * b;
    case Func::Square: return a * a;
    case Func::Cube: return a * a * a;
    case Func::Bent: return bent(a);
    }
    return 0.0;
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree node. Subtrees are shared freely between trees;
// nothing mutates a node after construction.
struct Expr {
    enum class Kind : std::uint8_t { Variable, Constant, Function };

    Kind kind;
    Func fn = Func::Add;
    int var = 0;
    double value = 0.0;
    ExprPtr a, b;

    static ExprPtr variable(int index) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Variable;
        e->var = index;
        return e;
    }
    static ExprPtr constant(double v) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Constant;
        e->value = v;
        return e;
    }
    static ExprPtr apply(Func f, ExprPtr x, ExprPtr y = nullptr) {
        if ((arity(f) == 2) != static_cast<bool>(y))
            throw std::invalid_argument("Expr::apply: child count does not match arity");
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Function;
        e->fn = f;
        e->a = std::move(x);
        e->b = std::move(y);
        return e;
    }
};

inline double eval_expr(const Expr& e, std::span<const double> x) {
    switch (e.kind) {
    case Expr::Kind::Variable: return x[static_cast<size_t>(e.var)];
    case Expr::Kind::Constant: return e.value;
    case Expr::Kind::Function: {
        const double va = eval_expr(*e.a, x);
        const double vb = e.b ? eval_expr(*e.b, x) : 0.0;
        return apply_func(e.fn, va, vb);
    }
    }
    return 0.0;
}

inline double eval_expr(const Expr& e, const Vec& x) { return eval_expr(e, x.span()); }

// Leaf depth convention: a single leaf has depth 0.
inline int depth(const Expr& e) {
    if (e.kind != Expr::Kind::Function) return 0;
    const int da = depth(*e.a);
    const int db = e.b ? depth(*e.b) : 0;
    return 1 + std::max(da, db);
}

inline int node_count(const Expr& e) {
    if (e.kind != Expr::Kind::Function) return 1;
    return 1 + node_count(*e.a) + (e.b ? node_count(*e.b) : 0);
}

inline int count_constants(const Expr& e) {
    if (e.kind == Expr::Kind::Constant) return 1;
    if (e.kind != Expr::Kind::Function) return 0;
    return count_constants(*e.a) + (e.b ? count_constants(*e.b) : 0);
}

inline int max_var_index(const Expr& e) {
    if (e.kind == Expr::Kind::Variable) return e.var;
    if (e.kind != Expr::Kind::Function) return -1;
    int m = max_var_index(*e.a);
    if (e.b) m = std::max(m, max_var_index(*e.b));
    return m;
}

// ---------------------------------------------------------------------------
// Random generation and mutation

struct ExprGenParams {
    double function_prob = 0.6; // chance of an internal node while depth remains
    double leaf_var_prob = 0.5; // variable vs constant at a leaf
    double const_lo = -5.0;
    double const_hi = 5.0;
    double const_sigma = 1.0;   // Gaussian jitter for constant mutation
};

// Grow-style generation: function/variable/constant chosen per position,
// leaves forced once the depth budget is exhausted.
inline ExprPtr random_expr(Rng& rng, int n_vars, int max_depth, const ExprGenParams& p = {}) {
    if (max_depth > 0 && rng.bernoulli(p.function_prob)) {
        const Func f = static_cast<Func>(rng.uniform_int(6));
        ExprPtr a = random_expr(rng, n_vars, max_depth - 1, p);
        ExprPtr b = arity(f) == 2 ? random_expr(rng, n_vars, max_depth - 1, p) : nullptr;
        return Expr::apply(f, std::move(a), std::move(b));
    }
    if (n_vars > 0 && rng.bernoulli(p.leaf_var_prob)) return Expr::variable(rng.uniform_int(n_vars));
    return Expr::constant(rng.uniform(p.const_lo, p.const_hi));
}

namespace detail {

struct NodeRef {
    ExprPtr node;
    int depth_from_root;
};

// Preorder node enumeration; index 0 is the root.
inline void walk_nodes(const ExprPtr& e, int d, std::vector<NodeRef>& out) {
    out.push_back({e, d});
    if (e->kind == Expr::Kind::Function) {
        walk_nodes(e->a, d + 1, out);
        if (e->b) walk_nodes(e->b, d + 1, out);
    }
}

inline std::vector<NodeRef> list_nodes(const ExprPtr& root) {
    std::vector<NodeRef> out;
    out.reserve(16);
    walk_nodes(root, 0, out);
    return out;
}

// Path-copy replacement of the node at preorder index `target`; shares every
// untouched subtree with the original.
inline ExprPtr replace_at(const ExprPtr& root, int target, const ExprPtr& repl, int& counter) {
    if (counter == target) {
        ++counter;
        return repl;
    }
    ++counter;
    if (root->kind != Expr::Kind::Function) return root;
    ExprPtr na = replace_at(root->a, target, repl, counter);
    ExprPtr nb = root->b ? replace_at(root->b, target, repl, counter) : nullptr;
    if (na == root->a && nb == root->b) return root;
    return Expr::apply(root->fn, std::move(na), std::move(nb));
}

} // namespace detail

inline ExprPtr replace_subtree(const ExprPtr& root, int preorder_index, const ExprPtr& repl) {
    int counter = 0;
    return detail::replace_at(root, preorder_index, repl, counter);
}

// One of: replace a uniformly chosen subtree with a fresh random tree sized to
// respect the depth bound, perturb a constant leaf, or swap a function tag of
// equal arity. Returns a new tree; the input is untouched.
inline ExprPtr mutate_expr(const ExprPtr& root, Rng& rng, int n_vars, int max_depth,
                           const ExprGenParams& p = {}) {
    const auto nodes = detail::list_nodes(root);
    const double op = rng.uniform01();

    if (op >= 0.5 && op < 0.75) { // constant perturbation
        std::vector<int> consts;
        for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
            if (nodes[static_cast<size_t>(i)].node->kind == Expr::Kind::Constant) consts.push_back(i);
        if (!consts.empty()) {
            const int idx = consts[static_cast<size_t>(rng.uniform_int(static_cast<int>(consts.size())))];
            const double c = nodes[static_cast<size_t>(idx)].node->value;
            return replace_subtree(root, idx, Expr::constant(c + rng.normal(0.0, p.const_sigma)));
        }
    } else if (op >= 0.75) { // function tag swap, same arity
        std::vector<int> funcs;
        for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
            if (nodes[static_cast<size_t>(i)].node->kind == Expr::Kind::Function) funcs.push_back(i);
        if (!funcs.empty()) {
            const int idx = funcs[static_cast<size_t>(rng.uniform_int(static_cast<int>(funcs.size())))];
            const auto& n = nodes[static_cast<size_t>(idx)].node;
            static constexpr Func kBinary[] = {Func::Add, Func::Sub, Func::Mul};
            static constexpr Func kUnary[] = {Func::Square, Func::Cube, Func::Bent};
            Func nf;
            if (arity(n->fn) == 2) {
                do { nf = kBinary[rng.uniform_int(3)]; } while (nf == n->fn);
            } else {
                do { nf = kUnary[rng.uniform_int(3)]; } while (nf == n->fn);
            }
            return replace_subtree(root, idx, Expr::apply(nf, n->a, n->b));
        }
    }

    // subtree replacement (also the fallback when the chosen operator has no site)
    const int idx = rng.uniform_int(static_cast<int>(nodes.size()));
    const int budget = max_depth - nodes[static_cast<size_t>(idx)].depth_from_root;
    return replace_subtree(root, idx, random_expr(rng, n_vars, std::max(0, budget), p));
}

// ---------------------------------------------------------------------------
// Text format: prefix s-expressions.
//   expr := "(add e e)" | "(sub e e)" | "(mul e e)" | "(sq e)" | "(cube e)"
//         | "(bent e)" | "x<i>" | decimal-literal

inline void serialize_expr(const Expr& e, std::string& out) {
    switch (e.kind) {
    case Expr::Kind::Variable:
        out += 'x';
        out += std::to_string(e.var);
        return;
    case Expr::Kind::Constant:
        out += format_double(e.value);
        return;
    case Expr::Kind::Function:
        out += '(';
        out += func_name(e.fn);
        out += ' ';
        serialize_expr(*e.a, out);
        if (e.b) {
            out += ' ';
            serialize_expr(*e.b, out);
        }
        out += ')';
        return;
    }
}

inline std::string serialize_expr(const Expr& e) {
    std::string out;
    serialize_expr(e, out);
    return out;
}

class ParseError : public std::runtime_error {
public:
    ParseError(size_t pos, const std::string& message)
        : std::runtime_error("parse error at position " + std::to_string(pos) + ": " + message),
          position(pos) {}
    size_t position;
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr(0);
        skip_ws();
        if (pos_ != text_.size()) throw ParseError(pos_, "expected end of input");
        return e;
    }

private:
    ExprPtr parse_expr(int nesting) {
        if (nesting > 64) throw ParseError(pos_, "expression nested too deeply");
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError(pos_, "expected expression");
        const char c = text_[pos_];
        if (c == '(') return parse_call(nesting);
        if (c == 'x') return parse_variable();
        return parse_number();
    }

    ExprPtr parse_call(int nesting) {
        ++pos_; // '('
        const std::string sym = parse_symbol();
        Func f;
        if (sym == "add") f = Func::Add;
        else if (sym == "sub") f = Func::Sub;
        else if (sym == "mul") f = Func::Mul;
        else if (sym == "sq") f = Func::Square;
        else if (sym == "cube") f = Func::Cube;
        else if (sym == "bent") f = Func::Bent;
        else throw ParseError(pos_ - sym.size(), "unknown function '" + sym + "'");

        ExprPtr a = parse_expr(nesting + 1);
        ExprPtr b;
        if (arity(f) == 2) b = parse_expr(nesting + 1);
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != ')')
            throw ParseError(pos_, std::string("expected ')' closing '") + func_name(f) + "'");
        ++pos_;
        return Expr::apply(f, std::move(a), std::move(b));
    }

    std::string parse_symbol() {
        skip_ws();
        const size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError(pos_, "expected function name");
        return std::string(text_.substr(start, pos_ - start));
    }

    ExprPtr parse_variable() {
        const size_t start = pos_;
        ++pos_; // 'x'
        size_t digits = 0;
        int idx = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            idx = idx * 10 + (text_[pos_] - '0');
            ++pos_;
            ++digits;
        }
        if (digits == 0) throw ParseError(start, "expected variable index after 'x'");
        return Expr::variable(idx);
    }

    ExprPtr parse_number() {
        const size_t start = pos_;
        const std::string slice(text_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(slice.c_str(), &end);
        if (end == slice.c_str()) throw ParseError(start, "expected number");
        pos_ += static_cast<size_t>(end - slice.c_str());
        return Expr::constant(v);
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    std::string_view text_;
    size_t pos_ = 0;
};

} // namespace detail

inline ExprPtr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

inline bool equal_structure(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Expr::Kind::Variable: return a.var == b.var;
    case Expr::Kind::Constant: return a.value == b.value;
    case Expr::Kind::Function:
        if (a.fn != b.fn) return false;
        if (!equal_structure(*a.a, *b.a)) return false;
        return (a.b == nullptr) == (b.b == nullptr) && (!a.b || equal_structure(*a.b, *b.b));
    }
    return false;
}

// ---------------------------------------------------------------------------
// Postfix tape: flat program for fast repeated evaluation of one tree.

class Tape {
public:
    Tape() = default;

    explicit Tape(const Expr& e) {
        compile(e);
        int cur = 0;
        for (const Op& op : ops_) {
            cur += (op.code == Code::Apply && arity(op.fn) == 2) ? -1 : 1;
            max_stack_ = std::max(max_stack_, cur);
        }
    }

    int stack_size() const { return max_stack_; }
    bool empty() const { return ops_.empty(); }

    double eval(std::span<const double> x, double* stack) const {
        int top = -1;
        for (const Op& op : ops_) {
            switch (op.code) {
            case Code::PushVar:
                stack[++top] = x[static_cast<size_t>(op.index)];
                break;
            case Code::PushConst:
                stack[++top] = op.value;
                break;
            case Code::Apply:
                if (arity(op.fn) == 2) {
                    stack[top - 1] = apply_func(op.fn, stack[top - 1], stack[top]);
                    --top;
                } else {
                    stack[top] = apply_func(op.fn, stack[top], 0.0);
                }
                break;
            }
        }
        return stack[0];
    }

    double eval(const Vec& x, double* stack) const { return eval(x.span(), stack); }

private:
    enum class Code : std::uint8_t { PushVar, PushConst, Apply };
    struct Op {
        Code code;
        Func fn = Func::Add;
        int index = 0;
        double value = 0.0;
    };

    void compile(const Expr& e) {
        switch (e.kind) {
        case Expr::Kind::Variable:
            ops_.push_back({Code::PushVar, Func::Add, e.var, 0.0});
            return;
        case Expr::Kind::Constant:
            ops_.push_back({Code::PushConst, Func::Add, 0, e.value});
            return;
        case Expr::Kind::Function:
            compile(*e.a);
            if (e.b) compile(*e.b);
            ops_.push_back({Code::Apply, e.fn, 0, 0.0});
            return;
        }
    }

    std::vector<Op> ops_;
    int max_stack_ = 0;
};

} // namespace symvf
