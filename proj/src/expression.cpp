#include "gso/expression.hpp"

#include "gso/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace gso {

using Kind = Expression::Kind;
using Func = Expression::Func;
using NodePtr = Expression::NodePtr;
using Node = Expression::Node;

namespace {

NodePtr make(Kind k, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->args = std::move(args);
    return n;
}

NodePtr num(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->number = v;
    return n;
}

NodePtr call(Func f, std::vector<NodePtr> args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->func = f;
    n->args = std::move(args);
    return n;
}

struct FuncInfo {
    const char* name;
    Func func;
    int arity;
};

constexpr FuncInfo kFuncs[] = {
    {"sin", Func::Sin, 1},   {"cos", Func::Cos, 1},   {"exp", Func::Exp, 1},
    {"sqrt", Func::Sqrt, 1}, {"tanh", Func::Tanh, 1}, {"log", Func::Log, 1},
    {"pow", Func::Pow, 2},
};

const char* func_name(Func f) {
    for (const auto& fi : kFuncs)
        if (fi.func == f) return fi.name;
    return "?";
}

// ---------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // expr := term (('+'|'-') term)*
    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Kind::Add, {lhs, term()});
            else if (accept('-')) lhs = make(Kind::Sub, {lhs, term()});
            else return lhs;
        }
    }

    // term := unary (('*'|'/') unary)*
    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Kind::Mul, {lhs, unary()});
            else if (accept('/')) lhs = make(Kind::Div, {lhs, unary()});
            else return lhs;
        }
    }

    // unary := '-' unary | power
    NodePtr unary() {
        if (accept('-')) return make(Kind::Neg, {unary()});
        return power();
    }

    // power := primary ('^' unary)?
    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::Pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ - start == 1 && s_[start] == '.') {
            pos_ = start;
            fail("malformed number");
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
                pos_ = p;
            }
        }
        const std::string text(s_.substr(start, pos_ - start));
        return num(std::strtod(text.c_str(), nullptr));
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        const std::string id(s_.substr(start, pos_ - start));
        if (id == "t") return make(Kind::Var);
        if (id == "pi") return make(Kind::Pi);
        for (const auto& fi : kFuncs) {
            if (id != fi.name) continue;
            if (!accept('(')) fail("expected '(' after " + id);
            std::vector<NodePtr> args{expr()};
            for (int k = 1; k < fi.arity; ++k) {
                if (!accept(',')) fail(std::string("expected ',' in ") + fi.name);
                args.push_back(expr());
            }
            if (!accept(')')) fail("expected ')' closing " + id);
            return call(fi.func, std::move(args));
        }
        throw ValidationError("unknown identifier '" + id + "' at byte " + std::to_string(start));
    }
};

// ------------------------------------------------------------ evaluation

double eval(const Node& n, double t) {
    switch (n.kind) {
        case Kind::Number: return n.number;
        case Kind::Var: return t;
        case Kind::Pi: return std::numbers::pi;
        case Kind::Neg: return -eval(*n.args[0], t);
        case Kind::Add: return eval(*n.args[0], t) + eval(*n.args[1], t);
        case Kind::Sub: return eval(*n.args[0], t) - eval(*n.args[1], t);
        case Kind::Mul: return eval(*n.args[0], t) * eval(*n.args[1], t);
        case Kind::Div: return eval(*n.args[0], t) / eval(*n.args[1], t);
        case Kind::Pow: return std::pow(eval(*n.args[0], t), eval(*n.args[1], t));
        case Kind::Call: {
            const double a = eval(*n.args[0], t);
            switch (n.func) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Exp: return std::exp(a);
                case Func::Sqrt: return std::sqrt(a);
                case Func::Tanh: return std::tanh(a);
                case Func::Log: return std::log(a);
                case Func::Pow: return std::pow(a, eval(*n.args[1], t));
            }
        }
    }
    return 0.0;
}

bool mentions_t(const Node& n) {
    if (n.kind == Kind::Var) return true;
    for (const auto& a : n.args)
        if (mentions_t(*a)) return true;
    return false;
}

// -------------------------------------------------------------- printing

int precedence(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        case Kind::Number: return n.number < 0.0 || std::signbit(n.number) ? 3 : 5;
        default: return 5;
    }
}

std::string print(const Node& n);

std::string wrap(const Node& n, int min_prec) {
    std::string s = print(n);
    return precedence(n) < min_prec ? "(" + s + ")" : s;
}

std::string print(const Node& n) {
    switch (n.kind) {
        case Kind::Number: return format_double(n.number);
        case Kind::Var: return "t";
        case Kind::Pi: return "pi";
        case Kind::Neg: return "-" + wrap(*n.args[0], 3);
        case Kind::Add: return wrap(*n.args[0], 1) + "+" + wrap(*n.args[1], 2);
        case Kind::Sub: return wrap(*n.args[0], 1) + "-" + wrap(*n.args[1], 2);
        case Kind::Mul: return wrap(*n.args[0], 2) + "*" + wrap(*n.args[1], 3);
        case Kind::Div: return wrap(*n.args[0], 2) + "/" + wrap(*n.args[1], 3);
        case Kind::Pow: return wrap(*n.args[0], 5) + "^" + wrap(*n.args[1], 3);
        case Kind::Call: {
            std::string s = std::string(func_name(n.func)) + "(" + print(*n.args[0]);
            for (std::size_t i = 1; i < n.args.size(); ++i) s += "," + print(*n.args[i]);
            return s + ")";
        }
    }
    return "";
}

bool equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::Number && a.number != b.number) return false;
    if (a.kind == Kind::Call && a.func != b.func) return false;
    if (a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!equal(*a.args[i], *b.args[i])) return false;
    return true;
}

// -------------------------------------------------- simplification

bool is_num(const NodePtr& n, double v) { return n->kind == Kind::Number && n->number == v; }
bool is_num(const NodePtr& n) { return n->kind == Kind::Number; }

NodePtr simp(const NodePtr& n);

NodePtr simp_node(Kind k, NodePtr a, NodePtr b = nullptr) {
    switch (k) {
        case Kind::Neg:
            if (is_num(a)) return num(-a->number);
            if (a->kind == Kind::Neg) return a->args[0];
            return make(Kind::Neg, {a});
        case Kind::Add:
            if (is_num(a) && is_num(b)) return num(a->number + b->number);
            if (is_num(a, 0.0)) return b;
            if (is_num(b, 0.0)) return a;
            if (b->kind == Kind::Neg) return simp_node(Kind::Sub, a, b->args[0]);
            return make(Kind::Add, {a, b});
        case Kind::Sub:
            if (is_num(a) && is_num(b)) return num(a->number - b->number);
            if (is_num(b, 0.0)) return a;
            if (is_num(a, 0.0)) return simp_node(Kind::Neg, b);
            if (b->kind == Kind::Neg) return simp_node(Kind::Add, a, b->args[0]);
            return make(Kind::Sub, {a, b});
        case Kind::Mul:
            if (is_num(a) && is_num(b)) return num(a->number * b->number);
            if (is_num(a, 0.0) || is_num(b, 0.0)) return num(0.0);
            if (is_num(a, 1.0)) return b;
            if (is_num(b, 1.0)) return a;
            if (is_num(a, -1.0)) return simp_node(Kind::Neg, b);
            if (is_num(b, -1.0)) return simp_node(Kind::Neg, a);
            if (is_num(b)) return simp_node(Kind::Mul, b, a);
            if (a->kind == Kind::Neg) return simp_node(Kind::Neg, simp_node(Kind::Mul, a->args[0], b));
            if (b->kind == Kind::Neg) return simp_node(Kind::Neg, simp_node(Kind::Mul, a, b->args[0]));
            if (is_num(a) && b->kind == Kind::Mul && is_num(b->args[0]))
                return simp_node(Kind::Mul, num(a->number * b->args[0]->number), b->args[1]);
            if (!is_num(a) && b->kind == Kind::Mul && is_num(b->args[0]))
                return simp_node(Kind::Mul, b->args[0], simp_node(Kind::Mul, a, b->args[1]));
            if (a->kind == Kind::Mul && is_num(a->args[0]))
                return simp_node(Kind::Mul, a->args[0], simp_node(Kind::Mul, a->args[1], b));
            return make(Kind::Mul, {a, b});
        case Kind::Div:
            if (is_num(a) && is_num(b) && b->number != 0.0) return num(a->number / b->number);
            if (is_num(a, 0.0)) return num(0.0);
            if (is_num(b, 1.0)) return a;
            if (a->kind == Kind::Neg) return simp_node(Kind::Neg, simp_node(Kind::Div, a->args[0], b));
            return make(Kind::Div, {a, b});
        case Kind::Pow:
            if (is_num(a) && is_num(b)) return num(std::pow(a->number, b->number));
            if (is_num(b, 1.0)) return a;
            if (is_num(b, 0.0)) return num(1.0);
            return make(Kind::Pow, {a, b});
        default: return nullptr;
    }
}

NodePtr simp(const NodePtr& n) {
    switch (n->kind) {
        case Kind::Number:
        case Kind::Var:
        case Kind::Pi: return n;
        case Kind::Neg: return simp_node(Kind::Neg, simp(n->args[0]));
        case Kind::Call: {
            std::vector<NodePtr> args;
            bool all_num = true;
            for (const auto& a : n->args) {
                args.push_back(simp(a));
                all_num = all_num && is_num(args.back());
            }
            auto c = call(n->func, args);
            if (n->func == Func::Pow) return simp_node(Kind::Pow, args[0], args[1]);
            if (all_num) {
                const double v = eval(*c, 0.0);
                if (std::isfinite(v)) return num(v);
            }
            return c;
        }
        default: return simp_node(n->kind, simp(n->args[0]), simp(n->args[1]));
    }
}

// ------------------------------------------------------ differentiation

NodePtr d(const NodePtr& n);

NodePtr d_pow(const NodePtr& a, const NodePtr& b) {
    const NodePtr da = d(a);
    if (!mentions_t(*b)) {
        // b·a^(b-1)·a'
        return make(Kind::Mul, {make(Kind::Mul, {b, make(Kind::Pow, {a, make(Kind::Sub, {b, num(1.0)})})}), da});
    }
    // a^b·(b'·log a + b·a'/a)
    const NodePtr db = d(b);
    return make(Kind::Mul,
                {make(Kind::Pow, {a, b}),
                 make(Kind::Add, {make(Kind::Mul, {db, call(Func::Log, {a})}),
                                  make(Kind::Div, {make(Kind::Mul, {b, da}), a})})});
}

NodePtr d(const NodePtr& n) {
    const auto& A = n->args;
    switch (n->kind) {
        case Kind::Number:
        case Kind::Pi: return num(0.0);
        case Kind::Var: return num(1.0);
        case Kind::Neg: return make(Kind::Neg, {d(A[0])});
        case Kind::Add: return make(Kind::Add, {d(A[0]), d(A[1])});
        case Kind::Sub: return make(Kind::Sub, {d(A[0]), d(A[1])});
        case Kind::Mul:
            return make(Kind::Add, {make(Kind::Mul, {d(A[0]), A[1]}), make(Kind::Mul, {A[0], d(A[1])})});
        case Kind::Div:
            return make(Kind::Div,
                        {make(Kind::Sub, {make(Kind::Mul, {d(A[0]), A[1]}), make(Kind::Mul, {A[0], d(A[1])})}),
                         make(Kind::Pow, {A[1], num(2.0)})});
        case Kind::Pow: return d_pow(A[0], A[1]);
        case Kind::Call: {
            const NodePtr& a = A[0];
            switch (n->func) {
                case Func::Sin: return make(Kind::Mul, {call(Func::Cos, {a}), d(a)});
                case Func::Cos: return make(Kind::Neg, {make(Kind::Mul, {call(Func::Sin, {a}), d(a)})});
                case Func::Exp: return make(Kind::Mul, {n, d(a)});
                case Func::Sqrt: return make(Kind::Div, {d(a), make(Kind::Mul, {num(2.0), n})});
                case Func::Tanh:
                    return make(Kind::Mul,
                                {make(Kind::Sub, {num(1.0), make(Kind::Pow, {n, num(2.0)})}), d(a)});
                case Func::Log: return make(Kind::Div, {d(a), a});
                case Func::Pow: return d_pow(A[0], A[1]);
            }
        }
    }
    return num(0.0);
}

}  // namespace

Expression::Expression() : root_(num(0.0)) {}
Expression::Expression(NodePtr root) : root_(std::move(root)) {}

Expression Expression::constant(double v) { return Expression(num(v)); }
Expression Expression::variable() { return Expression(make(Kind::Var)); }

double Expression::evaluate(double t) const { return eval(*root_, t); }
bool Expression::is_constant() const { return !mentions_t(*root_); }
std::string Expression::to_string() const { return print(*root_); }

bool structurally_equal(const Expression& a, const Expression& b) { return equal(*a.root_, *b.root_); }

Expression parse_expression(std::string_view text) { return Expression(Parser(text).parse()); }

Expression simplify(const Expression& e) { return Expression(simp(e.root())); }

Expression differentiate(const Expression& e) { return simplify(Expression(d(e.root()))); }

std::string format_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace gso
