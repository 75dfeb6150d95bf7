#include "yfl/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace yfl {

struct Expression::Node {
    enum class Kind { Number, Coord, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    double value = 0.0;
    int coord = 0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->value = v;
    return n;
}

NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

double fn_sin(double x) { return std::sin(x); }
double fn_cos(double x) { return std::cos(x); }
double fn_exp(double x) { return std::exp(x); }
double fn_sqrt(double x) { return std::sqrt(x); }
double fn_log(double x) { return std::log(x); }
double fn_abs(double x) { return std::abs(x); }

class Parser {
public:
    Parser(const std::string& s, int dim) : s_(s), dim_(dim) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression error at position " + std::to_string(pos_) +
                                    ": " + what + " in \"" + s_ + "\"");
    }

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

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = binary(Node::Kind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = binary(Node::Kind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            skip();
            if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') return lhs;
            if (accept('*')) {
                lhs = binary(Node::Kind::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = binary(Node::Kind::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Neg;
            n->lhs = unary();
            return n;
        }
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        skip();
        if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') {
            pos_ += 2;
            return binary(Node::Kind::Pow, base, unary());
        }
        if (accept('^')) return binary(Node::Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return leaf(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "pi") return leaf(std::numbers::pi);
            if (name.size() >= 2 && name[0] == 'x' &&
                name.find_first_not_of("0123456789", 1) == std::string::npos) {
                const int k = std::stoi(name.substr(1));
                if (k < 1 || k > dim_) {
                    pos_ = start;
                    fail("coordinate " + name + " outside dimension " + std::to_string(dim_));
                }
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Coord;
                n->coord = k - 1;
                return n;
            }
            double (*fn)(double) = nullptr;
            if (name == "sin") fn = fn_sin;
            else if (name == "cos") fn = fn_cos;
            else if (name == "exp") fn = fn_exp;
            else if (name == "sqrt") fn = fn_sqrt;
            else if (name == "log") fn = fn_log;
            else if (name == "abs") fn = fn_abs;
            if (!fn) {
                pos_ = start;
                fail("unknown identifier '" + name + "'");
            }
            if (!accept('(')) fail("expected '(' after " + name);
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Call;
            n->fn = fn;
            n->lhs = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        fail(std::string("unexpected '") + c + "'");
    }

    const std::string& s_;
    int dim_;
    std::size_t pos_ = 0;
};

double eval(const Node& n, std::span<const double> x) {
    switch (n.kind) {
        case Node::Kind::Number: return n.value;
        case Node::Kind::Coord: return x[n.coord];
        case Node::Kind::Neg: return -eval(*n.lhs, x);
        case Node::Kind::Add: return eval(*n.lhs, x) + eval(*n.rhs, x);
        case Node::Kind::Sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
        case Node::Kind::Mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
        case Node::Kind::Div: return eval(*n.lhs, x) / eval(*n.rhs, x);
        case Node::Kind::Pow: return std::pow(eval(*n.lhs, x), eval(*n.rhs, x));
        case Node::Kind::Call: return n.fn(eval(*n.lhs, x));
    }
    return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text, int dimension) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text, dimension).parse();
    return e;
}

double Expression::evaluate(std::span<const double> x) const { return eval(*root_, x); }

ScalarField sample_expression(const GridPtr& grid, const std::string& text) {
    const Expression e = Expression::parse(text, grid->dim);
    ScalarField f = ScalarField::from_function(grid, [&](std::span<const double> x) {
        return e.evaluate(x);
    });
    if (!f.all_finite()) {
        throw std::invalid_argument("expression \"" + text + "\" is not finite on the grid");
    }
    return f;
}

}  // namespace yfl
