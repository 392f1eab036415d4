#include "bbfs/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "bbfs/numerics.hpp"

namespace bbfs {

struct Expression::Node {
    enum class Op {
        constant, var,            // leaf
        add, sub, mul, div, pow,  // binary
        neg,                      // unary
        call1, call2              // function calls
    };
    Op op;
    double value = 0.0;   // constant
    int var_index = 0;    // var
    int fn = 0;           // call: index into the function tables
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

double fn1_eval(int fn, double a) {
    switch (fn) {
        case 0: return std::abs(a);
        case 1: return std::log(a);
        case 2: return std::exp(a);
        case 3: return std::sqrt(a);
        case 4: return a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0);  // sign
        case 5: return a >= 0 ? 1.0 : 0.0;                  // step
        case 6: return std::sin(a);
        case 7: return std::cos(a);
    }
    return 0.0;
}

const char* kFn1Names[] = {"abs", "log", "exp", "sqrt", "sign", "step", "sin", "cos"};

double fn2_eval(int fn, double a, double b) {
    switch (fn) {
        case 0: return std::max(a, b);
        case 1: return std::min(a, b);
        case 2: return std::pow(a, b);
    }
    return 0.0;
}

const char* kFn2Names[] = {"max", "min", "pow"};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ContractError("expression error at position " + std::to_string(pos_) +
                            " in \"" + s_ + "\": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr make(Node n) { return std::make_shared<Node>(std::move(n)); }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (consume('+')) {
                lhs = make({Node::Op::add, 0, 0, 0, lhs, term()});
            } else if (consume('-')) {
                lhs = make({Node::Op::sub, 0, 0, 0, lhs, term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (consume('*')) {
                lhs = make({Node::Op::mul, 0, 0, 0, lhs, unary()});
            } else if (consume('/')) {
                lhs = make({Node::Op::div, 0, 0, 0, lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (consume('-')) return make({Node::Op::neg, 0, 0, 0, unary(), nullptr});
        if (consume('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (consume('^')) {
            return make({Node::Op::pow, 0, 0, 0, base, unary()});
        }
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        if (consume('(')) {
            NodePtr e = expr();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        fail("expected number, name, or '('");
    }

    NodePtr number() {
        std::size_t end = pos_;
        while (end < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                s_[end] == 'e' || s_[end] == 'E' ||
                ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
                 (s_[end - 1] == 'e' || s_[end - 1] == 'E')))) {
            ++end;
        }
        double v = 0.0;
        try {
            v = std::stod(s_.substr(pos_, end - pos_));
        } catch (...) {
            fail("bad number");
        }
        pos_ = end;
        return make({Node::Op::constant, v, 0, 0, nullptr, nullptr});
    }

    NodePtr ident() {
        std::size_t end = pos_;
        while (end < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) {
            ++end;
        }
        std::string name = s_.substr(pos_, end - pos_);
        pos_ = end;
        if (consume('(')) {
            std::vector<NodePtr> args;
            args.push_back(expr());
            while (consume(',')) args.push_back(expr());
            if (!consume(')')) fail("expected ')'");
            for (int i = 0; i < 8; ++i) {
                if (name == kFn1Names[i]) {
                    if (args.size() != 1) fail(name + " takes one argument");
                    return make({Node::Op::call1, 0, 0, i, args[0], nullptr});
                }
            }
            for (int i = 0; i < 3; ++i) {
                if (name == kFn2Names[i]) {
                    if (args.size() != 2) fail(name + " takes two arguments");
                    return make({Node::Op::call2, 0, 0, i, args[0], args[1]});
                }
            }
            fail("unknown function '" + name + "'");
        }
        if (name == "x" || name == "x1" || name == "t")
            return make({Node::Op::var, 0, 0, 0, nullptr, nullptr});
        if (name == "x2") return make({Node::Op::var, 0, 1, 0, nullptr, nullptr});
        if (name == "pi")
            return make({Node::Op::constant, std::numbers::pi, 0, 0, nullptr, nullptr});
        if (name == "e")
            return make({Node::Op::constant, std::numbers::e, 0, 0, nullptr, nullptr});
        fail("unknown name '" + name + "'");
    }
};

double eval(const Node& n, const std::array<double, 2>& x) {
    switch (n.op) {
        case Node::Op::constant: return n.value;
        case Node::Op::var: return x[static_cast<std::size_t>(n.var_index)];
        case Node::Op::add: return eval(*n.a, x) + eval(*n.b, x);
        case Node::Op::sub: return eval(*n.a, x) - eval(*n.b, x);
        case Node::Op::mul: return eval(*n.a, x) * eval(*n.b, x);
        case Node::Op::div: return eval(*n.a, x) / eval(*n.b, x);
        case Node::Op::pow: return std::pow(eval(*n.a, x), eval(*n.b, x));
        case Node::Op::neg: return -eval(*n.a, x);
        case Node::Op::call1: return fn1_eval(n.fn, eval(*n.a, x));
        case Node::Op::call2: return fn2_eval(n.fn, eval(*n.a, x), eval(*n.b, x));
    }
    return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Parser p(text);
    return Expression(p.parse(), text);
}

double Expression::operator()(std::array<double, 2> x) const { return eval(*root_, x); }

Expression::Expression(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

Expression::Expression(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression other) {
    root_ = std::move(other.root_);
    text_ = std::move(other.text_);
    return *this;
}
Expression::~Expression() = default;

}  // namespace bbfs
