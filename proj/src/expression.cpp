#include "nlwave/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "nlwave/errors.hpp"

namespace nlwave {

struct Expression::Node {
    enum class Kind { constant, var_r, var_s, unary, binary } kind = Kind::constant;
    double value = 0.0;
    char op = 0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double r, double s) const {
        switch (kind) {
            case Kind::constant: return value;
            case Kind::var_r: return r;
            case Kind::var_s: return s;
            case Kind::unary: {
                const double x = lhs->eval(r, s);
                return fn ? fn(x) : -x;
            }
            case Kind::binary: {
                const double a = lhs->eval(r, s), b = rhs->eval(r, s);
                switch (op) {
                    case '+': return a + b;
                    case '-': return a - b;
                    case '*': return a * b;
                    case '/': return a / b;
                    default: return std::pow(a, b);
                }
            }
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

double sech(double x) { return 1.0 / std::cosh(x); }
double sq_root(double x) { return std::sqrt(x); }

struct Function {
    const char* name;
    double (*fn)(double);
};

const Function kFunctions[] = {
    {"exp", [](double x) { return std::exp(x); }},   {"log", [](double x) { return std::log(x); }},
    {"sqrt", sq_root},                               {"abs", [](double x) { return std::abs(x); }},
    {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
    {"tan", [](double x) { return std::tan(x); }},   {"sinh", [](double x) { return std::sinh(x); }},
    {"cosh", [](double x) { return std::cosh(x); }}, {"tanh", [](double x) { return std::tanh(x); }},
    {"sech", sech},
};

class Parser {
public:
    Parser(const std::string& text, const std::map<std::string, double>& constants)
        : text_(text), constants_(constants) {}

    NodePtr parse() {
        NodePtr e = sum();
        skip();
        if (pos_ != text_.size()) error("unexpected character");
        return e;
    }

private:
    [[noreturn]] void error(const std::string& what) const {
        throw ParseError("expression '" + text_ + "': " + what + " at column " + std::to_string(pos_ + 1));
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(char op, NodePtr a, NodePtr b) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::binary;
        n->op = op;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }

    static NodePtr unary(double (*fn)(double), NodePtr a) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::unary;
        n->fn = fn;
        n->lhs = std::move(a);
        return n;
    }

    NodePtr sum() {
        NodePtr e = product();
        for (;;) {
            if (accept('+')) e = binary('+', e, product());
            else if (accept('-')) e = binary('-', e, product());
            else return e;
        }
    }

    NodePtr product() {
        NodePtr e = signed_power();
        for (;;) {
            if (accept('*')) e = binary('*', e, signed_power());
            else if (accept('/')) e = binary('/', e, signed_power());
            else return e;
        }
    }

    NodePtr signed_power() {
        if (accept('-')) return unary(nullptr, signed_power());
        if (accept('+')) return signed_power();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return binary('^', base, signed_power());
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= text_.size()) error("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = sum();
            if (!accept(')')) error("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        error("unexpected character");
    }

    NodePtr number() {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) error("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        auto n = std::make_shared<Node>();
        n->value = v;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name = text_.substr(start, pos_ - start);
        auto n = std::make_shared<Node>();
        if (name == "r") {
            n->kind = Node::Kind::var_r;
            return n;
        }
        if (name == "s") {
            n->kind = Node::Kind::var_s;
            return n;
        }
        for (const auto& f : kFunctions) {
            if (name == f.name) {
                if (!accept('(')) error("expected '(' after " + name);
                NodePtr arg = sum();
                if (!accept(')')) error("expected ')'");
                return unary(f.fn, arg);
            }
        }
        if (auto it = constants_.find(name); it != constants_.end()) {
            n->value = it->second;
            return n;
        }
        if (name == "pi") {
            n->value = std::numbers::pi;
            return n;
        }
        pos_ = start;
        error("unknown identifier '" + name + "'");
    }

    const std::string& text_;
    const std::map<std::string, double>& constants_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::map<std::string, double>& constants) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(e.text_, constants).parse();
    return e;
}

double Expression::operator()(double r, double s) const { return root_->eval(r, s); }

}  // namespace nlwave
