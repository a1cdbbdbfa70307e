#pragma once

#include <map>
#include <memory>
#include <string>

namespace nlwave {

/// Compiled arithmetic expression in the variables r and s.
///
/// Grammar: sums, products, `^` (right associative), unary minus, parentheses,
/// numeric literals, named constants and the functions
/// exp log sqrt abs sin cos tan sinh cosh tanh sech. Throws ParseError with the
/// offending column on malformed input or unknown identifiers.
class Expression {
public:
    struct Node;

    static Expression parse(const std::string& text,
                            const std::map<std::string, double>& constants = {});

    double operator()(double r, double s) const;
    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace nlwave
