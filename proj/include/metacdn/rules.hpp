#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "metacdn/util.hpp"

namespace metacdn::rules {

/// Declarative replacement for customer-provided routing scripts: a list of
/// {filter, score, fallback} rules over a tiny arithmetic/comparison
/// expression language. Programs are validated when loaded; evaluation can
/// never fail at query time.
///
/// Accessors available inside expressions:
///   radar.latency_ms | radar.throughput_kbps | radar.availability
///   fusion.<key>          (open vocabulary, e.g. fusion.quota_bytes)
///   client.asn
/// A missing value makes a comparison false and poisons arithmetic; a score
/// that comes out absent ranks the candidate last.

/// Resolves an accessor (root, key) for the candidate under evaluation.
using EvalContext =
    std::function<std::optional<double>(std::string_view root, std::string_view key)>;

namespace ast {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class BinOp { add, sub, mul, div, lt, le, gt, ge, eq, ne, land, lor };

struct Node {
    enum class Kind { number, accessor, unary_neg, unary_not, binary } kind;
    double number = 0;
    std::string root, key;  // accessor
    BinOp op = BinOp::add;
    NodePtr lhs, rhs;  // unary uses lhs only
};

inline bool truthy(const std::optional<double>& v) { return v.has_value() && *v != 0.0; }

inline std::optional<double> eval(const Node& n, const EvalContext& ctx) {
    switch (n.kind) {
        case Node::Kind::number: return n.number;
        case Node::Kind::accessor: return ctx(n.root, n.key);
        case Node::Kind::unary_neg: {
            auto v = eval(*n.lhs, ctx);
            if (!v) return std::nullopt;
            return -*v;
        }
        case Node::Kind::unary_not: return truthy(eval(*n.lhs, ctx)) ? 0.0 : 1.0;
        case Node::Kind::binary: break;
    }
    if (n.op == BinOp::land)
        return truthy(eval(*n.lhs, ctx)) && truthy(eval(*n.rhs, ctx)) ? 1.0 : 0.0;
    if (n.op == BinOp::lor)
        return truthy(eval(*n.lhs, ctx)) || truthy(eval(*n.rhs, ctx)) ? 1.0 : 0.0;
    auto a = eval(*n.lhs, ctx);
    auto b = eval(*n.rhs, ctx);
    if (!a || !b) return std::nullopt;
    switch (n.op) {
        case BinOp::add: return *a + *b;
        case BinOp::sub: return *a - *b;
        case BinOp::mul: return *a * *b;
        case BinOp::div: return *b == 0.0 ? std::nullopt : std::optional(*a / *b);
        case BinOp::lt: return *a < *b ? 1.0 : 0.0;
        case BinOp::le: return *a <= *b ? 1.0 : 0.0;
        case BinOp::gt: return *a > *b ? 1.0 : 0.0;
        case BinOp::ge: return *a >= *b ? 1.0 : 0.0;
        case BinOp::eq: return *a == *b ? 1.0 : 0.0;
        case BinOp::ne: return *a != *b ? 1.0 : 0.0;
        default: return std::nullopt;
    }
}

}  // namespace ast

class Expr {
public:
    static Expected<Expr, std::string> parse(std::string_view text);

    /// nullopt means the expression touched a value that is not available.
    std::optional<double> eval(const EvalContext& ctx) const {
        return ast::eval(*root_, ctx);
    }

    bool eval_bool(const EvalContext& ctx) const { return ast::truthy(eval(ctx)); }

    const std::string& text() const { return text_; }

private:
    Expr(ast::NodePtr root, std::string text) : root_(std::move(root)), text_(std::move(text)) {}
    ast::NodePtr root_;
    std::string text_;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expected<ast::NodePtr, std::string> run() {
        auto node = parse_or();
        if (!node) return node;
        skip_ws();
        if (pos_ != text_.size())
            return fail("unexpected trailing input at offset " + std::to_string(pos_));
        return node;
    }

private:
    using Result = Expected<ast::NodePtr, std::string>;

    Result fail(std::string msg) const {
        return Result::failure("rule expression error: " + std::move(msg));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_).starts_with(tok)) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Result parse_or() {
        auto lhs = parse_and();
        if (!lhs) return lhs;
        while (eat("||")) {
            auto rhs = parse_and();
            if (!rhs) return rhs;
            lhs = make_bin(ast::BinOp::lor, *lhs, *rhs);
        }
        return lhs;
    }

    Result parse_and() {
        auto lhs = parse_cmp();
        if (!lhs) return lhs;
        while (eat("&&")) {
            auto rhs = parse_cmp();
            if (!rhs) return rhs;
            lhs = make_bin(ast::BinOp::land, *lhs, *rhs);
        }
        return lhs;
    }

    Result parse_cmp() {
        auto lhs = parse_sum();
        if (!lhs) return lhs;
        ast::BinOp op;
        if (eat("<=")) op = ast::BinOp::le;
        else if (eat(">=")) op = ast::BinOp::ge;
        else if (eat("==")) op = ast::BinOp::eq;
        else if (eat("!=")) op = ast::BinOp::ne;
        else if (peek() == '<' && (++pos_, true)) op = ast::BinOp::lt;
        else if (peek() == '>' && (++pos_, true)) op = ast::BinOp::gt;
        else return lhs;
        auto rhs = parse_sum();
        if (!rhs) return rhs;
        return make_bin(op, *lhs, *rhs);
    }

    Result parse_sum() {
        auto lhs = parse_term();
        if (!lhs) return lhs;
        while (true) {
            if (eat("+")) {
                auto rhs = parse_term();
                if (!rhs) return rhs;
                lhs = make_bin(ast::BinOp::add, *lhs, *rhs);
            } else if (peek() == '-') {
                ++pos_;
                auto rhs = parse_term();
                if (!rhs) return rhs;
                lhs = make_bin(ast::BinOp::sub, *lhs, *rhs);
            } else {
                return lhs;
            }
        }
    }

    Result parse_term() {
        auto lhs = parse_unary();
        if (!lhs) return lhs;
        while (true) {
            if (eat("*")) {
                auto rhs = parse_unary();
                if (!rhs) return rhs;
                lhs = make_bin(ast::BinOp::mul, *lhs, *rhs);
            } else if (eat("/")) {
                auto rhs = parse_unary();
                if (!rhs) return rhs;
                lhs = make_bin(ast::BinOp::div, *lhs, *rhs);
            } else {
                return lhs;
            }
        }
    }

    Result parse_unary() {
        if (eat("!")) {
            auto inner = parse_unary();
            if (!inner) return inner;
            auto node = std::make_shared<ast::Node>();
            node->kind = ast::Node::Kind::unary_not;
            node->lhs = *inner;
            return ast::NodePtr(node);
        }
        if (peek() == '-') {
            ++pos_;
            auto inner = parse_unary();
            if (!inner) return inner;
            auto node = std::make_shared<ast::Node>();
            node->kind = ast::Node::Kind::unary_neg;
            node->lhs = *inner;
            return ast::NodePtr(node);
        }
        return parse_primary();
    }

    Result parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) return fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_or();
            if (!inner) return inner;
            if (!eat(")")) return fail("missing ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_accessor();
        return fail(std::string("unexpected character '") + c + "'");
    }

    Result parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                text_[pos_] == 'e' || text_[pos_] == 'E' ||
                ((text_[pos_] == '+' || text_[pos_] == '-') &&
                 (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
            ++pos_;
        double value = 0;
        auto [p, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc{} || p != text_.data() + pos_)
            return fail("bad number at offset " + std::to_string(start));
        auto node = std::make_shared<ast::Node>();
        node->kind = ast::Node::Kind::number;
        node->number = value;
        return ast::NodePtr(node);
    }

    Result parse_accessor() {
        auto ident = [&]() -> std::string {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return std::string(text_.substr(start, pos_ - start));
        };
        std::string root = ident();
        if (!eat(".")) return fail("accessor '" + root + "' needs a '.key'");
        std::string key = ident();
        if (key.empty()) return fail("accessor '" + root + ".' missing key");
        if (root == "radar") {
            if (key != "latency_ms" && key != "throughput_kbps" && key != "availability")
                return fail("unknown radar metric '" + key + "'");
        } else if (root == "client") {
            if (key != "asn") return fail("unknown client field '" + key + "'");
        } else if (root != "fusion") {
            return fail("unknown accessor root '" + root + "'");
        }
        auto node = std::make_shared<ast::Node>();
        node->kind = ast::Node::Kind::accessor;
        node->root = std::move(root);
        node->key = std::move(key);
        return ast::NodePtr(node);
    }

    static ast::NodePtr make_bin(ast::BinOp op, ast::NodePtr lhs, ast::NodePtr rhs) {
        auto node = std::make_shared<ast::Node>();
        node->kind = ast::Node::Kind::binary;
        node->op = op;
        node->lhs = std::move(lhs);
        node->rhs = std::move(rhs);
        return node;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Expected<Expr, std::string> Expr::parse(std::string_view text) {
    auto node = detail::Parser(text).run();
    if (!node) return Expected<Expr, std::string>::failure(node.error());
    return Expr(*node, std::string(text));
}

struct Rule {
    Expr filter;
    Expr score;
    std::string fallback;
};

class RuleProgram {
public:
    /// Input shape: JSON array of {"filter": expr, "score": expr,
    /// "fallback": alias}. Falling through every rule lands on the last
    /// rule's fallback.
    static Expected<RuleProgram, std::string> from_json(const nlohmann::json& j) {
        using Fail = Expected<RuleProgram, std::string>;
        if (!j.is_array() || j.empty())
            return Fail::failure("rule program must be a non-empty array of rules");
        RuleProgram prog;
        for (std::size_t i = 0; i < j.size(); ++i) {
            const auto& rj = j[i];
            auto where = "rule " + std::to_string(i + 1) + ": ";
            if (!rj.is_object() || !rj.contains("filter") || !rj.contains("score") ||
                !rj.contains("fallback"))
                return Fail::failure(where + "expected {filter, score, fallback}");
            auto filter = Expr::parse(rj.at("filter").get<std::string>());
            if (!filter) return Fail::failure(where + filter.error());
            auto score = Expr::parse(rj.at("score").get<std::string>());
            if (!score) return Fail::failure(where + score.error());
            prog.rules_.push_back(Rule{std::move(*filter), std::move(*score),
                                       rj.at("fallback").get<std::string>()});
        }
        return prog;
    }

    nlohmann::json to_json() const {
        auto arr = nlohmann::json::array();
        for (const auto& r : rules_)
            arr.push_back({{"filter", r.filter.text()},
                           {"score", r.score.text()},
                           {"fallback", r.fallback}});
        return arr;
    }

    const std::vector<Rule>& rules() const { return rules_; }

    /// Every fallback must name one of the given aliases.
    std::optional<std::string> check_against(const std::vector<std::string>& aliases) const {
        for (const auto& r : rules_) {
            bool found = false;
            for (const auto& a : aliases) found = found || a == r.fallback;
            if (!found) return "rule fallback '" + r.fallback + "' is not a candidate";
        }
        return std::nullopt;
    }

private:
    std::vector<Rule> rules_;
};

}  // namespace metacdn::rules
