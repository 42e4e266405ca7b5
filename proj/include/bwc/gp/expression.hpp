#pragma once

// Symbolic discriminant expressions: binary trees over {+, -, *, protected /}
// with feature references and real constants at the leaves. Evaluation is
// total — division near zero returns 1 and every intermediate value is
// clamped — so any tree can be scored on any feature vector.

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bwc/rng.hpp"
#include "bwc/text.hpp"

namespace bwc::gp {

enum class Op { add, sub, mul, div };

inline constexpr double kDivEpsilon = 1e-9;   // |denominator| below this -> 1
inline constexpr double kValueClamp = 1e12;   // evaluation magnitude limit

inline std::string to_string(Op op) {
    switch (op) {
        case Op::add: return "add";
        case Op::sub: return "sub";
        case Op::mul: return "mul";
        case Op::div: return "div";
    }
    return "?";
}

inline Op parse_op(std::string_view s) {
    if (s == "add") return Op::add;
    if (s == "sub") return Op::sub;
    if (s == "mul") return Op::mul;
    if (s == "div") return Op::div;
    throw std::runtime_error("unknown operator: " + std::string(s));
}

class Expr {
public:
    enum class Kind { feature, constant, op };

    Expr() = default;

    static Expr feature(int index) {
        Expr e;
        e.kind_ = Kind::feature;
        e.feature_ = index;
        return e;
    }

    static Expr constant(double v) {
        Expr e;
        e.kind_ = Kind::constant;
        e.value_ = v;
        return e;
    }

    static Expr node(Op op, Expr lhs, Expr rhs) {
        Expr e;
        e.kind_ = Kind::op;
        e.op_ = op;
        e.lhs_ = std::make_unique<Expr>(std::move(lhs));
        e.rhs_ = std::make_unique<Expr>(std::move(rhs));
        return e;
    }

    Expr(const Expr& o) { *this = o; }
    Expr& operator=(const Expr& o) {
        if (this == &o) return *this;
        kind_ = o.kind_;
        feature_ = o.feature_;
        value_ = o.value_;
        op_ = o.op_;
        lhs_ = o.lhs_ ? std::make_unique<Expr>(*o.lhs_) : nullptr;
        rhs_ = o.rhs_ ? std::make_unique<Expr>(*o.rhs_) : nullptr;
        return *this;
    }
    Expr(Expr&&) noexcept = default;
    Expr& operator=(Expr&&) noexcept = default;

    Kind kind() const { return kind_; }
    int feature_index() const { return feature_; }
    double constant_value() const { return value_; }
    Op op() const { return op_; }
    const Expr& lhs() const { return *lhs_; }
    const Expr& rhs() const { return *rhs_; }

    double evaluate(std::span<const double> features) const {
        switch (kind_) {
            case Kind::feature: {
                const auto i = static_cast<std::size_t>(feature_);
                return clamp_value(i < features.size() ? features[i] : 0.0);
            }
            case Kind::constant:
                return clamp_value(value_);
            case Kind::op: {
                const double a = lhs_->evaluate(features);
                const double b = rhs_->evaluate(features);
                switch (op_) {
                    case Op::add: return clamp_value(a + b);
                    case Op::sub: return clamp_value(a - b);
                    case Op::mul: return clamp_value(a * b);
                    case Op::div: return std::abs(b) < kDivEpsilon ? 1.0 : clamp_value(a / b);
                }
            }
        }
        return 0.0;
    }

    int depth() const {
        if (kind_ != Kind::op) return 1;
        return 1 + std::max(lhs_->depth(), rhs_->depth());
    }

    std::size_t node_count() const {
        if (kind_ != Kind::op) return 1;
        return 1 + lhs_->node_count() + rhs_->node_count();
    }

    int max_feature_index() const {
        if (kind_ == Kind::feature) return feature_;
        if (kind_ != Kind::op) return -1;
        return std::max(lhs_->max_feature_index(), rhs_->max_feature_index());
    }

    // Preorder list of (node, depth-from-root) pairs; depth of the root is 1.
    void collect(std::vector<std::pair<Expr*, int>>& out, int depth_from_root = 1) {
        out.emplace_back(this, depth_from_root);
        if (kind_ == Kind::op) {
            lhs_->collect(out, depth_from_root + 1);
            rhs_->collect(out, depth_from_root + 1);
        }
    }

    std::string to_text() const {
        switch (kind_) {
            case Kind::feature: return "(feat " + std::to_string(feature_) + ")";
            case Kind::constant: return "(const " + fmt_double(value_) + ")";
            case Kind::op:
                return "(" + gp::to_string(op_) + " " + lhs_->to_text() + " " + rhs_->to_text() +
                       ")";
        }
        return "";
    }

    bool operator==(const Expr& o) const {
        if (kind_ != o.kind_) return false;
        switch (kind_) {
            case Kind::feature: return feature_ == o.feature_;
            case Kind::constant: return value_ == o.value_;
            case Kind::op: return op_ == o.op_ && *lhs_ == *o.lhs_ && *rhs_ == *o.rhs_;
        }
        return false;
    }

private:
    static double clamp_value(double v) {
        if (std::isnan(v)) return 0.0;
        if (v > kValueClamp) return kValueClamp;
        if (v < -kValueClamp) return -kValueClamp;
        return v;
    }

    Kind kind_ = Kind::constant;
    int feature_ = 0;
    double value_ = 0.0;
    Op op_ = Op::add;
    std::unique_ptr<Expr> lhs_;
    std::unique_ptr<Expr> rhs_;
};

// Decision rule: non-negative expression output is the positive class.
inline int classify(const Expr& e, std::span<const double> features) {
    return e.evaluate(features) >= 0.0 ? +1 : -1;
}

// ---- random tree generation (ramped half-and-half) ----

struct TreeGenConfig {
    int n_features = 1;
    int max_depth = 8;
    std::vector<Op> ops = {Op::add, Op::sub, Op::mul, Op::div};
    double leaf_probability = 0.25;  // chance to stop early in "grow" mode
};

namespace detail {

inline Expr random_leaf(const TreeGenConfig& cfg, Rng& rng) {
    if (rng.chance(0.5))
        return Expr::feature(static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.n_features))));
    return Expr::constant(rng.uniform(-1.0, 1.0));
}

inline Expr random_tree(const TreeGenConfig& cfg, Rng& rng, int depth_left, bool full) {
    if (depth_left <= 1) return random_leaf(cfg, rng);
    if (!full && rng.chance(cfg.leaf_probability)) return random_leaf(cfg, rng);
    const Op op = cfg.ops[rng.below(cfg.ops.size())];
    Expr lhs = random_tree(cfg, rng, depth_left - 1, full);
    Expr rhs = random_tree(cfg, rng, depth_left - 1, full);
    return Expr::node(op, std::move(lhs), std::move(rhs));
}

}  // namespace detail

inline Expr random_expression(const TreeGenConfig& cfg, Rng& rng) {
    if (cfg.max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
    if (cfg.n_features < 1) throw std::invalid_argument("n_features must be >= 1");
    const int target_depth = rng.uniform_int(1, cfg.max_depth);
    const bool full = rng.chance(0.5);
    return detail::random_tree(cfg, rng, target_depth, full);
}

// ---- prefix-notation (s-expression) serialization ----

namespace detail {

struct Tokenizer {
    std::string_view text;
    std::size_t pos = 0;

    std::string_view next() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\n' || text[pos] == '\t'))
            ++pos;
        if (pos >= text.size()) throw std::runtime_error("unexpected end of expression");
        if (text[pos] == '(' || text[pos] == ')') return text.substr(pos++, 1);
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] != ' ' && text[pos] != '(' && text[pos] != ')' &&
               text[pos] != '\n' && text[pos] != '\t')
            ++pos;
        return text.substr(start, pos - start);
    }

    bool done() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\n' || text[pos] == '\t'))
            ++pos;
        return pos >= text.size();
    }
};

inline Expr parse_expr(Tokenizer& tok) {
    auto t = tok.next();
    if (t != "(") throw std::runtime_error("expected '(' in expression");
    auto head = tok.next();
    if (head == "feat") {
        auto idx = parse_int(tok.next());
        if (!idx || *idx < 0) throw std::runtime_error("bad feature index");
        if (tok.next() != ")") throw std::runtime_error("expected ')'");
        return Expr::feature(static_cast<int>(*idx));
    }
    if (head == "const") {
        auto v = parse_double(tok.next());
        if (!v) throw std::runtime_error("bad constant");
        if (tok.next() != ")") throw std::runtime_error("expected ')'");
        return Expr::constant(*v);
    }
    const Op op = parse_op(head);
    Expr lhs = parse_expr(tok);
    Expr rhs = parse_expr(tok);
    if (tok.next() != ")") throw std::runtime_error("expected ')'");
    return Expr::node(op, std::move(lhs), std::move(rhs));
}

}  // namespace detail

inline Expr parse_expression(std::string_view text) {
    detail::Tokenizer tok{text};
    Expr e = detail::parse_expr(tok);
    if (!tok.done()) throw std::runtime_error("trailing characters after expression");
    return e;
}

}  // namespace bwc::gp
