#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stlx/interval.hpp"
#include "stlx/linear_expr.hpp"

namespace stlx {

enum class NodeKind {
    Pred,        // g(x) >= c at the current step
    IntPred,     // sum of g over a window [a,b) >= c
    DerPred,     // left/right discrete derivative of g >= c
    Not,
    And,         // m-ary, m >= 2
    Or,          // m-ary, m >= 2
    Implies,     // kept for printing; semantics are !lhs || rhs
    Eventually,  // F[t1,t2]
    Globally,    // G[t1,t2]
};

enum class DerivSide { Left, Right };

/// Byte range into the parsed source text; zero-length for formulas built
/// programmatically.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

class Formula;

/// Immutable AST node. Only the fields relevant to `kind` are meaningful.
struct FormulaNode {
    NodeKind kind = NodeKind::Pred;
    LinearExpr expr;          // Pred / IntPred / DerPred
    double threshold = 0.0;   // c
    Interval interval;        // IntPred bounds or temporal window
    DerivSide side = DerivSide::Right;
    std::vector<Formula> children;
    SourceSpan span;
};

/// Value handle onto a shared immutable node. Formulas are cheap to copy
/// and safe to share across threads once built.
class Formula {
public:
    Formula() = default;
    explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}

    const FormulaNode& node() const { return *node_; }
    const FormulaNode* ptr() const { return node_.get(); }
    NodeKind kind() const { return node_->kind; }
    const std::vector<Formula>& children() const { return node_->children; }
    bool valid() const noexcept { return node_ != nullptr; }

private:
    std::shared_ptr<const FormulaNode> node_;
};

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace detail {
inline Formula make(FormulaNode n) {
    return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}
}  // namespace detail

/// g(x) >= c
inline Formula pred(LinearExpr e, double c) {
    FormulaNode n;
    n.kind = NodeKind::Pred;
    n.expr = std::move(e);
    n.threshold = c;
    return detail::make(std::move(n));
}

/// Integral predicate over [a,b]: the left-Riemann sum of g over the
/// window, shifted by the evaluation time, must reach c.
inline Formula integral(LinearExpr e, double a, double b, double c) {
    FormulaNode n;
    n.kind = NodeKind::IntPred;
    n.expr = std::move(e);
    n.interval = {a, b};
    n.threshold = c;
    return detail::make(std::move(n));
}

/// Derivative predicate: the one-sided discrete rate of change of g must
/// reach c.
inline Formula derivative(LinearExpr e, DerivSide side, double c) {
    FormulaNode n;
    n.kind = NodeKind::DerPred;
    n.expr = std::move(e);
    n.side = side;
    n.threshold = c;
    return detail::make(std::move(n));
}

inline Formula negation(Formula f) {
    FormulaNode n;
    n.kind = NodeKind::Not;
    n.children.push_back(std::move(f));
    return detail::make(std::move(n));
}

inline Formula conjunction(std::vector<Formula> fs) {
    FormulaNode n;
    n.kind = NodeKind::And;
    n.children = std::move(fs);
    return detail::make(std::move(n));
}

inline Formula disjunction(std::vector<Formula> fs) {
    FormulaNode n;
    n.kind = NodeKind::Or;
    n.children = std::move(fs);
    return detail::make(std::move(n));
}

inline Formula implies(Formula lhs, Formula rhs) {
    FormulaNode n;
    n.kind = NodeKind::Implies;
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    return detail::make(std::move(n));
}

inline Formula eventually(double t1, double t2, Formula f) {
    FormulaNode n;
    n.kind = NodeKind::Eventually;
    n.interval = {t1, t2};
    n.children.push_back(std::move(f));
    return detail::make(std::move(n));
}

inline Formula globally(double t1, double t2, Formula f) {
    FormulaNode n;
    n.kind = NodeKind::Globally;
    n.interval = {t1, t2};
    n.children.push_back(std::move(f));
    return detail::make(std::move(n));
}

/// operator sugar; && and || flatten nested conjunctions/disjunctions so
/// that a && b && c yields one m-ary node, matching what the parser builds.
inline Formula operator!(Formula f) { return negation(std::move(f)); }

inline Formula operator&&(Formula a, Formula b) {
    std::vector<Formula> fs;
    if (a.kind() == NodeKind::And)
        fs = a.children();
    else
        fs.push_back(std::move(a));
    if (b.kind() == NodeKind::And)
        fs.insert(fs.end(), b.children().begin(), b.children().end());
    else
        fs.push_back(std::move(b));
    return conjunction(std::move(fs));
}

inline Formula operator||(Formula a, Formula b) {
    std::vector<Formula> fs;
    if (a.kind() == NodeKind::Or)
        fs = a.children();
    else
        fs.push_back(std::move(a));
    if (b.kind() == NodeKind::Or)
        fs.insert(fs.end(), b.children().begin(), b.children().end());
    else
        fs.push_back(std::move(b));
    return disjunction(std::move(fs));
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

/// Compares shape and payloads; spans are ignored.
inline bool structurally_equal(const Formula& a, const Formula& b) {
    const FormulaNode& x = a.node();
    const FormulaNode& y = b.node();
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case NodeKind::Pred:
            if (!(x.expr == y.expr) || x.threshold != y.threshold) return false;
            break;
        case NodeKind::IntPred:
            if (!(x.expr == y.expr) || x.threshold != y.threshold ||
                !(x.interval == y.interval))
                return false;
            break;
        case NodeKind::DerPred:
            if (!(x.expr == y.expr) || x.threshold != y.threshold || x.side != y.side)
                return false;
            break;
        case NodeKind::Eventually:
        case NodeKind::Globally:
            if (!(x.interval == y.interval)) return false;
            break;
        default:
            break;
    }
    if (x.children.size() != y.children.size()) return false;
    for (std::size_t i = 0; i < x.children.size(); ++i)
        if (!structurally_equal(x.children[i], y.children[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ValidateCode {
    NonDivisibleBound,
    NegativeGlobalTime,
    EmptyInterval,
    MalformedExpr,
    UnknownDimension,
};

struct ValidateIssue {
    ValidateCode code;
    std::string message;
    SourceSpan span;
};

inline const char* to_string(ValidateCode c) {
    switch (c) {
        case ValidateCode::NonDivisibleBound: return "NonDivisibleBound";
        case ValidateCode::NegativeGlobalTime: return "NegativeGlobalTime";
        case ValidateCode::EmptyInterval: return "EmptyInterval";
        case ValidateCode::MalformedExpr: return "MalformedExpr";
        case ValidateCode::UnknownDimension: return "UnknownDimension";
    }
    return "?";
}

namespace detail {

inline void check_expr(const FormulaNode& n, const std::vector<std::string>* dims,
                       std::vector<ValidateIssue>& out) {
    if (n.expr.terms.empty()) {
        out.push_back({ValidateCode::MalformedExpr,
                       "expression has no terms", n.span});
        return;
    }
    for (std::size_t i = 0; i < n.expr.terms.size(); ++i) {
        const auto& t = n.expr.terms[i];
        if (t.dim.empty()) {
            out.push_back({ValidateCode::MalformedExpr,
                           "empty dimension name", n.span});
            continue;
        }
        if (!std::isfinite(t.coef)) {
            out.push_back({ValidateCode::MalformedExpr,
                           "non-finite coefficient on '" + t.dim + "'", n.span});
        }
        for (std::size_t j = i + 1; j < n.expr.terms.size(); ++j) {
            const auto& u = n.expr.terms[j];
            if (u.dim == t.dim && u.abs == t.abs) {
                out.push_back({ValidateCode::MalformedExpr,
                               "duplicate term for dimension '" + t.dim + "'",
                               n.span});
            }
        }
        if (dims && std::find(dims->begin(), dims->end(), t.dim) == dims->end()) {
            out.push_back({ValidateCode::UnknownDimension,
                           "unknown dimension '" + t.dim + "'", n.span});
        }
    }
    if (!std::isfinite(n.expr.constant) || !std::isfinite(n.threshold)) {
        out.push_back({ValidateCode::MalformedExpr,
                       "non-finite constant or threshold", n.span});
    }
}

inline void check_divisible(double v, double dt, const SourceSpan& span,
                            std::vector<ValidateIssue>& out) {
    if (!divides_evenly(v, dt)) {
        out.push_back({ValidateCode::NonDivisibleBound,
                       "bound " + std::to_string(v) +
                           " is not a multiple of delta_t",
                       span});
    }
}

// `earliest` is the smallest global evaluation time (seconds) this node can
// be asked at, assuming the root is evaluated at time 0. `structure_only`
// skips the earliest-time checks so that the monitor can apply them at run
// time relative to the requested step instead.
inline void validate_rec(const FormulaNode& n, double dt, double earliest,
                         const std::vector<std::string>* dims, bool structure_only,
                         std::vector<ValidateIssue>& out) {
    switch (n.kind) {
        case NodeKind::Pred:
            check_expr(n, dims, out);
            break;
        case NodeKind::IntPred: {
            check_expr(n, dims, out);
            if (!(n.interval.hi > n.interval.lo)) {
                out.push_back({ValidateCode::EmptyInterval,
                               "integral bounds require b > a", n.span});
            }
            check_divisible(n.interval.lo, dt, n.span, out);
            check_divisible(n.interval.hi, dt, n.span, out);
            if (!structure_only && earliest + n.interval.lo < -1e-9 * dt) {
                out.push_back({ValidateCode::NegativeGlobalTime,
                               "integral window reaches before time 0 "
                               "(t + a < 0 at earliest evaluation)",
                               n.span});
            }
            break;
        }
        case NodeKind::DerPred:
            check_expr(n, dims, out);
            if (!structure_only && n.side == DerivSide::Left &&
                earliest < dt * (1.0 - 1e-9)) {
                out.push_back({ValidateCode::NegativeGlobalTime,
                               "left derivative needs one past sample; it is "
                               "evaluated at time 0 here",
                               n.span});
            }
            break;
        case NodeKind::Not:
            validate_rec(n.children[0].node(), dt, earliest, dims, structure_only, out);
            break;
        case NodeKind::And:
        case NodeKind::Or:
            if (n.children.size() < 2) {
                out.push_back({ValidateCode::MalformedExpr,
                               "conjunction/disjunction needs at least two "
                               "operands",
                               n.span});
            }
            for (const auto& c : n.children)
                validate_rec(c.node(), dt, earliest, dims, structure_only, out);
            break;
        case NodeKind::Implies:
            for (const auto& c : n.children)
                validate_rec(c.node(), dt, earliest, dims, structure_only, out);
            break;
        case NodeKind::Eventually:
        case NodeKind::Globally: {
            if (n.interval.lo < 0.0) {
                out.push_back({ValidateCode::NegativeGlobalTime,
                               "temporal window must start at t1 >= 0", n.span});
            }
            if (n.interval.hi < n.interval.lo) {
                out.push_back({ValidateCode::EmptyInterval,
                               "temporal window requires t2 >= t1", n.span});
            }
            check_divisible(n.interval.lo, dt, n.span, out);
            check_divisible(n.interval.hi, dt, n.span, out);
            validate_rec(n.children[0].node(), dt, earliest + std::max(0.0, n.interval.lo),
                         dims, structure_only, out);
            break;
        }
    }
}

}  // namespace detail

/// Full well-formedness check: interval invariants, divisibility of every
/// bound by delta_t, nonnegative global time for integral windows and left
/// derivatives (root evaluation time assumed 0), and optionally that all
/// dimension names exist. Empty result means ok.
inline std::vector<ValidateIssue> validate(const Formula& f, double delta_t,
                                           const std::vector<std::string>* dims = nullptr) {
    std::vector<ValidateIssue> out;
    if (!(delta_t > 0.0)) {
        out.push_back({ValidateCode::MalformedExpr, "delta_t must be positive", {}});
        return out;
    }
    detail::validate_rec(f.node(), delta_t, 0.0, dims, /*structure_only=*/false, out);
    return out;
}

/// Like validate but without the earliest-evaluation-time checks; the
/// monitor uses this and enforces sample availability relative to the
/// actual requested step.
inline std::vector<ValidateIssue> validate_structure(const Formula& f, double delta_t,
                                                     const std::vector<std::string>* dims = nullptr) {
    std::vector<ValidateIssue> out;
    if (!(delta_t > 0.0)) {
        out.push_back({ValidateCode::MalformedExpr, "delta_t must be positive", {}});
        return out;
    }
    detail::validate_rec(f.node(), delta_t, 0.0, dims, /*structure_only=*/true, out);
    return out;
}

// ---------------------------------------------------------------------------
// Horizon
// ---------------------------------------------------------------------------

namespace detail {

inline double horizon_rec(const FormulaNode& n, double dt) {
    switch (n.kind) {
        case NodeKind::Pred:
            return 0.0;
        case NodeKind::IntPred:
            return std::max({std::abs(n.interval.lo), n.interval.hi,
                             n.interval.hi - n.interval.lo});
        case NodeKind::DerPred:
            // A right derivative looks one sample ahead; a left derivative
            // looks back, which does not extend the horizon.
            return n.side == DerivSide::Right ? dt : 0.0;
        case NodeKind::Not:
            return horizon_rec(n.children[0].node(), dt);
        case NodeKind::And:
        case NodeKind::Or:
        case NodeKind::Implies: {
            double h = 0.0;
            for (const auto& c : n.children)
                h = std::max(h, horizon_rec(c.node(), dt));
            return h;
        }
        case NodeKind::Eventually:
        case NodeKind::Globally: {
            const FormulaNode& c = n.children[0].node();
            // Temporal operator directly over an integral predicate: the
            // window already covers the backward reach, so only the forward
            // extent b matters.
            if (c.kind == NodeKind::IntPred)
                return std::max(n.interval.hi, n.interval.hi + c.interval.hi);
            return n.interval.hi + horizon_rec(c, dt);
        }
    }
    return 0.0;
}

}  // namespace detail

/// Minimum signal duration (seconds past the evaluation instant) needed to
/// decide the formula. delta_t enters only through derivative predicates,
/// which need one extra sample on the right.
inline double horizon(const Formula& f, double delta_t) {
    return detail::horizon_rec(f.node(), delta_t);
}

}  // namespace stlx
