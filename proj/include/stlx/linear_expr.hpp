#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace stlx {

/// One summand of a linear expression: coef * dim, or coef * |dim| when
/// abs is set.
struct LinearTerm {
    std::string dim;
    double coef = 1.0;
    bool abs = false;
};

/// A linear combination of signal dimensions plus a constant offset.
/// Terms flagged abs contribute coef * |value|; everything downstream
/// (monitor, encoder) understands that flag.
struct LinearExpr {
    std::vector<LinearTerm> terms;
    double constant = 0.0;

    /// Evaluate against a dimension lookup (name -> value).
    template <typename Lookup>
    double eval(Lookup&& value_of) const {
        double v = constant;
        for (const auto& t : terms) {
            const double x = value_of(t.dim);
            v += t.coef * (t.abs ? std::abs(x) : x);
        }
        return v;
    }

    bool has_abs_term() const noexcept {
        for (const auto& t : terms)
            if (t.abs) return true;
        return false;
    }

    /// The mirrored expression -e, used to desugar "e <= c" into
    /// "-e >= -c".
    LinearExpr negated() const {
        LinearExpr r = *this;
        r.constant = -r.constant;
        for (auto& t : r.terms) t.coef = -t.coef;
        return r;
    }

    LinearExpr& operator+=(const LinearExpr& o) {
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        constant += o.constant;
        return *this;
    }

    bool operator==(const LinearExpr& o) const {
        if (constant != o.constant || terms.size() != o.terms.size()) return false;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (terms[i].dim != o.terms[i].dim || terms[i].coef != o.terms[i].coef ||
                terms[i].abs != o.terms[i].abs)
                return false;
        }
        return true;
    }
};

/// Expression-building helpers, mostly for tests and built-in specs.
inline LinearExpr dim(std::string name, double coef = 1.0) {
    LinearExpr e;
    e.terms.push_back({std::move(name), coef, false});
    return e;
}

inline LinearExpr abs_dim(std::string name, double coef = 1.0) {
    LinearExpr e;
    e.terms.push_back({std::move(name), coef, true});
    return e;
}

inline LinearExpr operator+(LinearExpr a, const LinearExpr& b) {
    a += b;
    return a;
}

inline LinearExpr operator-(LinearExpr a, const LinearExpr& b) {
    a += b.negated();
    return a;
}

inline LinearExpr operator*(double s, LinearExpr e) {
    e.constant *= s;
    for (auto& t : e.terms) t.coef *= s;
    return e;
}

inline LinearExpr operator+(LinearExpr e, double c) {
    e.constant += c;
    return e;
}

inline LinearExpr operator-(LinearExpr e, double c) {
    e.constant -= c;
    return e;
}

}  // namespace stlx
