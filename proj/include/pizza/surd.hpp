#pragma once

#include <map>
#include <string>

#include "pizza/field.hpp"

namespace pizza {

/// Formal sum  sum_k c_k sqrt(r_k)  with c_k, r_k in the field and r_k > 0.
/// Rational radicands are reduced to squarefree integers so equal surds
/// share a key; other radicands are keyed by their exact coefficients.
class SurdSum {
public:
    SurdSum() = default;
    explicit SurdSum(Field f) : field_(std::move(f)) {}

    static SurdSum of(const AlgebraicNumber& coeff);  // coeff * sqrt(1)
    static SurdSum sqrt_of(const AlgebraicNumber& coeff, const AlgebraicNumber& radicand);
    /// Euclidean length of the vector (dx, dy).
    static SurdSum length(const AlgebraicNumber& dx, const AlgebraicNumber& dy);

    SurdSum& operator+=(const SurdSum& o);
    SurdSum& operator-=(const SurdSum& o);
    SurdSum& operator*=(const AlgebraicNumber& s);
    SurdSum operator-() const;

    /// Exact when the merged coefficients all vanish; otherwise decided by a
    /// 100 digit evaluation (mixed radicands).
    bool is_zero() const;
    bool symbolically_zero() const;
    double to_double() const;
    std::string to_decimal(int digits) const;
    std::string to_string() const;
    nlohmann::json to_json() const;
    std::size_t term_count() const { return terms_.size(); }

private:
    struct Term {
        AlgebraicNumber radicand;
        AlgebraicNumber coeff;
    };
    void add_term(const AlgebraicNumber& radicand, const AlgebraicNumber& coeff);

    Field field_;
    std::map<std::string, Term> terms_;
};

SurdSum operator+(SurdSum a, const SurdSum& b);
SurdSum operator-(SurdSum a, const SurdSum& b);
SurdSum operator*(SurdSum a, const AlgebraicNumber& s);

}  // namespace pizza
