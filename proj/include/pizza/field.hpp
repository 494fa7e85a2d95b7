#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "pizza/errors.hpp"

namespace pizza {

using Rational = mpq_class;

/// Real cyclotomic field Q(theta), theta = 2cos(pi/N), in the power basis of theta.
struct FieldSpec {
    int N = 1;
    int degree = 1;
    /// Monic minimal polynomial of theta, coefficients from x^0 up to x^degree.
    std::vector<Rational> min_poly;
    /// reduction[k] expresses theta^(degree + k) in the power basis, k < degree - 1.
    std::vector<std::vector<Rational>> reduction;
    double theta_double = 0.0;
    /// theta^i as doubles, used for the fast sign path.
    std::vector<double> powers_double;
};

using Field = std::shared_ptr<const FieldSpec>;

inline constexpr int kDefaultDegreeCap = 64;

/// Field containing 2cos(k pi / N) for every integer k. Cached: equal N gives
/// the same pointer. Throws ResourceError above the degree cap.
Field make_field(int N, int degree_cap = kDefaultDegreeCap);

/// Coefficients of the minimal polynomial of 2cos(pi/N), low to high.
std::vector<Rational> min_poly_of_2cos(int N);

class AlgebraicNumber {
public:
    AlgebraicNumber() = default;
    explicit AlgebraicNumber(Field field);
    AlgebraicNumber(Field field, const Rational& value);
    AlgebraicNumber(Field field, std::vector<Rational> coeffs);

    static AlgebraicNumber theta(const Field& field);

    const Field& field() const { return field_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    bool valid() const { return static_cast<bool>(field_); }

    bool is_zero() const;
    bool is_rational() const;
    /// Rational value; DomainError unless is_rational().
    Rational to_rational() const;

    AlgebraicNumber& operator+=(const AlgebraicNumber& o);
    AlgebraicNumber& operator-=(const AlgebraicNumber& o);
    AlgebraicNumber& operator*=(const AlgebraicNumber& o);
    AlgebraicNumber& operator/=(const AlgebraicNumber& o);
    AlgebraicNumber& operator*=(const Rational& r);
    AlgebraicNumber operator-() const;

    AlgebraicNumber inverse() const;

    /// -1, 0 or +1 under the real embedding theta = 2cos(pi/N).
    int sign() const;
    double to_double() const;
    /// Decimal approximation with `digits` significant digits.
    std::string to_decimal(int digits) const;

    /// Image under the canonical inclusion Q(2cos(pi/N)) -> Q(2cos(pi/M)), N | M.
    AlgebraicNumber embed_into(const Field& target) const;

    /// Stable byte key (used for hashing and canonical ordering).
    std::string key() const;
    std::string to_string() const;

    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(a == b); }

private:
    void check_same_field(const AlgebraicNumber& o) const;

    Field field_;
    std::vector<Rational> coeffs_;
};

AlgebraicNumber operator+(AlgebraicNumber a, const AlgebraicNumber& b);
AlgebraicNumber operator-(AlgebraicNumber a, const AlgebraicNumber& b);
AlgebraicNumber operator*(AlgebraicNumber a, const AlgebraicNumber& b);
AlgebraicNumber operator/(AlgebraicNumber a, const AlgebraicNumber& b);
AlgebraicNumber operator*(AlgebraicNumber a, const Rational& r);
AlgebraicNumber operator*(const Rational& r, AlgebraicNumber a);

bool operator<(const AlgebraicNumber& a, const AlgebraicNumber& b);
inline bool operator>(const AlgebraicNumber& a, const AlgebraicNumber& b) { return b < a; }
inline bool operator<=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(b < a); }
inline bool operator>=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(a < b); }

inline int sign_of(const AlgebraicNumber& x) { return x.sign(); }
AlgebraicNumber abs(const AlgebraicNumber& x);

/// Exact cos(k pi / M); DomainError if it is not an element of the field.
AlgebraicNumber embed_cos(const Field& field, std::int64_t k, std::int64_t M);
/// Exact sin(k pi / M) = cos((M - 2k) pi / 2M).
AlgebraicNumber embed_sin(const Field& field, std::int64_t k, std::int64_t M);

/// Parses "p/q", "-0.25", "3", "sqrt2", "sqrt2/2", "-sqrt3/2", "phi", "cos(1/5)"
/// (cos(pi/5)) and sums/products of those separated by '+', '*'.
AlgebraicNumber parse_number(const Field& field, const std::string& text);
/// Smallest N such that every token in `text` can be parsed into Q(2cos(pi/N)).
int field_requirement(const std::string& text);

Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& r);

nlohmann::json to_json(const AlgebraicNumber& x);
AlgebraicNumber algebraic_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Vectors and matrices over the field.

using FVector = std::vector<AlgebraicNumber>;

FVector zero_vector(const Field& f, std::size_t n);
FVector unit_vector(const Field& f, std::size_t n, std::size_t i);
FVector rational_vector(const Field& f, const std::vector<Rational>& v);
AlgebraicNumber dot(const FVector& a, const FVector& b);
FVector add(const FVector& a, const FVector& b);
FVector sub(const FVector& a, const FVector& b);
FVector scale(const FVector& a, const AlgebraicNumber& s);
FVector negate(const FVector& a);
bool is_zero(const FVector& a);
std::string vector_key(const FVector& v);
std::vector<double> to_doubles(const FVector& v);
nlohmann::json to_json(const FVector& v);
FVector vector_from_json(const nlohmann::json& j);

class FMatrix {
public:
    FMatrix() = default;
    FMatrix(const Field& f, std::size_t rows, std::size_t cols);

    static FMatrix identity(const Field& f, std::size_t n);
    /// Orthogonal reflection s_alpha(x) = x - 2 (x,alpha)/(alpha,alpha) alpha.
    static FMatrix reflection(const FVector& alpha);
    static FMatrix from_rows(const std::vector<FVector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    AlgebraicNumber& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const AlgebraicNumber& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    FVector row(std::size_t r) const;
    FVector column(std::size_t c) const;
    FMatrix transpose() const;
    FVector apply(const FVector& v) const;
    /// x -> M^T x
    FVector apply_transpose(const FVector& v) const;
    bool is_identity() const;
    std::string key() const;

    friend FMatrix operator*(const FMatrix& a, const FMatrix& b);
    friend bool operator==(const FMatrix& a, const FMatrix& b);
    friend bool operator!=(const FMatrix& a, const FMatrix& b) { return !(a == b); }

private:
    Field field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<AlgebraicNumber> data_;
};

AlgebraicNumber det(const FMatrix& m);
/// Unique solution of m x = b; SingularError if m is not invertible.
FVector solve(const FMatrix& m, const FVector& b);
std::size_t rank(const FMatrix& m);
std::size_t rank_of(const std::vector<FVector>& vectors);
FMatrix inverse(const FMatrix& m);
nlohmann::json to_json(const FMatrix& m);
FMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace pizza
