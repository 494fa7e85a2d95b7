#include "pizza/surd.hpp"

#include <mpfr.h>

#include <cmath>
#include <sstream>

namespace pizza {
namespace {

// k = s^2 * t with t squarefree as far as trial division reaches.
void split_square(mpz_class k, mpz_class& s, mpz_class& t) {
    s = 1;
    t = 1;
    for (unsigned long p = 2; p < 200000 && p * p <= k; ++p) {
        if (k % p != 0) continue;
        int e = 0;
        while (k % p == 0) {
            k /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2) t *= p;
    }
    if (mpz_perfect_square_p(k.get_mpz_t())) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), k.get_mpz_t());
        s *= r;
    } else {
        t *= k;
    }
}

void eval_mpfr(const AlgebraicNumber& x, mpfr_t out) {
    std::string s = x.to_decimal(130);
    mpfr_set_str(out, s.c_str(), 10, MPFR_RNDN);
}

}  // namespace

SurdSum SurdSum::of(const AlgebraicNumber& coeff) {
    SurdSum s(coeff.field());
    s.add_term(AlgebraicNumber(coeff.field(), Rational(1)), coeff);
    return s;
}

SurdSum SurdSum::sqrt_of(const AlgebraicNumber& coeff, const AlgebraicNumber& radicand) {
    if (radicand.sign() < 0) throw DomainError("square root of a negative number");
    SurdSum s(coeff.field());
    if (radicand.is_zero()) return s;
    s.add_term(radicand, coeff);
    return s;
}

SurdSum SurdSum::length(const AlgebraicNumber& dx, const AlgebraicNumber& dy) {
    // |dx| sqrt(1 + (dy/dx)^2) with |dy/dx| <= 1 after swapping roles.
    AlgebraicNumber a = abs(dx), b = abs(dy);
    if (a < b) std::swap(a, b);
    if (a.is_zero()) return SurdSum(dx.field());
    AlgebraicNumber slope = b / a;
    return sqrt_of(a, AlgebraicNumber(dx.field(), Rational(1)) + slope * slope);
}

void SurdSum::add_term(const AlgebraicNumber& radicand_in, const AlgebraicNumber& coeff_in) {
    if (!field_) field_ = coeff_in.field();
    AlgebraicNumber radicand = radicand_in, coeff = coeff_in;
    if (radicand.is_rational()) {
        Rational r = radicand.to_rational();
        mpz_class s, t;
        split_square(r.get_num() * r.get_den(), s, t);
        // sqrt(p/q) = s sqrt(t) / q
        coeff *= Rational(s, r.get_den());
        radicand = AlgebraicNumber(field_, Rational(t));
    }
    if (coeff.is_zero()) return;
    std::string key = radicand.key();
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, Term{radicand, coeff});
        return;
    }
    it->second.coeff += coeff;
    if (it->second.coeff.is_zero()) terms_.erase(it);
}

SurdSum& SurdSum::operator+=(const SurdSum& o) {
    for (const auto& [k, t] : o.terms_) add_term(t.radicand, t.coeff);
    if (!field_) field_ = o.field_;
    return *this;
}

SurdSum& SurdSum::operator-=(const SurdSum& o) {
    for (const auto& [k, t] : o.terms_) add_term(t.radicand, -t.coeff);
    if (!field_) field_ = o.field_;
    return *this;
}

SurdSum& SurdSum::operator*=(const AlgebraicNumber& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, t] : terms_) t.coeff *= s;
    return *this;
}

SurdSum SurdSum::operator-() const {
    SurdSum r = *this;
    for (auto& [k, t] : r.terms_) t.coeff = -t.coeff;
    return r;
}

bool SurdSum::symbolically_zero() const { return terms_.empty(); }

bool SurdSum::is_zero() const {
    if (terms_.empty()) return true;
    if (terms_.size() == 1) return false;
    mpfr_t sum, c, r;
    mpfr_inits2(400, sum, c, r, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_si(sum, 0, MPFR_RNDN);
    for (const auto& [k, t] : terms_) {
        eval_mpfr(t.coeff, c);
        eval_mpfr(t.radicand, r);
        mpfr_sqrt(r, r, MPFR_RNDN);
        mpfr_mul(c, c, r, MPFR_RNDN);
        mpfr_add(sum, sum, c, MPFR_RNDN);
    }
    mpfr_abs(sum, sum, MPFR_RNDN);
    bool zero = mpfr_zero_p(sum) || mpfr_get_exp(sum) < -300;  // below 1e-90
    mpfr_clears(sum, c, r, static_cast<mpfr_ptr>(nullptr));
    return zero;
}

double SurdSum::to_double() const {
    double s = 0.0;
    for (const auto& [k, t] : terms_) s += t.coeff.to_double() * std::sqrt(t.radicand.to_double());
    return s;
}

std::string SurdSum::to_decimal(int digits) const {
    mpfr_t sum, c, r;
    mpfr_inits2(static_cast<mpfr_prec_t>(digits * 4 + 64), sum, c, r, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_si(sum, 0, MPFR_RNDN);
    for (const auto& [k, t] : terms_) {
        eval_mpfr(t.coeff, c);
        eval_mpfr(t.radicand, r);
        mpfr_sqrt(r, r, MPFR_RNDN);
        mpfr_mul(c, c, r, MPFR_RNDN);
        mpfr_add(sum, sum, c, MPFR_RNDN);
    }
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, sum);
    mpfr_clears(sum, c, r, static_cast<mpfr_ptr>(nullptr));
    return buf.data();
}

std::string SurdSum::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, t] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << t.coeff.to_string() << ")";
        if (!(t.radicand.is_rational() && t.radicand.to_rational() == 1)) os << "*sqrt(" << t.radicand.to_string() << ")";
    }
    return os.str();
}

nlohmann::json SurdSum::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [k, t] : terms_) terms.push_back({{"coeff", pizza::to_json(t.coeff)}, {"radicand", pizza::to_json(t.radicand)}});
    return {{"terms", terms}, {"approx", to_decimal(20)}};
}

SurdSum operator+(SurdSum a, const SurdSum& b) { return a += b; }
SurdSum operator-(SurdSum a, const SurdSum& b) { return a -= b; }
SurdSum operator*(SurdSum a, const AlgebraicNumber& s) { return a *= s; }

}  // namespace pizza
