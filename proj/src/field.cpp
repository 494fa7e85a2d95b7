#include "pizza/field.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace pizza {
namespace {

using Poly = std::vector<Rational>;  // low to high

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

Poly poly_sub(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

// Returns (quotient, remainder).
std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
    trim(a);
    if (b.empty()) throw SingularError("polynomial division by zero");
    if (a.size() < b.size()) return {{}, a};
    Poly q(a.size() - b.size() + 1, Rational(0));
    const Rational& lead = b.back();
    for (std::size_t k = a.size(); k-- >= b.size();) {
        Rational c = a[k] / lead;
        q[k - (b.size() - 1)] = c;
        if (c != 0)
            for (std::size_t j = 0; j < b.size(); ++j) a[k - (b.size() - 1) + j] -= c * b[j];
        if (k == b.size() - 1) break;
    }
    trim(a);
    trim(q);
    return {q, a};
}

Poly poly_monic(Poly p) {
    trim(p);
    if (p.empty()) return p;
    Rational lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

Poly poly_gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = poly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(a);
}

Poly poly_derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
    trim(d);
    return d;
}

// C_k(t) with C_k(2cos x) = 2cos(kx).
Poly chebyshev_c(int k) {
    Poly c0{Rational(2)}, c1{Rational(0), Rational(1)};
    if (k == 0) return c0;
    for (int i = 1; i < k; ++i) {
        Poly t_c1(c1.size() + 1, Rational(0));
        for (std::size_t j = 0; j < c1.size(); ++j) t_c1[j + 1] = c1[j];
        Poly next = poly_sub(t_c1, c0);
        c0 = std::move(c1);
        c1 = std::move(next);
    }
    return c1;
}

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

std::map<int, Poly>& minpoly_cache() {
    static std::map<int, Poly> c;
    return c;
}

std::map<int, Field>& field_cache() {
    static std::map<int, Field> c;
    return c;
}

Poly min_poly_uncached(int N) {
    // Roots of C_N(t) + 2 are 2cos(k pi/N), k odd. Strip repeated roots, then
    // the roots 2cos(k pi/N) with gcd(k, N) = g > 1 (g odd), which belong to N/g.
    Poly p = chebyshev_c(N);
    p[0] += 2;
    trim(p);
    Poly sqfree = poly_divmod(p, poly_gcd(p, poly_derivative(p))).first;
    sqfree = poly_monic(sqfree);
    for (int g = 3; g <= N; g += 2) {
        if (N % g != 0) continue;
        sqfree = poly_divmod(sqfree, min_poly_of_2cos(N / g)).first;
    }
    return poly_monic(sqfree);
}

// MPFR evaluation with a rigorous-enough error bound. Returns the sign if
// decided, 0 if undecided at this precision.
int mpfr_sign_attempt(const FieldSpec& f, const std::vector<Rational>& c, mpfr_prec_t prec) {
    mpfr_t theta, pw, term, sum, absum, tmp;
    mpfr_inits2(prec, theta, pw, term, sum, absum, tmp, static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(theta, MPFR_RNDN);
    mpfr_div_si(theta, theta, f.N, MPFR_RNDN);
    mpfr_cos(theta, theta, MPFR_RNDN);
    mpfr_mul_si(theta, theta, 2, MPFR_RNDN);
    mpfr_set_si(pw, 1, MPFR_RNDN);
    mpfr_set_si(sum, 0, MPFR_RNDN);
    mpfr_set_si(absum, 0, MPFR_RNDN);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] != 0) {
            mpfr_set_q(term, c[i].get_mpq_t(), MPFR_RNDN);
            mpfr_mul(term, term, pw, MPFR_RNDN);
            mpfr_add(sum, sum, term, MPFR_RNDN);
            mpfr_abs(tmp, term, MPFR_RNDN);
            mpfr_add(absum, absum, tmp, MPFR_RNDN);
        }
        mpfr_mul(pw, pw, theta, MPFR_RNDN);
    }
    // Each term carries relative error below (i + 4) 2^-prec; be generous.
    mpfr_mul_2si(absum, absum, -static_cast<long>(prec) + 8 + static_cast<long>(c.size()), MPFR_RNDU);
    mpfr_abs(tmp, sum, MPFR_RNDN);
    int result = 0;
    if (mpfr_cmp(tmp, absum) > 0) result = mpfr_sgn(sum) > 0 ? 1 : -1;
    mpfr_clears(theta, pw, term, sum, absum, tmp, static_cast<mpfr_ptr>(nullptr));
    return result;
}

}  // namespace

std::vector<Rational> min_poly_of_2cos(int N) {
    if (N < 1) throw DomainError("make_field: N must be >= 1");
    {
        std::lock_guard<std::mutex> lock(cache_mutex());
        auto it = minpoly_cache().find(N);
        if (it != minpoly_cache().end()) return it->second;
    }
    Poly p = min_poly_uncached(N);
    std::lock_guard<std::mutex> lock(cache_mutex());
    minpoly_cache()[N] = p;
    return p;
}

Field make_field(int N, int degree_cap) {
    if (N < 1) throw DomainError("make_field: N must be >= 1");
    {
        std::lock_guard<std::mutex> lock(cache_mutex());
        auto it = field_cache().find(N);
        if (it != field_cache().end()) {
            if (it->second->degree > degree_cap)
                throw ResourceError("field degree " + std::to_string(it->second->degree) + " exceeds cap");
            return it->second;
        }
    }
    // phi(2N)/2 is a cheap upper bound to refuse before factoring.
    {
        int n2 = 2 * N, phi = n2;
        for (int p = 2, m = n2; p <= m; ++p) {
            if (m % p == 0) {
                phi -= phi / p;
                while (m % p == 0) m /= p;
            }
        }
        if (N > 2 && phi / 2 > degree_cap)
            throw ResourceError("field Q(2cos(pi/" + std::to_string(N) + ")) has degree " +
                                std::to_string(phi / 2) + " > cap " + std::to_string(degree_cap));
    }
    auto spec = std::make_shared<FieldSpec>();
    spec->N = N;
    spec->min_poly = min_poly_of_2cos(N);
    spec->degree = static_cast<int>(spec->min_poly.size()) - 1;
    if (spec->degree > degree_cap) throw ResourceError("field degree exceeds cap");
    const int d = spec->degree;
    // theta^(d+k) in the power basis for k = 0 .. d-2.
    std::vector<Rational> cur(d, Rational(0));
    for (int i = 0; i < d; ++i) cur[i] = -spec->min_poly[i];
    for (int k = 0; k + 1 < d; ++k) {
        spec->reduction.push_back(cur);
        std::vector<Rational> next(d, Rational(0));
        Rational top = cur[d - 1];
        for (int i = d - 1; i >= 1; --i) next[i] = cur[i - 1];
        for (int i = 0; i < d; ++i) next[i] -= top * spec->min_poly[i];
        cur = std::move(next);
    }
    for (const auto& row : spec->reduction)
        for (const auto& c : row)
            if (c.get_den() != 1) throw Error("minimal polynomial of 2cos(pi/N) is not integral");
    spec->theta_double = 2.0 * std::cos(M_PI / N);
    double pw = 1.0;
    for (int i = 0; i < d; ++i) {
        spec->powers_double.push_back(pw);
        pw *= spec->theta_double;
    }
    Field f = spec;
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto [it, inserted] = field_cache().emplace(N, f);
    return it->second;
}

// ---------------------------------------------------------------------------

AlgebraicNumber::AlgebraicNumber(Field field) : field_(std::move(field)) {
    coeffs_.assign(field_->degree, Rational(0));
}

AlgebraicNumber::AlgebraicNumber(Field field, const Rational& value) : AlgebraicNumber(std::move(field)) {
    coeffs_[0] = value;
    coeffs_[0].canonicalize();
}

AlgebraicNumber::AlgebraicNumber(Field field, std::vector<Rational> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    const auto d = static_cast<std::size_t>(field_->degree);
    if (coeffs_.size() > d) {
        // Reduce modulo the minimal polynomial.
        auto r = poly_divmod(coeffs_, field_->min_poly).second;
        coeffs_ = std::move(r);
    }
    coeffs_.resize(d, Rational(0));
    for (auto& c : coeffs_) c.canonicalize();
}

AlgebraicNumber AlgebraicNumber::theta(const Field& field) {
    std::vector<Rational> c(2, Rational(0));
    c[1] = 1;
    return AlgebraicNumber(field, c);
}

bool AlgebraicNumber::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool AlgebraicNumber::is_rational() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) return false;
    return true;
}

Rational AlgebraicNumber::to_rational() const {
    if (!is_rational()) throw DomainError("not a rational number: " + to_string());
    return coeffs_.empty() ? Rational(0) : coeffs_[0];
}

void AlgebraicNumber::check_same_field(const AlgebraicNumber& o) const {
    if (!field_ || !o.field_) throw DomainError("arithmetic on an uninitialised field element");
    if (field_ != o.field_ && field_->N != o.field_->N)
        throw DomainError("field mismatch: N=" + std::to_string(field_->N) + " vs N=" + std::to_string(o.field_->N));
}

AlgebraicNumber& AlgebraicNumber::operator+=(const AlgebraicNumber& o) {
    check_same_field(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator-=(const AlgebraicNumber& o) {
    check_same_field(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

namespace {

// Scratch for the integer product; the reduction rows of theta are integral
// since its minimal polynomial is monic over Z.
struct MulScratch {
    std::vector<mpz_class> x, y, prod;
    mpz_class dx, dy, t;
};

// v = X / dx with X integral.
void to_integral(const std::vector<Rational>& v, std::vector<mpz_class>& x, mpz_class& dx) {
    dx = 1;
    for (const auto& c : v)
        if (c.get_den() != 1) mpz_lcm(dx.get_mpz_t(), dx.get_mpz_t(), c.get_den_mpz_t());
    x.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (dx == 1) {
            x[i] = v[i].get_num();
        } else {
            mpz_divexact(x[i].get_mpz_t(), dx.get_mpz_t(), v[i].get_den_mpz_t());
            x[i] *= v[i].get_num();
        }
    }
}

}  // namespace

AlgebraicNumber& AlgebraicNumber::operator*=(const AlgebraicNumber& o) {
    check_same_field(o);
    const int d = field_->degree;
    if (d == 1) {
        coeffs_[0] *= o.coeffs_[0];
        return *this;
    }
    thread_local MulScratch s;
    to_integral(coeffs_, s.x, s.dx);
    to_integral(o.coeffs_, s.y, s.dy);
    s.prod.resize(static_cast<std::size_t>(2 * d - 1));
    for (auto& p : s.prod) p = 0;
    for (int i = 0; i < d; ++i) {
        if (s.x[i] == 0) continue;
        for (int j = 0; j < d; ++j)
            if (s.y[j] != 0) mpz_addmul(s.prod[i + j].get_mpz_t(), s.x[i].get_mpz_t(), s.y[j].get_mpz_t());
    }
    for (int k = 0; k + 1 < d; ++k) {
        const mpz_class& c = s.prod[d + k];
        if (c == 0) continue;
        const auto& red = field_->reduction[k];
        for (int i = 0; i < d; ++i)
            if (red[i] != 0) mpz_addmul(s.prod[i].get_mpz_t(), c.get_mpz_t(), red[i].get_num_mpz_t());
    }
    s.t = s.dx * s.dy;
    for (int i = 0; i < d; ++i) {
        mpq_ptr q = coeffs_[i].get_mpq_t();
        mpz_swap(mpq_numref(q), s.prod[i].get_mpz_t());
        mpz_set(mpq_denref(q), s.t.get_mpz_t());
        mpq_canonicalize(q);
    }
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator*=(const Rational& r) {
    for (auto& c : coeffs_) c *= r;
    return *this;
}

AlgebraicNumber AlgebraicNumber::operator-() const {
    AlgebraicNumber r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

AlgebraicNumber AlgebraicNumber::inverse() const {
    if (is_zero()) throw SingularError("inverse of zero");
    if (is_rational()) return AlgebraicNumber(field_, Rational(1) / coeffs_[0]);
    // Extended Euclid: s*x + t*m = 1.
    Poly a = coeffs_;
    trim(a);
    Poly b = field_->min_poly;
    Poly s0{Rational(1)}, s1{};
    while (!b.empty()) {
        auto [q, r] = poly_divmod(a, b);
        Poly s2 = poly_sub(s0, poly_mul(q, s1));
        a = std::move(b);
        b = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // a is a nonzero constant since min_poly is irreducible.
    Rational c = a[0];
    for (auto& x : s0) x /= c;
    return AlgebraicNumber(field_, s0);
}

AlgebraicNumber& AlgebraicNumber::operator/=(const AlgebraicNumber& o) {
    check_same_field(o);
    if (o.is_rational()) {
        if (o.coeffs_[0] == 0) throw SingularError("division by zero");
        Rational inv = Rational(1) / o.coeffs_[0];
        return *this *= inv;
    }
    return *this *= o.inverse();
}

int AlgebraicNumber::sign() const {
    if (!field_) return 0;
    if (is_rational()) return sgn(coeffs_[0]);
    // Fast double path with a crude error bound.
    double sum = 0.0, absum = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        double t = coeffs_[i].get_d() * field_->powers_double[i];
        if (!std::isfinite(t)) finite = false;
        sum += t;
        absum += std::fabs(t);
    }
    if (finite && std::fabs(sum) > absum * 1e-12 + 1e-300) return sum > 0 ? 1 : -1;
    // Canonical form is nonzero here, so refinement terminates.
    for (mpfr_prec_t prec = 128; prec <= (1 << 20); prec *= 2) {
        int s = mpfr_sign_attempt(*field_, coeffs_, prec);
        if (s != 0) return s;
    }
    throw ResourceError("sign determination did not terminate");
}

double AlgebraicNumber::to_double() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) sum += coeffs_[i].get_d() * field_->powers_double[i];
    return sum;
}

std::string AlgebraicNumber::to_decimal(int digits) const {
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits * 3.33 + 64 + 16 * coeffs_.size());
    mpfr_t theta, pw, term, sum;
    mpfr_inits2(prec, theta, pw, term, sum, static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(theta, MPFR_RNDN);
    mpfr_div_si(theta, theta, field_->N, MPFR_RNDN);
    mpfr_cos(theta, theta, MPFR_RNDN);
    mpfr_mul_si(theta, theta, 2, MPFR_RNDN);
    mpfr_set_si(pw, 1, MPFR_RNDN);
    mpfr_set_si(sum, 0, MPFR_RNDN);
    for (const auto& c : coeffs_) {
        mpfr_set_q(term, c.get_mpq_t(), MPFR_RNDN);
        mpfr_mul(term, term, pw, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        mpfr_mul(pw, pw, theta, MPFR_RNDN);
    }
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, sum);
    mpfr_clears(theta, pw, term, sum, static_cast<mpfr_ptr>(nullptr));
    return std::string(buf.data());
}

AlgebraicNumber AlgebraicNumber::embed_into(const Field& target) const {
    if (target->N == field_->N) return AlgebraicNumber(target, coeffs_);
    if (target->N % field_->N != 0)
        throw DomainError("cannot embed N=" + std::to_string(field_->N) + " into N=" + std::to_string(target->N));
    // theta_small = 2cos(pi/n) = C_{M/n}(theta_big).
    Poly c = chebyshev_c(target->N / field_->N);
    AlgebraicNumber t(target, c);
    AlgebraicNumber result(target), pw(target, Rational(1));
    for (const auto& coef : coeffs_) {
        if (coef != 0) result += pw * coef;
        pw *= t;
    }
    return result;
}

std::string AlgebraicNumber::key() const {
    std::string k;
    for (const auto& c : coeffs_) {
        k += c.get_str();
        k += ',';
    }
    return k;
}

std::string AlgebraicNumber::to_string() const {
    if (!field_) return "<invalid>";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << coeffs_[i].get_str();
        if (i == 1) os << "*t";
        if (i > 1) os << "*t^" << i;
    }
    if (first) os << "0";
    return os.str();
}

bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (!a.field_ || !b.field_) return !a.field_ && !b.field_;
    a.check_same_field(b);
    return a.coeffs_ == b.coeffs_;
}

AlgebraicNumber operator+(AlgebraicNumber a, const AlgebraicNumber& b) { return a += b; }
AlgebraicNumber operator-(AlgebraicNumber a, const AlgebraicNumber& b) { return a -= b; }
AlgebraicNumber operator*(AlgebraicNumber a, const AlgebraicNumber& b) { return a *= b; }
AlgebraicNumber operator/(AlgebraicNumber a, const AlgebraicNumber& b) { return a /= b; }
AlgebraicNumber operator*(AlgebraicNumber a, const Rational& r) { return a *= r; }
AlgebraicNumber operator*(const Rational& r, AlgebraicNumber a) { return a *= r; }

bool operator<(const AlgebraicNumber& a, const AlgebraicNumber& b) { return (b - a).sign() > 0; }

AlgebraicNumber abs(const AlgebraicNumber& x) { return x.sign() < 0 ? -x : x; }

AlgebraicNumber embed_cos(const Field& field, std::int64_t k, std::int64_t M) {
    if (M == 0) throw DomainError("embed_cos: M must be nonzero");
    // cos(k pi / M) = cos(j pi / N) with j = k N / M.
    mpz_class num = mpz_class(static_cast<long>(k)) * field->N;
    if (num % static_cast<long>(M) != 0)
        throw DomainError("cos(" + std::to_string(k) + "pi/" + std::to_string(M) + ") is not in Q(2cos(pi/" +
                          std::to_string(field->N) + "))");
    mpz_class jz = num / static_cast<long>(M);
    long j = jz.get_si();
    long period = 2L * field->N;
    j %= period;
    if (j < 0) j += period;
    if (j > field->N) j = period - j;  // cos is even and 2pi-periodic
    AlgebraicNumber result(field, chebyshev_c(static_cast<int>(j)));
    return result * Rational(1, 2);
}

AlgebraicNumber embed_sin(const Field& field, std::int64_t k, std::int64_t M) {
    return embed_cos(field, M - 2 * k, 2 * M);
}

// ---------------------------------------------------------------------------
// Parsing.

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty number");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational a = parse_rational(s.substr(0, slash));
        Rational b = parse_rational(s.substr(slash + 1));
        if (b == 0) throw ParseError("zero denominator in '" + raw + "'");
        return a / b;
    }
    bool neg = false;
    std::size_t pos = 0;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        pos = 1;
    }
    std::string mant, expo;
    auto e = s.find_first_of("eE", pos);
    mant = s.substr(pos, e == std::string::npos ? std::string::npos : e - pos);
    if (e != std::string::npos) expo = s.substr(e + 1);
    std::string digits;
    long frac_len = 0;
    bool seen_dot = false;
    for (char ch : mant) {
        if (ch == '.') {
            if (seen_dot) throw ParseError("bad number '" + raw + "'");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits += ch;
            if (seen_dot) ++frac_len;
        } else {
            throw ParseError("bad number '" + raw + "'");
        }
    }
    if (digits.empty()) throw ParseError("bad number '" + raw + "'");
    long exponent = 0;
    if (!expo.empty()) {
        try {
            exponent = std::stol(expo);
        } catch (...) {
            throw ParseError("bad exponent in '" + raw + "'");
        }
    }
    mpz_class num(digits);
    long shift = exponent - frac_len;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational r = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

std::string rational_to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

struct TokenParser {
    const Field* field;  // null: requirement-only mode
    std::string s;
    std::size_t pos = 0;
    int requirement = 1;

    static int lcm(int a, int b) { return a / std::gcd(a, b) * b; }

    bool at(char c) const { return pos < s.size() && s[pos] == c; }

    AlgebraicNumber make(const Rational& r) { return field ? AlgebraicNumber(*field, r) : AlgebraicNumber(); }

    AlgebraicNumber cosine(long k, long M) {
        // cos(k pi / M) lives in Q(2cos(pi/M')) with M' = M / gcd(k, M).
        long g = std::gcd(k < 0 ? -k : k, M);
        long m = M / (g == 0 ? 1 : g);
        requirement = lcm(requirement, static_cast<int>(m));
        return field ? embed_cos(*field, k, M) : AlgebraicNumber();
    }

    AlgebraicNumber factor() {
        if (s.compare(pos, 5, "sqrt2") == 0) {
            pos += 5;
            auto c = cosine(1, 4);
            return field ? c * Rational(2) : c;
        }
        if (s.compare(pos, 5, "sqrt3") == 0) {
            pos += 5;
            auto c = cosine(1, 6);
            return field ? c * Rational(2) : c;
        }
        if (s.compare(pos, 5, "sqrt5") == 0) {
            pos += 5;
            auto c = cosine(1, 5);  // sqrt5 = 4cos(pi/5) - 1
            return field ? c * Rational(4) - make(1) : c;
        }
        if (s.compare(pos, 3, "phi") == 0) {
            pos += 3;
            auto c = cosine(1, 5);
            return field ? c * Rational(2) : c;
        }
        if (s.compare(pos, 4, "cos(") == 0 || s.compare(pos, 4, "sin(") == 0) {
            bool is_sin = s[pos] == 's';
            pos += 4;
            auto close = s.find(')', pos);
            if (close == std::string::npos) throw ParseError("missing ')' in '" + s + "'");
            Rational q = parse_rational(s.substr(pos, close - pos));
            pos = close + 1;
            long k = q.get_num().get_si(), M = q.get_den().get_si();
            if (is_sin) return cosine(M - 2 * k, 2 * M);
            return cosine(k, M);
        }
        std::size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
                                  s[pos] == 'e' || s[pos] == 'E' ||
                                  ((s[pos] == '-' || s[pos] == '+') && pos > start &&
                                   (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
            ++pos;
        if (start == pos) throw ParseError("unexpected '" + s.substr(pos) + "' in '" + s + "'");
        return make(parse_rational(s.substr(start, pos - start)));
    }

    AlgebraicNumber term() {
        AlgebraicNumber v = factor();
        while (at('*') || at('/')) {
            bool div = at('/');
            ++pos;
            AlgebraicNumber f = factor();
            if (field) v = div ? v / f : v * f;
        }
        return v;
    }

    AlgebraicNumber expr() {
        bool neg = false;
        if (at('-') || at('+')) {
            neg = at('-');
            ++pos;
        }
        AlgebraicNumber v = term();
        if (field && neg) v = -v;
        while (at('+') || at('-')) {
            bool minus = at('-');
            ++pos;
            AlgebraicNumber t = term();
            if (field) v = minus ? v - t : v + t;
        }
        if (pos != s.size()) throw ParseError("trailing input in '" + s + "'");
        return v;
    }
};

std::string strip_spaces(const std::string& t) {
    std::string s;
    for (char ch : t)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    return s;
}

}  // namespace

AlgebraicNumber parse_number(const Field& field, const std::string& text) {
    TokenParser p{&field, strip_spaces(text)};
    if (p.s.empty()) throw ParseError("empty number");
    return p.expr();
}

int field_requirement(const std::string& text) {
    TokenParser p{nullptr, strip_spaces(text)};
    if (p.s.empty()) throw ParseError("empty number");
    p.expr();
    return p.requirement;
}

nlohmann::json to_json(const AlgebraicNumber& x) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : x.coeffs()) coeffs.push_back(rational_to_string(c));
    return {{"N", x.field()->N}, {"coeffs", coeffs}};
}

AlgebraicNumber algebraic_from_json(const nlohmann::json& j) {
    try {
        Field f = make_field(j.at("N").get<int>());
        std::vector<Rational> c;
        for (const auto& e : j.at("coeffs")) c.push_back(parse_rational(e.get<std::string>()));
        if (c.size() != static_cast<std::size_t>(f->degree))
            throw ParseError("coefficient count does not match field degree");
        return AlgebraicNumber(f, c);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad algebraic number JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Vectors.

FVector zero_vector(const Field& f, std::size_t n) { return FVector(n, AlgebraicNumber(f)); }

FVector unit_vector(const Field& f, std::size_t n, std::size_t i) {
    FVector v = zero_vector(f, n);
    v[i] = AlgebraicNumber(f, Rational(1));
    return v;
}

FVector rational_vector(const Field& f, const std::vector<Rational>& v) {
    FVector r;
    r.reserve(v.size());
    for (const auto& x : v) r.emplace_back(f, x);
    return r;
}

AlgebraicNumber dot(const FVector& a, const FVector& b) {
    if (a.size() != b.size()) throw DomainError("dot: dimension mismatch");
    if (a.empty()) throw DomainError("dot: empty vectors");
    AlgebraicNumber s(a[0].field());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
    return s;
}

FVector add(const FVector& a, const FVector& b) {
    if (a.size() != b.size()) throw DomainError("add: dimension mismatch");
    FVector r = a;
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
    return r;
}

FVector sub(const FVector& a, const FVector& b) {
    if (a.size() != b.size()) throw DomainError("sub: dimension mismatch");
    FVector r = a;
    for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
    return r;
}

FVector scale(const FVector& a, const AlgebraicNumber& s) {
    FVector r = a;
    for (auto& x : r) x *= s;
    return r;
}

FVector negate(const FVector& a) {
    FVector r = a;
    for (auto& x : r) x = -x;
    return r;
}

bool is_zero(const FVector& a) {
    return std::all_of(a.begin(), a.end(), [](const AlgebraicNumber& x) { return x.is_zero(); });
}

std::string vector_key(const FVector& v) {
    std::string k;
    for (const auto& x : v) {
        k += x.key();
        k += ';';
    }
    return k;
}

std::vector<double> to_doubles(const FVector& v) {
    std::vector<double> r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(x.to_double());
    return r;
}

nlohmann::json to_json(const FVector& v) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& x : v) j.push_back(to_json(x));
    return j;
}

FVector vector_from_json(const nlohmann::json& j) {
    FVector v;
    for (const auto& e : j) v.push_back(algebraic_from_json(e));
    return v;
}

// ---------------------------------------------------------------------------
// Matrices.

FMatrix::FMatrix(const Field& f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols), data_(rows * cols, AlgebraicNumber(f)) {}

FMatrix FMatrix::identity(const Field& f, std::size_t n) {
    FMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = AlgebraicNumber(f, Rational(1));
    return m;
}

FMatrix FMatrix::reflection(const FVector& alpha) {
    if (alpha.empty()) throw DomainError("reflection of an empty vector");
    const Field& f = alpha[0].field();
    AlgebraicNumber nn = dot(alpha, alpha);
    if (nn.is_zero()) throw DomainError("reflection in the zero vector");
    AlgebraicNumber two_over = AlgebraicNumber(f, Rational(2)) / nn;
    const std::size_t n = alpha.size();
    FMatrix m = identity(f, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) -= two_over * alpha[i] * alpha[j];
    return m;
}

FMatrix FMatrix::from_rows(const std::vector<FVector>& rows) {
    if (rows.empty()) throw DomainError("from_rows: no rows");
    FMatrix m(rows[0][0].field(), rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols_) throw DomainError("from_rows: ragged rows");
        for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

FVector FMatrix::row(std::size_t r) const {
    return FVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

FVector FMatrix::column(std::size_t c) const {
    FVector v;
    for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
    return v;
}

FMatrix FMatrix::transpose() const {
    FMatrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

FVector FMatrix::apply(const FVector& v) const {
    if (v.size() != cols_) throw DomainError("apply: dimension mismatch");
    FVector out = zero_vector(field_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            const auto& m = (*this)(r, c);
            if (!m.is_zero() && !v[c].is_zero()) out[r] += m * v[c];
        }
    return out;
}

FVector FMatrix::apply_transpose(const FVector& v) const {
    if (v.size() != rows_) throw DomainError("apply_transpose: dimension mismatch");
    FVector out = zero_vector(field_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            const auto& m = (*this)(r, c);
            if (!m.is_zero() && !v[r].is_zero()) out[c] += m * v[r];
        }
    return out;
}

bool FMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            const auto& m = (*this)(r, c);
            if (r == c ? !(m.is_rational() && m.to_rational() == 1) : !m.is_zero()) return false;
        }
    return true;
}

std::string FMatrix::key() const {
    std::string k;
    for (const auto& x : data_) {
        k += x.key();
        k += '|';
    }
    return k;
}

FMatrix operator*(const FMatrix& a, const FMatrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix product: dimension mismatch");
    FMatrix m(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const auto& x = a(i, k);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (!b(k, j).is_zero()) m(i, j) += x * b(k, j);
        }
    return m;
}

bool operator==(const FMatrix& a, const FMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

namespace {

// Row echelon form in place; returns (rank, determinant sign flips, pivot product).
struct Echelon {
    std::size_t rank = 0;
    AlgebraicNumber det;
};

Echelon echelon(FMatrix& m, FVector* rhs) {
    Echelon e;
    e.det = AlgebraicNumber(m.field(), Rational(1));
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
        if (piv == m.rows()) {
            e.det = AlgebraicNumber(m.field());
            continue;
        }
        if (piv != row) {
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(piv, c));
            if (rhs) std::swap((*rhs)[row], (*rhs)[piv]);
            e.det = -e.det;
        }
        AlgebraicNumber inv = m(row, col).inverse();
        e.det *= m(row, col);
        for (std::size_t r = row + 1; r < m.rows(); ++r) {
            if (m(r, col).is_zero()) continue;
            AlgebraicNumber f = m(r, col) * inv;
            for (std::size_t c = col; c < m.cols(); ++c)
                if (!m(row, c).is_zero()) m(r, c) -= f * m(row, c);
            if (rhs) (*rhs)[r] -= f * (*rhs)[row];
        }
        ++row;
    }
    e.rank = row;
    return e;
}

}  // namespace

AlgebraicNumber det(const FMatrix& m) {
    if (m.rows() != m.cols()) throw DomainError("det of a non-square matrix");
    if (m.rows() == 0) throw DomainError("det of an empty matrix");
    FMatrix w = m;
    auto e = echelon(w, nullptr);
    if (e.rank < m.rows()) return AlgebraicNumber(m.field());
    return e.det;
}

FVector solve(const FMatrix& m, const FVector& b) {
    if (m.rows() != m.cols() || b.size() != m.rows()) throw DomainError("solve: dimension mismatch");
    FMatrix w = m;
    FVector rhs = b;
    auto e = echelon(w, &rhs);
    const std::size_t n = m.rows();
    if (e.rank < n) throw SingularError("solve: matrix is singular");
    FVector x = zero_vector(m.field(), n);
    for (std::size_t i = n; i-- > 0;) {
        AlgebraicNumber s = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j)
            if (!w(i, j).is_zero()) s -= w(i, j) * x[j];
        x[i] = s / w(i, i);
    }
    return x;
}

std::size_t rank(const FMatrix& m) {
    FMatrix w = m;
    return echelon(w, nullptr).rank;
}

std::size_t rank_of(const std::vector<FVector>& vectors) {
    if (vectors.empty()) return 0;
    return rank(FMatrix::from_rows(vectors));
}

FMatrix inverse(const FMatrix& m) {
    const std::size_t n = m.rows();
    FMatrix inv(m.field(), n, n);
    for (std::size_t c = 0; c < n; ++c) {
        FVector col = solve(m, unit_vector(m.field(), n, c));
        for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
    }
    return inv;
}

nlohmann::json to_json(const FMatrix& m) {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) j.push_back(to_json(m.row(r)));
    return j;
}

FMatrix matrix_from_json(const nlohmann::json& j) {
    std::vector<FVector> rows;
    for (const auto& r : j) rows.push_back(vector_from_json(r));
    return FMatrix::from_rows(rows);
}

}  // namespace pizza
