#include <doctest.h>

#include <mpfr.h>

#include <random>

#include "pizza/field.hpp"

using namespace pizza;

namespace {

using Poly = std::vector<mpz_class>;

Poly pmul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// Exact division of monic integer polynomials.
Poly pdiv(Poly a, const Poly& b) {
    Poly q(a.size() - b.size() + 1, 0);
    for (std::size_t k = a.size(); k-- >= b.size();) {
        mpz_class c = a[k];
        q[k - b.size() + 1] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[k - b.size() + 1 + j] -= c * b[j];
        if (k == b.size() - 1) break;
    }
    return q;
}

Poly cyclotomic(int n) {
    Poly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (int d = 1; d < n; ++d)
        if (n % d == 0) p = pdiv(p, cyclotomic(d));
    return p;
}

// Phi_{2N}(z) = z^d Psi(z + 1/z); Psi is the minimal polynomial of 2cos(pi/N).
std::vector<Rational> oracle_min_poly(int N) {
    Poly phi = cyclotomic(2 * N);
    int d = static_cast<int>(phi.size() - 1) / 2;
    // z^k + z^-k as polynomials in t.
    std::vector<Poly> c{{2}, {0, 1}};
    for (int k = 2; k <= d; ++k) {
        Poly next(k + 1, 0);
        for (std::size_t i = 0; i < c[k - 1].size(); ++i) next[i + 1] += c[k - 1][i];
        for (std::size_t i = 0; i < c[k - 2].size(); ++i) next[i] -= c[k - 2][i];
        c.push_back(next);
    }
    std::vector<Rational> psi(d + 1, Rational(0));
    psi[0] += phi[d];
    for (int k = 1; k <= d; ++k)
        for (std::size_t i = 0; i < c[k].size(); ++i) psi[i] += Rational(phi[d + k] * c[k][i]);
    return psi;
}

AlgebraicNumber random_element(const Field& f, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
    std::vector<Rational> c;
    for (int i = 0; i < f->degree; ++i) c.emplace_back(num(rng), den(rng));
    for (auto& x : c) x.canonicalize();
    return AlgebraicNumber(f, c);
}

double mpfr_eval(const AlgebraicNumber& x, mpfr_t out) {
    mpfr_t th, pw, term;
    mpfr_inits2(700, th, pw, term, static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(th, MPFR_RNDN);
    mpfr_div_si(th, th, x.field()->N, MPFR_RNDN);
    mpfr_cos(th, th, MPFR_RNDN);
    mpfr_mul_si(th, th, 2, MPFR_RNDN);
    mpfr_set_si(pw, 1, MPFR_RNDN);
    mpfr_set_si(out, 0, MPFR_RNDN);
    for (const auto& c : x.coeffs()) {
        mpfr_set_q(term, c.get_mpq_t(), MPFR_RNDN);
        mpfr_mul(term, term, pw, MPFR_RNDN);
        mpfr_add(out, out, term, MPFR_RNDN);
        mpfr_mul(pw, pw, th, MPFR_RNDN);
    }
    mpfr_clears(th, pw, term, static_cast<mpfr_ptr>(nullptr));
    return mpfr_get_d(out, MPFR_RNDN);
}

}  // namespace

TEST_CASE("minimal polynomials match the cyclotomic construction") {
    for (int N = 2; N <= 40; ++N) {
        CAPTURE(N);
        CHECK(min_poly_of_2cos(N) == oracle_min_poly(N));
    }
    CHECK(make_field(8)->degree == 4);
    CHECK(make_field(8)->degree == static_cast<int>(oracle_min_poly(8).size()) - 1);
    auto f4 = make_field(4);
    CHECK(f4->degree == 2);
    CHECK(f4->min_poly == std::vector<Rational>{-2, 0, 1});
    CHECK(make_field(2)->degree == 1);
    CHECK(make_field(1)->degree == 1);
    CHECK(make_field(1)->min_poly == std::vector<Rational>{2, 1});
}

TEST_CASE("degree cap") {
    CHECK_THROWS_AS(make_field(131), ResourceError);
    CHECK_THROWS_AS(make_field(0), DomainError);
}

TEST_CASE("embed_cos examples") {
    auto f4 = make_field(4);
    auto c = embed_cos(f4, 1, 4);
    CHECK(c * c == AlgebraicNumber(f4, Rational(1, 2)));
    auto f5 = make_field(5);
    auto g = embed_cos(f5, 1, 5) * Rational(2);
    CHECK(g * g == g + AlgebraicNumber(f5, Rational(1)));
    CHECK((g - AlgebraicNumber(f5, Rational(1))).sign() == 1);
    auto f12 = make_field(12);
    auto s = embed_cos(f12, 1, 6);
    CHECK(s * s == AlgebraicNumber(f12, Rational(3, 4)));
    CHECK(s.sign() == 1);
    CHECK_THROWS_AS(embed_cos(f4, 1, 3), DomainError);
    // sin via shifted cos
    auto f6 = make_field(6);
    auto s3 = embed_sin(f6, 1, 3);
    CHECK(s3 * s3 == AlgebraicNumber(f6, Rational(3, 4)));
    CHECK(embed_cos(f12, 7, 6) == -embed_cos(f12, 1, 6));
    CHECK(embed_cos(f12, -1, 6) == embed_cos(f12, 1, 6));
}

TEST_CASE("sign examples") {
    auto f24 = make_field(24);
    CHECK(AlgebraicNumber(f24).sign() == 0);
    auto sqrt2 = embed_cos(f24, 1, 4) * Rational(2);
    CHECK((sqrt2 - AlgebraicNumber(f24, Rational(1))).sign() == 1);
    auto d = (embed_cos(f24, 1, 8) - embed_cos(f24, 1, 12)) * Rational(2);
    CHECK(d.sign() == -1);
    // Tiny but nonzero: forces the MPFR path.
    auto tiny = sqrt2 - AlgebraicNumber(f24, Rational(mpz_class("14142135623730950488016887242097"),
                                                            mpz_class("10000000000000000000000000000000")));
    CHECK(tiny.sign() == -1);  // the rational is just above sqrt2
}

TEST_CASE("field axioms on random triples") {
    std::mt19937_64 rng(5);
    for (int N : {4, 5, 8, 12, 20}) {
        auto f = make_field(N);
        for (int it = 0; it < 30; ++it) {
            auto a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            if (!a.is_zero()) {
                CHECK(a * a.inverse() == AlgebraicNumber(f, Rational(1)));
                CHECK(a.sign() * (-a).sign() == -1);
                CHECK((a * a).sign() == 1);
            }
        }
    }
}

TEST_CASE("canonical zero test agrees with a 200 digit evaluation") {
    std::mt19937_64 rng(11);
    auto f = make_field(24);
    mpfr_t v;
    mpfr_init2(v, 700);
    int zeros = 0;
    for (int it = 0; it < 1000; ++it) {
        auto a = random_element(f, rng);
        // Every fifth element is an exact zero built the long way.
        AlgebraicNumber x = (it % 5 == 0) ? a * a - a * a.embed_into(f) : a;
        mpfr_eval(x, v);
        bool tiny = mpfr_zero_p(v) || mpfr_get_exp(v) < -498;  // |v| < 1e-150
        CHECK(tiny == x.is_zero());
        zeros += x.is_zero();
    }
    CHECK(zeros == 200);
    mpfr_clear(v);
}

TEST_CASE("embedding between fields") {
    auto f4 = make_field(4), f12 = make_field(12);
    auto s = AlgebraicNumber::theta(f4);  // sqrt2
    auto t = s.embed_into(f12);
    CHECK(t * t == AlgebraicNumber(f12, Rational(2)));
    CHECK(t.sign() == 1);
    CHECK_THROWS_AS(s.embed_into(make_field(6)), DomainError);
}

TEST_CASE("parsing and JSON") {
    auto f = make_field(60);
    CHECK(parse_number(f, "0.3") == AlgebraicNumber(f, Rational(3, 10)));
    CHECK(parse_number(f, "-1.5e-2") == AlgebraicNumber(f, Rational(-3, 200)));
    auto h = parse_number(f, "sqrt2/2");
    CHECK(h * h == AlgebraicNumber(f, Rational(1, 2)));
    auto p = parse_number(f, "phi");
    CHECK(p * p == p + AlgebraicNumber(f, Rational(1)));
    CHECK(parse_number(f, "1 + sqrt5") == p * Rational(2));
    CHECK(parse_number(f, "-sqrt3/2") == -embed_cos(f, 1, 6));
    CHECK(field_requirement("0.3") == 1);
    CHECK(field_requirement("sqrt2/2 + phi") == 20);
    CHECK(field_requirement("cos(1/12)") == 12);
    CHECK_THROWS_AS(parse_number(f, "abc"), ParseError);
    auto x = p * h + AlgebraicNumber(f, Rational(-7, 3));
    auto j = to_json(x);
    CHECK(algebraic_from_json(j) == x);
    CHECK(j.dump() == to_json(algebraic_from_json(nlohmann::json::parse(j.dump()))).dump());
}

TEST_CASE("determinants and solves") {
    auto f = make_field(12);
    CHECK(det(FMatrix::identity(f, 3)) == AlgebraicNumber(f, Rational(1)));
    std::vector<FVector> units{{embed_cos(f, 1, 6), embed_sin(f, 1, 6), AlgebraicNumber(f)},
                               {AlgebraicNumber(f, Rational(1)), AlgebraicNumber(f), AlgebraicNumber(f)},
                               {embed_cos(f, 1, 4), AlgebraicNumber(f, Rational(1, 2)), AlgebraicNumber(f, Rational(1, 2))}};
    for (const auto& u : units) {
        auto m = FMatrix::reflection(u);
        CHECK(det(m) == AlgebraicNumber(f, Rational(-1)));
        CHECK((m * m).is_identity());
        CHECK((m.transpose() * m).is_identity());
    }
    // rotation by pi/3 in the I2(6) plane as a product of two reflections
    FVector a{AlgebraicNumber(f, Rational(1)), AlgebraicNumber(f)};
    FVector b{embed_cos(f, 1, 6), embed_sin(f, 1, 6)};
    auto rot = FMatrix::reflection(b) * FMatrix::reflection(a);
    CHECK(det(rot) == AlgebraicNumber(f, Rational(1)));
    auto x = solve(rot, b);
    CHECK(rot.apply(x) == b);
    CHECK((inverse(rot) * rot).is_identity());
    FMatrix sing(f, 2, 2);
    CHECK_THROWS_AS(solve(sing, a), SingularError);
    CHECK(rank(sing) == 0);
}
