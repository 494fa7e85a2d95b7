#include <doctest.h>

#include <random>
#include <set>

#include "pizza/pizza.hpp"

using namespace pizza;

namespace {

AlgebraicNumber q(const Field& f, long p, long d = 1) { return AlgebraicNumber(f, Rational(p, d)); }

FVector rvec(const Field& f, std::size_t n, std::mt19937_64& rng, long range, long den) {
    FVector v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(q(f, static_cast<long>(rng() % (2 * range + 1)) - range, den));
    return v;
}

FVector shift(const Arrangement& arr) { return zero_vector(arr.field(), arr.dim()); }

}  // namespace

TEST_CASE("A1: one-dimensional arithmetic") {
    Arrangement arr("A1");
    auto f = arr.field();
    auto k = box_body(f, 1, q(f, 1));
    auto r = pizza_sum(arr, k, {q(f, 3, 10)}, Valuation::Volume, Method{});
    // (1 + 0.3) - (1 - 0.3)
    CHECK(r.value == q(f, 13, 10) - q(f, 7, 10));
    CHECK(r.value == q(f, 6, 10));
}

TEST_CASE("A1^2 worked value and closed form") {
    Arrangement arr("A1^2");
    auto f = arr.field();
    FVector a{q(f, 2, 10), q(f, 1, 10)};
    auto r = pizza_sum(arr, box_body(f, 2, q(f, 1)), a, Valuation::Volume, Method{});
    CHECK(r.value == q(f, 8, 100));
    auto cf = a1n_closed_form(arr, a);
    CHECK(cf.value == q(f, 8, 100));
    CHECK(exact_volume(cf.region) == q(f, 8, 100));
    CHECK(euler_cs(cf.region) == 0);
    FVector a0{q(f, 0), q(f, 1, 10)};
    CHECK(a1n_closed_form(arr, a0).value.is_zero());
    CHECK(is_empty(a1n_closed_form(arr, a0).region));
    CHECK_THROWS_AS(a1n_closed_form(Arrangement("B2"), a), DomainError);
}

TEST_CASE("A1^n random instances against the factorised oracle") {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 3; ++n) {
        Arrangement arr("A1^" + std::to_string(n));
        auto f = arr.field();
        for (int it = 0; it < 10; ++it) {
            auto c = q(f, static_cast<long>(rng() % 5) + 1);
            FVector a = rvec(f, n, rng, 9, 10);
            // each factor is ((c + a_i) - (c - a_i))
            AlgebraicNumber oracle = q(f, 1);
            for (const auto& x : a) oracle *= (c + x) - (c - x);
            auto r = pizza_sum(arr, box_body(f, n, c), a, Valuation::Volume, Method{});
            CHECK(r.value == oracle);
            CHECK(a1n_closed_form(arr, a).value == oracle);
            CHECK(exact_volume(a1n_closed_form(arr, a).region) == abs(oracle));
        }
    }
    // monotonicity in the body size
    Arrangement arr("A1^2");
    auto f = arr.field();
    FVector a{q(f, 2, 10), q(f, -1, 10)};
    for (long c : {1, 2, 5}) CHECK(pizza_sum(arr, box_body(f, 2, q(f, c)), a, Valuation::Volume, Method{}).value == q(f, -8, 100));
}

TEST_CASE("orbit bodies") {
    Arrangement b2("B2");
    auto f = b2.field();
    FVector p{q(f, 2), q(f, 1, 2)};
    auto k = orbit_body(b2.group(), p);
    std::set<std::string> orbit, verts;
    for (const auto& g : b2.group().elements()) orbit.insert(vector_key(g.matrix.apply(p)));
    for (const auto& v : vertices(k.hrep)) verts.insert(vector_key(v));
    CHECK(orbit == verts);
    CHECK(is_w_stable(k, b2.group()));
    Arrangement i8("I2(8)");
    CHECK_FALSE(is_w_stable(box_body(i8.field(), 2, q(i8.field(), 1)), i8.group()));
    Arrangement b3("B3");
    FVector p3{q(b3.field(), 3), q(b3.field(), 2), q(b3.field(), 1)};
    auto k3 = orbit_body(b3.group(), p3);
    CHECK(vertices(k3.hrep).size() == 48);
    CHECK(is_w_stable(k3, b3.group()));
}

TEST_CASE("exact vanishing, small cases") {
    Arrangement b2("B2");
    auto f = b2.field();
    auto k = orbit_body(b2.group(), {q(f, 2), q(f, 1, 2)});
    FVector a{q(f, 3, 10), q(f, 1, 10)};
    auto r = pizza_sum(b2, k, a, Valuation::Volume, Method{});
    CHECK(r.value.is_zero());
    CHECK(r.terms.size() == 8);
    auto chi = pizza_sum(b2, k, a, Valuation::Chi, Method{});
    CHECK(chi.value.is_zero());
    // some terms are nonzero: the cancellation is not trivial
    int nonzero = 0;
    for (const auto& t : r.terms) nonzero += !t.value.is_zero();
    CHECK(nonzero == 8);
    Arrangement i8("I2(8)");
    auto g = i8.field();
    auto k8 = orbit_body(i8.group(), {q(g, 3), q(g, 1)});
    CHECK(pizza_sum(i8, k8, {q(g, 1, 5), q(g, 1, 10)}, Valuation::Volume, Method{}).value.is_zero());
}

TEST_CASE("serial and parallel kernels agree") {
    Arrangement b3("B3");
    auto f = b3.field();
    auto k = orbit_body(b3.group(), {q(f, 3), q(f, 2), q(f, 1)});
    HalfOpenRegion body = transform(k.hrep, FMatrix::identity(f, 3), {q(f, 1, 5), q(f, 1, 7), q(f, -1, 9)});
    auto s = exact_pizza_serial(b3, body, Valuation::Volume);
    auto p = exact_pizza_parallel(b3, body, Valuation::Volume);
    CHECK(s.total == p.total);
    CHECK(s.total.is_zero());
    for (std::size_t i = 0; i < s.terms.size(); ++i) CHECK(s.terms[i].value == p.terms[i].value);

    Arrangement i4("I2(4)");
    auto g = i4.field();
    McConfig cfg;
    cfg.samples = 200000;
    cfg.seed = 3;
    auto ball = ball_body(g, q(g, 1));
    FVector a{q(g, 2, 10), q(g, 1, 10)};
    auto m1 = mc_pizza_serial(i4, ball, a, cfg);
    auto m2 = mc_pizza_parallel(i4, ball, a, cfg);
    CHECK(m1.signed_hits == m2.signed_hits);
    CHECK(m1.estimate == m2.estimate);
}

TEST_CASE("hypotheses") {
    Arrangement b2("B2");
    auto f = b2.field();
    auto k = orbit_body(b2.group(), {q(f, 2), q(f, 1, 2)});
    CHECK_THROWS_AS(pizza_sum(b2, k, {q(f, 2), q(f, 1)}, Valuation::Volume, Method{}), HypothesisError);
    CHECK_THROWS_AS(pizza_sum(b2, ball_body(f, q(f, 1)), {q(f, 1), q(f, 1)}, Valuation::Volume, parse_method("mc:n=100")),
                    HypothesisError);
    CHECK_THROWS_AS(pizza_sum(b2, ball_body(f, q(f, 1)), {q(f, 0), q(f, 0)}, Valuation::Volume, Method{}), UnsupportedError);
    Arrangement a2("I2(3)");
    CHECK_THROWS_AS(pizza_sum(a2, ball_body(a2.field(), q(a2.field(), 1)), shift(a2), Valuation::Volume, parse_method("mc:n=10")),
                    HypothesisError);
    CHECK_THROWS_AS(parse_method("mc:n=abc"), ParseError);
    CHECK(parse_method("mc:n=1e7,seed=42").mc.samples == 10000000);
    CHECK_THROWS_AS(parse_body("disc:1", b2), ParseError);
    CHECK(parse_body("box:c=1", b2).kind == Body::Kind::Box);
    CHECK(body_field_requirement("orbit:p=sqrt3,1") == 6);
}

TEST_CASE("Monte Carlo ball pizza") {
    Arrangement a11("A1^2");
    auto f = a11.field();
    FVector a{q(f, 2, 10), q(f, 1, 10)};
    McConfig cfg;
    cfg.samples = 1000000;
    auto m = mc_pizza_parallel(a11, ball_body(f, q(f, 1)), a, cfg);
    CHECK(std::fabs(m.estimate - 0.08) <= 4 * m.se);
    for (int mm : {2, 3, 4}) {
        Arrangement arr("I2(" + std::to_string(2 * mm) + ")");
        auto g = arr.field();
        auto r = mc_pizza_parallel(arr, ball_body(g, q(g, 1)), {q(g, 2, 10), q(g, 1, 10)}, cfg);
        CHECK(std::fabs(r.estimate) <= 4 * r.se);
    }
    // SE(n) / SE(4n) close to 2 on repeated seeds
    Arrangement i4("I2(4)");
    auto g = i4.field();
    for (std::uint64_t seed : {1, 2, 3}) {
        McConfig c1, c4;
        c1.samples = 100000;
        c4.samples = 400000;
        c1.seed = c4.seed = seed;
        double ratio = mc_pizza_serial(i4, ball_body(g, q(g, 1)), {q(g, 2, 10), q(g, 1, 10)}, c1).se /
                       mc_pizza_serial(i4, ball_body(g, q(g, 1)), {q(g, 2, 10), q(g, 1, 10)}, c4).se;
        CHECK(ratio > 2 / 1.5);
        CHECK(ratio < 2 * 1.5);
    }
    CHECK(ball_volume(3, 1) == doctest::Approx(4.18879020478639));
}

TEST_CASE("expansion identity pointwise") {
    std::mt19937_64 rng(11);
    for (const char* t : {"B2", "B3", "I2(6)", "I2(8)", "D4", "A1^3", "B2xA1"}) {
        CAPTURE(t);
        Arrangement arr(t);
        const auto& ts = arr.two_structures();
        int checked = 0;
        while (checked < 100) {
            FVector x = rvec(arr.field(), arr.dim(), rng, 1000, 997);
            try {
                auto c = expansion_check_pointwise(arr, ts, x);
                REQUIRE(c.ok());
                ++checked;
            } catch (const DomainError&) {
            }
        }
    }
    // a flipped sign breaks the identity somewhere
    Arrangement b3("B3");
    auto bad = b3.two_structures();
    bad[1].epsilon = -bad[1].epsilon;
    bool caught = false;
    for (int it = 0; it < 200 && !caught; ++it) {
        FVector x = rvec(b3.field(), 3, rng, 1000, 997);
        try {
            caught = !expansion_check_pointwise(b3, bad, x).ok();
        } catch (const DomainError&) {
        }
    }
    CHECK(caught);
    CHECK_THROWS_AS(expansion_check_pointwise(b3, b3.two_structures(), zero_vector(b3.field(), 3)), DomainError);
}

TEST_CASE("expansion identity under valuations, non-symmetric bodies") {
    std::mt19937_64 rng(12);
    int detected = 0, corrupted = 0, checked = 0;
    for (const char* t : {"B2", "B3", "I2(6)"}) {
        CAPTURE(t);
        Arrangement arr(t);
        auto f = arr.field();
        const auto& ts = arr.two_structures();
        for (int it = 0; it < 3; ++it) {
            // random simplex around a random centre
            std::vector<FVector> pts;
            FVector centre = rvec(f, arr.dim(), rng, 5, 10);
            HalfOpenRegion k(f, arr.dim());
            std::vector<FVector> normals;
            for (std::size_t i = 0; i < arr.dim(); ++i) normals.push_back(rvec(f, arr.dim(), rng, 5, 1));
            FVector s = zero_vector(f, arr.dim());
            for (const auto& n : normals) s = add(s, n);
            normals.push_back(negate(s));
            bool degenerate = false;
            for (const auto& n : normals) degenerate = degenerate || is_zero(n);
            if (degenerate || rank_of(normals) < arr.dim()) continue;
            for (const auto& n : normals) k.add(n, dot(n, centre) - q(f, static_cast<long>(rng() % 5) + 1), false);
            for (Valuation v : {Valuation::Volume, Valuation::Chi}) {
                auto c = expansion_check_valuation(arr, ts, k, v);
                CHECK(c.ok());
                ++checked;
            }
            auto corrupt = ts;
            if (corrupt.size() > 1) {
                corrupt.back().epsilon *= -1;
                detected += !expansion_check_valuation(arr, corrupt, k, Valuation::Volume).ok();
                ++corrupted;
            }
        }
    }
    CHECK(checked >= 12);
    // a wrong sign is visible on most simplices
    CHECK(corrupted > 0);
    CHECK(detected * 2 > corrupted);
}

TEST_CASE("f-polynomial") {
    Arrangement a11("A1^2");
    auto f = a11.field();
    auto p = f_polynomial(a11, a11.two_structures());
    Polynomial expect(f, 2);
    expect += Polynomial::linear({q(f, 1), q(f, 0)}) * Polynomial::linear({q(f, 0), q(f, 1)}) * q(f, 4);
    CHECK(p == expect);
    CHECK(p.evaluate({q(f, 2, 10), q(f, 1, 10)}) == q(f, 8, 100));

    Arrangement d4("D4");
    auto fd = f_polynomial(d4, d4.two_structures());
    CHECK(fd.is_zero());
    // each summand alone is a nonzero quartic
    auto one = d4.two_structures();
    one.resize(1);
    auto single = f_polynomial(d4, one);
    CHECK_FALSE(single.is_zero());
    CHECK(single.homogeneous(4));
    CHECK_THROWS_AS(f_polynomial(Arrangement("B3"), Arrangement("B3").two_structures()), DomainError);

    for (const char* t : {"A1^2", "A1^3", "D4"}) {
        Arrangement arr(t);
        const auto& ts = arr.two_structures();
        std::vector<TwoStructure> first(ts.begin(), ts.begin() + 1);
        auto g = f_polynomial(arr, first);
        auto full = f_polynomial(arr, ts);
        for (const auto& w : arr.group().elements()) {
            CHECK(full.compose(w.matrix) == full * q(arr.field(), w.det));
            if (ts.size() == 1) CHECK(g.compose(w.matrix) == g * q(arr.field(), w.det));
        }
    }
}

TEST_CASE("crust") {
    Arrangement b2("B2");
    auto f = b2.field();
    auto inner = orbit_body(b2.group(), {q(f, 1), q(f, 1, 4)});
    auto outer = orbit_body(b2.group(), {q(f, 3), q(f, 1)});
    FVector a{q(f, 3, 10), q(f, 1, 10)};
    CHECK(crust_exact(b2, inner.hrep, outer.hrep, a, Valuation::Volume).is_zero());
    Arrangement a11("A1^2");
    auto g = a11.field();
    auto in = box_body(g, 2, q(g, 1)), out = box_body(g, 2, q(g, 3));
    FVector b{q(g, 2, 10), q(g, 1, 10)};
    CHECK(crust_exact(a11, in.hrep, out.hrep, b, Valuation::Volume).is_zero());

    Arrangement i4("I2(4)");
    auto h = i4.field();
    McConfig cfg;
    cfg.samples = 400000;
    FVector c{q(h, 2, 10), q(h, 1, 10)};
    auto ann = mc_pizza_parallel(i4, annulus_body(h, q(h, 1), q(h, 2)), c, cfg);
    auto big = mc_pizza_parallel(i4, ball_body(h, q(h, 2)), c, cfg);
    auto small = mc_pizza_parallel(i4, ball_body(h, q(h, 1)), c, cfg);
    double se = std::sqrt(ann.se * ann.se + big.se * big.se + small.se * small.se);
    CHECK(std::fabs(ann.estimate - (big.estimate - small.estimate)) <= 4 * se);
    CHECK(std::fabs(ann.estimate) <= 4 * ann.se);
}

TEST_CASE("perimeter pizza in the plane") {
    Arrangement i4("I2(4)");
    auto f = i4.field();
    auto k = orbit_body(i4.group(), {q(f, 2), q(f, 1, 2)});
    HalfOpenRegion body = transform(k.hrep, FMatrix::identity(f, 2), {q(f, 3, 10), q(f, 1, 10)});
    CHECK(intrinsic1_pizza_2d(i4, body).is_zero());
    CHECK(intrinsic1_pizza_2d(i4, body, true).is_zero());
    // the closed-chamber terms themselves do not vanish
    auto first = intrinsic_vector_2d(intersect(i4.chambers()[0].closed, body)).v1;
    CHECK_FALSE(first.is_zero());
}
