#include <doctest.h>

#include <random>
#include <set>

#include "pizza/bolyai.hpp"
#include "pizza/pizza.hpp"
#include "oracles.hpp"

using namespace pizza;
using namespace oracle;

namespace {

AlgebraicNumber q(const Field& f, long p, long d = 1) { return AlgebraicNumber(f, Rational(p, d)); }
FVector pt(const Field& f, long x, long y, long d = 1) { return {q(f, x, d), q(f, y, d)}; }

void check_ok(const BgCertificate& c) {
    BgVerdict v = verify_bg(c);
    for (const auto& s : v.failures) MESSAGE(s);
    CHECK(v.ok);
}

}  // namespace

TEST_CASE("retile 8x3 to 6x4 with three translated pieces") {
    Field f = make_field(1);
    BgCertificate c = rectangle_retile(q(f, 8), q(f, 3), q(f, 6));
    CHECK(c.pieces.size() == 3);
    CHECK(c.translation_only);
    CHECK(c.moved() == 2);
    check_ok(c);
    CHECK(verify_bg(c).target_area == q(f, 24));
    // the inverse direction also verifies
    check_ok(invert(c));
    check_ok(rectangle_retile(q(f, 6), q(f, 4), q(f, 8)));
}

TEST_CASE("retile edge cases") {
    Field f = make_field(1);
    BgCertificate id = rectangle_retile(q(f, 5), q(f, 2), q(f, 5));
    CHECK(id.moved() == 0);
    check_ok(id);
    BgCertificate thin = rectangle_retile(q(f, 9), q(f, 1), q(f, 3));
    check_ok(thin);
    BgCertificate exact_half = rectangle_retile(q(f, 8), q(f, 1), q(f, 4));
    check_ok(exact_half);
    CHECK(exact_half.pieces.size() == 2);
    BgCertificate far = rectangle_retile(q(f, 100), q(f, 1, 3), q(f, 7, 5));
    check_ok(far);
    CHECK(far.translation_only);
    CHECK_THROWS_AS(rectangle_retile(q(f, 0), q(f, 1), q(f, 1)), DomainError);
}

TEST_CASE("parallelogram to rectangle") {
    Field f = make_field(1);
    Parallelotope p = make_parallelotope(pt(f, 0, 0), {pt(f, 6, 0), pt(f, 7, 30, 10)});
    BgCertificate c = parallelogram_to_rectangle(p);
    CHECK(c.pieces.size() == 2);
    check_ok(c);
    CHECK(verify_bg(c).source_area == q(f, 18));
    std::set<std::string> want;
    for (const auto& v : rectangle_vertices(f, q(f, 6), q(f, 3), q(f, 0), q(f, 0))) want.insert(vector_key(v));
    std::set<std::string> got;
    for (const auto& v : c.target) got.insert(vector_key(v));
    CHECK(got == want);

    // a long shear needs several strips
    Parallelotope lean = make_parallelotope(pt(f, 1, 1), {pt(f, 2, 0), pt(f, 9, 1)});
    BgCertificate l = parallelogram_to_rectangle(lean);
    CHECK(l.pieces.size() >= 5);
    check_ok(l);
    // and a negative one
    check_ok(parallelogram_to_rectangle(make_parallelotope(pt(f, 0, 0), {pt(f, 2, 0), pt(f, -7, 2)})));
}

TEST_CASE("shear in a quadratic field") {
    Field f = make_field(8);  // contains sqrt2
    FVector e{parse_number(f, "sqrt2"), parse_number(f, "sqrt2")};
    FVector g{parse_number(f, "-3*sqrt2"), parse_number(f, "2")};
    BgCertificate c = parallelogram_to_rectangle(make_parallelotope(pt(f, 0, 0), {e, g}));
    check_ok(c);
}

TEST_CASE("convex polygons to a unit-width rectangle") {
    Field f = make_field(1);
    BgCertificate tri = polygon_to_rectangle({pt(f, 0, 0), pt(f, 1, 0), pt(f, 0, 1)}, q(f, 1));
    check_ok(tri);
    CHECK_FALSE(tri.translation_only);
    CHECK(verify_bg(tri).target_area == q(f, 1, 2));

    std::vector<FVector> oct{pt(f, 1, 0), pt(f, 2, 0), pt(f, 3, 1), pt(f, 3, 2), pt(f, 2, 3), pt(f, 1, 3), pt(f, 0, 2), pt(f, 0, 1)};
    BgCertificate o = polygon_to_rectangle(oct, q(f, 1));
    check_ok(o);
    CHECK(verify_bg(o).target_area == q(f, 7));

    // a skew triangle with no horizontal edge, width 3/2
    BgCertificate s = polygon_to_rectangle({pt(f, 0, 0), pt(f, 5, 2), pt(f, -1, 4)}, q(f, 3, 2));
    check_ok(s);

    CHECK_THROWS_AS(polygon_to_rectangle({pt(f, 0, 0), pt(f, 1, 0), pt(f, 2, 0), pt(f, 0, 1)}, q(f, 1)), DomainError);
}

TEST_CASE("regular octagon in its own field") {
    Field f = make_field(8);
    AlgebraicNumber c = parse_number(f, "sqrt2/2");
    AlgebraicNumber one = q(f, 1), zero = q(f, 0);
    std::vector<FVector> oct{{one, zero}, {c, c}, {zero, one}, {-c, c}, {-one, zero}, {-c, -c}, {zero, -one}, {c, -c}};
    BgCertificate o = polygon_to_rectangle(oct, one);
    check_ok(o);
    CHECK(verify_bg(o).target_area == parse_number(f, "2*sqrt2"));
}

TEST_CASE("tampered certificates are rejected") {
    Field f = make_field(1);
    BgCertificate c = rectangle_retile(q(f, 8), q(f, 3), q(f, 6));

    BgCertificate moved = c;
    moved.pieces[1].g = affine_map(FMatrix::identity(f, 2), add(moved.pieces[1].g.translation, pt(f, 1, 0)));
    CHECK_FALSE(verify_bg(moved).ok);

    BgCertificate dropped = c;
    dropped.pieces.pop_back();
    CHECK_FALSE(verify_bg(dropped).ok);

    BgCertificate doubled = c;
    doubled.pieces.push_back(doubled.pieces[0]);
    CHECK_FALSE(verify_bg(doubled).ok);

    BgCertificate rotated = c;
    FMatrix r(f, 2, 2);
    r(0, 1) = q(f, -1);
    r(1, 0) = q(f, 1);
    rotated.pieces[0].g = affine_map(r, zero_vector(f, 2));
    CHECK_FALSE(verify_bg(rotated).ok);

    BgCertificate stretched = c;
    FMatrix s = FMatrix::identity(f, 2);
    s(0, 0) = q(f, 2);
    stretched.translation_only = false;
    stretched.pieces[0].g = affine_map(s, zero_vector(f, 2));
    CHECK_FALSE(verify_bg(stretched).ok);
}

TEST_CASE("certificate JSON round trip") {
    Field f = make_field(1);
    BgCertificate c = polygon_to_rectangle({pt(f, 0, 0), pt(f, 4, 1), pt(f, 1, 3)}, q(f, 2));
    BgCertificate back = BgCertificate::from_json(nlohmann::json::parse(c.to_json().dump()));
    CHECK(back.to_json() == c.to_json());
    check_ok(back);
}

TEST_CASE("normal form") {
    Field f = make_field(1);
    Parallelotope p = make_parallelotope(pt(f, 3, 4), {pt(f, 2, 1), pt(f, -1, 3)}, true);
    NormalForm nf = parallelotope_normal_form(p);
    CHECK(nf.volume == q(f, 7));
    CHECK(nf.box.half_open);
    CHECK(nf.box.edges[1][1] == q(f, 7));
    CHECK(exact_volume(nf.box.region()) == exact_volume(p.region()));
    CHECK_THROWS_AS(make_parallelotope(pt(f, 0, 0), {pt(f, 1, 1), pt(f, 2, 2)}), DomainError);
    CHECK_THROWS_AS(parallelotope_normal_form(make_parallelotope(pt(f, 0, 0), {pt(f, 1, 1)})), DomainError);
}

TEST_CASE("kz vector against the intrinsic vector in the plane") {
    Field f = make_field(1);
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> d(-5, 5);
    for (int t = 0; t < 20; ++t) {
        FVector e1 = pt(f, d(rng), d(rng)), e2 = pt(f, d(rng), d(rng));
        if (orient_2d(zero_vector(f, 2), e1, e2).is_zero()) continue;
        for (bool ho : {false, true}) {
            Parallelotope p = make_parallelotope(pt(f, d(rng), d(rng)), {e1, e2}, ho);
            KZVector k = kz_vector({{1, p}}, f, 2);
            IntrinsicVector2D iv = intrinsic_vector_2d(p.region());
            CHECK(k.chi == iv.chi);
            CHECK((k.v[0] - iv.v1).is_zero());
            CHECK((k.v[1] - SurdSum::of(iv.v2)).is_zero());
        }
    }
}

TEST_CASE("kz equality examples") {
    Field f = make_field(1);
    auto box = [&](long w, long h, bool ho) { return make_parallelotope(pt(f, 0, 0), {pt(f, w, 0), pt(f, 0, h)}, ho); };
    CHECK(kz_equal(kz_vector({{1, box(1, 6, true)}}, f, 2), kz_vector({{1, box(2, 3, true)}}, f, 2)));
    // closed boxes: perimeters 14 and 10 differ
    CHECK_FALSE(kz_equal(kz_vector({{1, box(1, 6, false)}}, f, 2), kz_vector({{1, box(2, 3, false)}}, f, 2)));
    KZVector empty = kz_vector({}, f, 2);
    KZVector cancel = kz_vector({{1, make_parallelotope(pt(f, 1, 1), {})}, {-1, make_parallelotope(pt(f, 4, 0), {})}}, f, 2);
    CHECK(kz_equal(empty, cancel));
    // a diagonal segment of length 5 against a horizontal one
    CHECK(kz_equal(kz_vector({{1, make_parallelotope(pt(f, 0, 0), {pt(f, 3, 4)}, true)}}, f, 2),
                   kz_vector({{1, make_parallelotope(pt(f, 0, 0), {pt(f, 5, 0)}, true)}}, f, 2)));
}

TEST_CASE("kz equality matches unit-cell dissection on integer boxes") {
    Field f = make_field(1);
    std::mt19937 rng(2024);
    int equal = 0;
    for (int t = 0; t < 20; ++t) {
        auto [a, b] = random_box_pair(rng, t % 2 == 1);
        bool brute = cell_counts(a) == cell_counts(b);
        bool kz = kz_equal(kz_vector(as_items(f, a), f, 2), kz_vector(as_items(f, b), f, 2));
        CHECK(brute == kz);
        equal += brute;
    }
    CHECK(equal >= 8);
    CHECK(equal <= 16);
}

TEST_CASE("kernel law: zero top volume iff zero normal form total") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<long> d(-4, 4), coin(0, 1);
    int zero = 0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + t % 2;
        Field f = make_field(1);
        auto rv = [&] {
            FVector v;
            for (std::size_t i = 0; i < n; ++i) v.push_back(q(f, d(rng), 1 + coin(rng)));
            return v;
        };
        auto full = [&] {
            for (;;) {
                std::vector<FVector> e;
                for (std::size_t i = 0; i < n; ++i) e.push_back(rv());
                if (rank_of(e) == n) return make_parallelotope(rv(), e, true);
            }
        };
        std::vector<SignedParallelotope> items;
        for (int i = 0; i < 3; ++i) items.emplace_back(coin(rng) ? 1 : -1, full());
        if (t % 2 == 0) {
            // cancel the volume by the normal forms, then add flat noise of lower rank
            AlgebraicNumber tot = normal_form_total(items, f, n);
            if (!tot.is_zero()) {
                std::vector<FVector> e;
                for (std::size_t i = 0; i + 1 < n; ++i) e.push_back(unit_vector(f, n, i));
                e.push_back(scale(unit_vector(f, n, n - 1), abs(tot)));
                items.emplace_back(tot.sign() > 0 ? -1 : 1, make_parallelotope(rv(), e, true));
            }
            items.emplace_back(1, make_parallelotope(rv(), {unit_vector(f, n, 0)}, true));
        }
        KZVector k = kz_vector(items, f, n);
        bool top_zero = k.v[n - 1].is_zero();
        CHECK(top_zero == normal_form_total(items, f, n).is_zero());
        CHECK(top_zero == (t % 2 == 0));
        zero += top_zero;
    }
    CHECK(zero == 25);
}

TEST_CASE("A1^n residue and D4 cancellation") {
    Field f = make_field(1);
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<FVector> e;
        AlgebraicNumber prod = q(f, 1);
        for (std::size_t i = 0; i < n; ++i) {
            AlgebraicNumber ai = q(f, static_cast<long>(i) + 2, 10);
            e.push_back(scale(unit_vector(f, n, i), ai * Rational(2)));
            prod *= ai * Rational(2);
        }
        KZVector k = kz_vector({{1, make_parallelotope(zero_vector(f, n), e, true)}}, f, n);
        CHECK(k.chi == 0);
        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(k.v[i].is_zero());
        CHECK((k.v[n - 1] - SurdSum::of(prod)).is_zero());
    }

    Arrangement arr("D4");
    const Field& g = arr.field();
    const auto& ts = arr.two_structures();
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> d(1, 97);
    for (int t = 0; t < 3; ++t) {
        FVector a;
        for (int i = 0; i < 4; ++i) a.push_back(q(g, d(rng), 100));
        std::vector<SignedParallelotope> items;
        for (const auto& phi : ts) {
            // (0, x] with x < 0 counts as -(x, 0]
            int sign = phi.epsilon;
            FVector base = zero_vector(g, 4);
            std::vector<FVector> edges;
            for (auto i : phi.positive_indices()) {
                const FVector& e = arr.system().roots[i];
                AlgebraicNumber x = dot(a, e) * Rational(2);
                REQUIRE_FALSE(x.is_zero());
                if (x.sign() < 0) {
                    sign = -sign;
                    base = add(base, scale(e, x));
                    x = -x;
                }
                edges.push_back(scale(e, x));
            }
            items.emplace_back(sign, make_parallelotope(base, edges, true));
        }
        KZVector k = kz_vector(items, g, 4);
        CHECK(k.chi == 0);
        for (const auto& v : k.v) CHECK(v.is_zero());
        CHECK(normal_form_total(items, g, 4).is_zero());
    }
}
