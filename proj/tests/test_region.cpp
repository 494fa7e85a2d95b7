#include <doctest.h>

#include <random>

#include "pizza/region.hpp"

using namespace pizza;

namespace {

AlgebraicNumber q(const Field& f, long p, long d = 1) { return AlgebraicNumber(f, Rational(p, d)); }

FVector v2(const Field& f, Rational x, Rational y) { return {AlgebraicNumber(f, x), AlgebraicNumber(f, y)}; }

// Shoelace on vertices sorted by angle around their centroid (double sort key, exact sum).
AlgebraicNumber shoelace(std::vector<FVector> pts) {
    double cx = 0, cy = 0;
    for (auto& p : pts) {
        cx += p[0].to_double();
        cy += p[1].to_double();
    }
    cx /= pts.size();
    cy /= pts.size();
    std::sort(pts.begin(), pts.end(), [&](const FVector& a, const FVector& b) {
        return std::atan2(a[1].to_double() - cy, a[0].to_double() - cx) <
               std::atan2(b[1].to_double() - cy, b[0].to_double() - cx);
    });
    AlgebraicNumber s(pts[0][0].field());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % pts.size()];
        s += a[0] * b[1] - a[1] * b[0];
    }
    return s * Rational(1, 2);
}

HalfOpenRegion hull_by_orbit(const Field& f, const std::vector<FVector>& pts) {
    // H-rep of a centrally symmetric convex polygon from its cyclically sorted vertices.
    HalfOpenRegion r(f, 2);
    std::vector<FVector> s = pts;
    std::sort(s.begin(), s.end(), [](const FVector& a, const FVector& b) {
        return std::atan2(a[1].to_double(), a[0].to_double()) < std::atan2(b[1].to_double(), b[0].to_double());
    });
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& a = s[i];
        const auto& b = s[(i + 1) % s.size()];
        FVector nrm{a[1] - b[1], b[0] - a[0]};  // inward for counterclockwise order
        r.add(nrm, dot(nrm, a), false);
    }
    return r;
}

}  // namespace

TEST_CASE("emptiness with strict flags") {
    auto f = make_field(1);
    HalfOpenRegion a(f, 1);
    a.add({q(f, 1)}, q(f, 0), true).add({q(f, -1)}, q(f, 0), false);
    CHECK(is_empty(a));
    HalfOpenRegion b(f, 1);
    b.add({q(f, 1)}, q(f, 0), false).add({q(f, -1)}, q(f, 0), false);
    CHECK_FALSE(is_empty(b));
    CHECK(euler_cs(b) == 1);
    CHECK(euler_cs(a) == 0);
}

TEST_CASE("vertices and volumes of simple polytopes") {
    auto f = make_field(1);
    auto sq = box_region(f, {q(f, 0), q(f, 0)}, {q(f, 1), q(f, 1)}, false, false);
    CHECK(vertices(sq).size() == 4);
    CHECK(exact_volume(sq) == q(f, 1));
    HalfOpenRegion simplex(f, 2);
    simplex.add(v2(f, 1, 0), q(f, 0), false).add(v2(f, 0, 1), q(f, 0), false).add(v2(f, -1, -1), q(f, -1), false);
    CHECK(exact_volume(simplex) == q(f, 1, 2));
    auto hb = box_region(f, {q(f, 0), q(f, 0)}, {q(f, 2, 5), q(f, 1, 5)}, true, false);
    CHECK(exact_volume(hb) == q(f, 8, 100));
    HalfOpenRegion cone(f, 2);
    cone.add(v2(f, 1, 0), q(f, 0), true).add(v2(f, 0, 1), q(f, 0), true);
    CHECK_THROWS_AS(vertices(cone), UnboundedError);
    CHECK(vertices(cone, false).size() == 1);
    CHECK_FALSE(is_bounded(cone));
    // 4-cube and cross-polytope
    FVector lo(4, q(f, -1)), hi(4, q(f, 1));
    CHECK(exact_volume(box_region(f, lo, hi, false, false)) == q(f, 16));
    HalfOpenRegion cross(f, 4);
    for (int s = 0; s < 16; ++s) {
        FVector nrm;
        for (int k = 0; k < 4; ++k) nrm.push_back(q(f, (s >> k) & 1 ? -1 : 1));
        cross.add(nrm, q(f, -1), false);
    }
    CHECK(vertices(cross).size() == 8);
    CHECK(exact_volume(cross) == q(f, 16, 24));
}

TEST_CASE("octagon from a generic B2 orbit against a shoelace oracle") {
    auto f = make_field(8);
    // regular octagon: orbit of (cos pi/8, sin pi/8)
    std::vector<FVector> pts;
    for (int k = 0; k < 8; ++k) pts.push_back({embed_cos(f, 2 * k + 1, 8), embed_sin(f, 2 * k + 1, 8)});
    auto oct = hull_by_orbit(f, pts);
    auto vs = vertices(oct);
    CHECK(vs.size() == 8);
    auto area = exact_volume(oct);
    CHECK(area == shoelace(vs));
    CHECK(area == embed_cos(f, 1, 4) * Rational(4));  // 2 sqrt2
    // non-regular orbit of (2, 1/2) under W(B2) in the field with sqrt2
    std::vector<FVector> pts2;
    for (int sx : {1, -1})
        for (int sy : {1, -1}) {
            pts2.push_back(v2(f, 2 * sx, Rational(sy, 2)));
            pts2.push_back(v2(f, Rational(sx, 2), 2 * sy));
        }
    auto oct2 = hull_by_orbit(f, pts2);
    CHECK(vertices(oct2).size() == 8);
    CHECK(exact_volume(oct2) == shoelace(vertices(oct2)));
}

TEST_CASE("euler characteristic with compact support") {
    auto f = make_field(1);
    for (std::size_t n = 1; n <= 3; ++n) {
        FVector lo(n, q(f, 0)), hi(n, q(f, 1));
        CHECK(euler_cs(box_region(f, lo, hi, true, false)) == 0);
        CHECK(euler_cs(box_region(f, lo, hi, false, false)) == 1);
        CHECK(euler_cs(box_region(f, lo, hi, true, true)) == (n % 2 ? -1 : 1));
    }
}

TEST_CASE("intrinsic vectors") {
    auto f = make_field(4);
    auto closed = box_region(f, {q(f, 0), q(f, 0)}, {q(f, 1), q(f, 6)}, false, false);
    auto iv = intrinsic_vector_2d(closed);
    CHECK(iv.chi == 1);
    CHECK((iv.v1 - SurdSum::of(q(f, 7))).symbolically_zero());
    CHECK(iv.v2 == q(f, 6));
    auto half = box_region(f, {q(f, 0), q(f, 0)}, {q(f, 1), q(f, 6)}, true, false);
    auto ih = intrinsic_vector_2d(half);
    CHECK(ih.chi == 0);
    CHECK(ih.v1.symbolically_zero());
    CHECK(ih.v2 == q(f, 6));
    auto bv = box_intrinsic_vector(f, {q(f, 1), q(f, 6)}, false, 2);
    CHECK(bv.chi == 1);
    CHECK(bv.intrinsic[0] == q(f, 7));
    CHECK(bv.intrinsic[1] == q(f, 6));
    auto bh = box_intrinsic_vector(f, {q(f, 1), q(f, 6)}, true, 2);
    CHECK(bh.chi == 0);
    CHECK(bh.intrinsic[0].is_zero());
    // triangle with a diagonal edge: V1 = (2 + sqrt2)/2
    HalfOpenRegion tri(f, 2);
    tri.add(v2(f, 1, 0), q(f, 0), false).add(v2(f, 0, 1), q(f, 0), false).add(v2(f, -1, -1), q(f, -1), false);
    auto it = intrinsic_vector_2d(tri);
    CHECK(std::abs(it.v1.to_double() - (2 + std::sqrt(2.0)) / 2) < 1e-12);
}

TEST_CASE("transforms preserve volume and chi") {
    auto f = make_field(12);
    std::mt19937_64 rng(3);
    auto hb = box_region(f, {q(f, 0), q(f, 0)}, {q(f, 2), q(f, 1)}, true, false);
    for (int k = 0; k < 12; ++k) {
        FMatrix rot(f, 2, 2);
        rot(0, 0) = embed_cos(f, k, 6);
        rot(0, 1) = -embed_sin(f, k, 6);
        rot(1, 0) = embed_sin(f, k, 6);
        rot(1, 1) = embed_cos(f, k, 6);
        FVector t = v2(f, Rational(static_cast<long>(rng() % 100), 7), Rational(-3, 11));
        auto img = transform(hb, rot, t);
        CHECK(exact_volume(img) == q(f, 2));
        CHECK(euler_cs(img) == 0);
        CHECK(img.contains(add(rot.apply(v2(f, 1, 1)), t)));
        CHECK_FALSE(img.contains(add(rot.apply(v2(f, 0, 1)), t)));
    }
}

TEST_CASE("cell unions") {
    auto f = make_field(1);
    auto big = box_region(f, {q(f, 0), q(f, 0)}, {q(f, 3), q(f, 3)}, false, false);
    auto small = box_region(f, {q(f, 1), q(f, 1)}, {q(f, 2), q(f, 2)}, true, false);
    auto diff = subtract(big, small);
    CHECK(exact_volume(diff) == q(f, 8));
    CHECK(euler_cs(diff) + euler_cs(small) == euler_cs(big));
    CellUnion u = diff;
    u.add_disjoint(small);
    CHECK(set_equal(u, CellUnion(big)));
    CHECK(disjoint(diff, CellUnion(small)));
    CHECK_FALSE(set_equal(diff, CellUnion(big)));
}

TEST_CASE("valuation additivity on random boxes") {
    auto f = make_field(1);
    std::mt19937_64 rng(17);
    for (int it = 0; it < 30; ++it) {
        Rational a(static_cast<long>(rng() % 10)), b(static_cast<long>(rng() % 10 + 10));
        Rational c(static_cast<long>(rng() % 6 + 5)), d(static_cast<long>(rng() % 10 + 20));
        // [a,b] and [c,d] overlap (or touch), union is an interval
        auto A = box_region(f, {AlgebraicNumber(f, a), q(f, 0)}, {AlgebraicNumber(f, b), q(f, 1)}, false, false);
        auto B = box_region(f, {AlgebraicNumber(f, c), q(f, 0)}, {AlgebraicNumber(f, d), q(f, 1)}, false, false);
        auto U = box_region(f, {AlgebraicNumber(f, std::min(a, c)), q(f, 0)}, {AlgebraicNumber(f, d), q(f, 1)}, false, false);
        auto I = intersect(A, B);
        CHECK(exact_volume(U) + exact_volume(I) == exact_volume(A) + exact_volume(B));
        CHECK(euler_cs(U) + euler_cs(I) == euler_cs(A) + euler_cs(B));
    }
}
