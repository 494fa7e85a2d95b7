#include <doctest.h>

#include <map>
#include <random>

#include "pizza/dihedral.hpp"

using namespace pizza;

namespace {

AlgebraicNumber q(const Field& f, long p, long d = 1) { return AlgebraicNumber(f, Rational(p, d)); }

struct Setup {
    Field f;
    DihedralFrame fr;
    FVector a;
    Setup(int m, long ax, long ay, long den) : f(dihedral_field(m)), fr(m, f), a{q(f, ax, den), q(f, ay, den)} {}
};

// strictly inside triangle or on its closed edges, by orientations only
bool in_triangle(const FVector& p, const FVector& x, const FVector& y, const FVector& z) {
    int s1 = orient_2d(x, y, p).sign(), s2 = orient_2d(y, z, p).sign(), s3 = orient_2d(z, x, p).sign();
    bool has_neg = s1 < 0 || s2 < 0 || s3 < 0, has_pos = s1 > 0 || s2 > 0 || s3 > 0;
    return !(has_neg && has_pos);
}

// extreme points of a finite set, brute force over triangles and segments
std::size_t extreme_count(const std::vector<FVector>& pts) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool inside = false;
        for (std::size_t j = 0; j < pts.size() && !inside; ++j)
            for (std::size_t k = j + 1; k < pts.size() && !inside; ++k)
                for (std::size_t l = k + 1; l < pts.size() && !inside; ++l) {
                    if (i == j || i == k || i == l) continue;
                    if (orient_2d(pts[j], pts[k], pts[l]).is_zero()) continue;
                    inside = in_triangle(pts[i], pts[j], pts[k], pts[l]);
                }
        if (!inside) ++count;
    }
    return count;
}

std::size_t pairings_using(const DissectionCertificate& c, const std::string& id) {
    std::size_t n = 0;
    for (const auto& p : c.pairings) n += (p.src == id) + (p.dst == id);
    return n;
}

}  // namespace

TEST_CASE("frame: sectors, signs and the group") {
    Setup s(4, 3, 2, 10);
    CHECK(s.fr.sectors() == 16);
    CHECK(s.fr.group().size() == 16);
    // u(i + 2m) = -u(i)
    for (int i = 0; i < 8; ++i) CHECK(s.fr.u(i + 8) == negate(s.fr.u(i)));
    // each sector contains the bisector of its walls
    for (int c = 0; c < 16; ++c) {
        FVector mid = add(s.fr.u(c), s.fr.u(c + 1));
        CHECK(s.fr.sector(c).contains(mid));
        CHECK(s.fr.sector_of(mid) == c);
        CHECK(s.fr.sign(c) == (c % 2 == 0 ? 1 : -1));
    }
    CHECK(s.fr.sector_of(s.fr.u(3)) == -1);
    // rotation by pi/2m moves sector c to c+1, a reflection swaps the sign
    for (int c = 0; c < 16; ++c) {
        FVector mid = add(s.fr.u(c), s.fr.u(c + 1));
        CHECK(s.fr.sector_of(s.fr.rotation(1).apply(mid)) == s.fr.wrap(c + 1));
        CHECK(s.fr.sign(s.fr.sector_of(s.fr.reflection(0).apply(mid))) == -s.fr.sign(c));
    }
}

TEST_CASE("canonical placement") {
    for (int m : {2, 3, 4}) {
        Field f = dihedral_field(m);
        DihedralFrame fr(m, f);
        std::mt19937_64 rng(static_cast<unsigned>(m));
        for (int it = 0; it < 12; ++it) {
            FVector a{q(f, static_cast<long>(rng() % 41) - 20, 37), q(f, static_cast<long>(rng() % 41) - 20, 41)};
            if (a[0].is_zero() && a[1].is_zero()) continue;
            auto pl = canonicalize_dihedral(fr, a);
            CHECK(pl.w.apply(a) == pl.a);
            CHECK(fr.sector(m - 1).closure().contains(pl.a));
        }
    }
}

TEST_CASE("R0 has 4m vertices for generic a") {
    for (int m : {2, 3, 4}) {
        Setup s(m, 3, 2, 10);
        auto pl = canonicalize_dihedral(s.fr, s.a);
        auto r0 = build_R0(s.fr, pl.a);
        // oracle: the orbit {a - w a}, extreme points found by triangle containment
        std::vector<FVector> orbit;
        for (const auto& w : s.fr.group()) orbit.push_back(sub(pl.a, w.apply(pl.a)));
        CHECK(extreme_count(orbit) == static_cast<std::size_t>(4 * m));
        CHECK(r0.vertices.size() == static_cast<std::size_t>(4 * m));
        for (const auto& v : r0.vertices) CHECK(std::find(orbit.begin(), orbit.end(), v) != orbit.end());
        // P_k = 2 (a, u_k) u_k lies on the circle of radius |a| about a
        for (const auto& p : r0.P) CHECK(dot(sub(p, pl.a), sub(p, pl.a)) == dot(pl.a, pl.a));
    }
    Setup s(2, 3, 2, 10);
    CHECK_THROWS_AS(build_R0(s.fr, s.a), DomainError);
}

TEST_CASE("isometries") {
    Setup s(4, 3, 2, 10);
    auto rot = rotation_about(s.fr, s.a, 2, "rot");
    CHECK(rot.apply(s.a) == s.a);
    CHECK(isometry_problems(s.fr, rot).empty());
    auto ref = reflection_through(s.fr, s.a, 3, "ref");
    CHECK(ref.apply(s.a) == s.a);
    CHECK(ref.apply(add(s.a, s.fr.u(3))) == add(s.a, s.fr.u(3)));
    CHECK(isometry_problems(s.fr, ref).empty());
    // the congruence through three point pairs reproduces a known map
    std::vector<FVector> p{zero_vector(s.f, 2), s.fr.u(0), s.fr.u(5)};
    std::vector<FVector> img;
    for (const auto& x : p) img.push_back(ref.apply(x));
    auto g = congruence_from_points(p, img, "g");
    CHECK(g.linear == ref.linear);
    CHECK(g.translation == ref.translation);
    CHECK_THROWS_AS(congruence_from_points(p, {img[0], img[1], add(img[2], s.fr.u(0))}, "bad"), DomainError);
    auto bad = rot;
    bad.translation[0] += q(s.f, 1, 1000000000);
    CHECK_FALSE(isometry_problems(s.fr, bad).empty());
}

TEST_CASE("outer cancellation certificates verify") {
    for (int m : {2, 3, 4}) {
        Setup s(m, 3, 2, 10);
        for (int parity : {0, 1}) {
            auto c = outer_cancellation_certificate(s.fr, s.a, parity);
            std::size_t pos = 0, neg = 0;
            for (const auto& p : c.pieces) {
                if (!p.negligible) {
                    CHECK(pairings_using(c, p.id) == 1);
                    (p.sign > 0 ? pos : neg) += 1;
                }
                CHECK(pairings_using(c, p.id) <= 1);
            }
            CHECK(pos == neg);
            auto v = verify_certificate(c);
            INFO("m=" << m << " parity=" << parity << " " << v.to_json().dump());
            CHECK(v.ok);
            CHECK(v.pairings_checked == c.pairings.size());
            CHECK(v.partitions_checked == static_cast<std::size_t>(2 * m));
        }
    }
}

TEST_CASE("Frederickson certificate and geometry") {
    for (int m : {2, 3, 4}) {
        Setup s(m, 3, 2, 10);
        auto c = frederickson_certificate(s.fr, s.a);
        auto v = verify_certificate(c);
        INFO("m=" << m << " " << v.to_json().dump());
        CHECK(v.ok);
        // both signed halves of R0 are covered, so their areas agree
        REQUIRE(c.partitions.size() == 2);
        CHECK(exact_volume(c.partitions[0].region) == exact_volume(c.partitions[1].region));
        std::size_t chain = 0;
        for (const auto& ch : frederickson_geometry_checks(s.fr, s.a)) {
            INFO(ch.name << " " << ch.detail);
            CHECK(ch.ok);
            chain += ch.name.rfind("Q_", 0) == 0;
        }
        CHECK(chain == static_cast<std::size_t>(m - 1));
    }
}

TEST_CASE("verifier rejects tampered certificates") {
    Setup s(4, 3, 2, 10);
    auto c = outer_cancellation_certificate(s.fr, s.a, 0);
    REQUIRE(verify_certificate(c).ok);

    auto moved = c;
    moved.pairings[0].g.translation[0] += q(s.f, 1, 1000000000);
    CHECK_FALSE(verify_certificate(moved).ok);

    // a ray has no area, only the exact cover check can notice it missing
    auto dropped = c;
    auto it = std::find_if(dropped.pieces.begin(), dropped.pieces.end(), [](const DissectionPiece& p) { return p.negligible; });
    REQUIRE(it != dropped.pieces.end());
    std::string id = it->id;
    dropped.pieces.erase(it);
    for (auto& cl : dropped.partitions) cl.pieces.erase(std::remove(cl.pieces.begin(), cl.pieces.end(), id), cl.pieces.end());
    dropped.pairings.erase(std::remove_if(dropped.pairings.begin(), dropped.pairings.end(),
                                          [&](const Pairing& p) { return p.src == id || p.dst == id; }),
                           dropped.pairings.end());
    auto v = verify_certificate(dropped);
    CHECK_FALSE(v.ok);
    bool cover = false;
    for (const auto& f : v.failures) cover = cover || f.find("do not cover") != std::string::npos;
    CHECK(cover);

    auto same_sign = c;
    std::swap(same_sign.pairings[0].dst, same_sign.pairings[1].src);
    CHECK_FALSE(verify_certificate(same_sign).ok);
}

TEST_CASE("certificate JSON round trip") {
    Setup s(2, 3, 2, 10);
    auto c = frederickson_certificate(s.fr, s.a);
    auto j = c.to_json();
    auto back = DissectionCertificate::from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.to_json() == j);
    CHECK(verify_certificate(back).ok);
    CHECK_THROWS_AS(DissectionCertificate::from_json(nlohmann::json{{"kind", "outer"}}), ParseError);
}

TEST_CASE("signed pieces reproduce chamber sums") {
    for (int m : {2, 3}) {
        Setup s(m, 3, 2, 10);
        auto pl = canonicalize_dihedral(s.fr, s.a);
        Arrangement arr("I2(" + std::to_string(2 * m) + ")", s.f->N);
        auto outer = outer_cancellation_certificate(s.fr, s.a, 0);
        auto fred = frederickson_certificate(s.fr, s.a);
        // K + a with K stable: every group of pieces cancels on its own
        HalfOpenRegion body = regular_polygon(s.fr, pl.a, q(s.f, 2));
        CHECK(exact_pizza_serial(arr, body, Valuation::Volume).total.is_zero());
        CHECK(signed_piece_sum(outer, body, Valuation::Volume).is_zero());
        CHECK(signed_piece_sum(fred, body, Valuation::Volume).is_zero());
        // any body: the pieces tile the plane up to lines, so the two sums add to the chamber sum
        HalfOpenRegion box = box_region(s.f, {q(s.f, -1, 3), q(s.f, -1, 5)}, {q(s.f, 3, 2), q(s.f, 7, 4)}, false, false);
        auto direct = exact_pizza_serial(arr, box, Valuation::Volume).total;
        CHECK_FALSE(direct.is_zero());
        CHECK(signed_piece_sum(outer, box, Valuation::Volume) + signed_piece_sum(fred, box, Valuation::Volume) == direct);
    }
}

TEST_CASE("product reduction") {
    {
        Arrangement arr("A1^2");
        auto f = arr.field();
        FVector a{q(f, 2, 10), q(f, 1, 10)};
        auto pr = product_reduction(arr, box_body(f, 2, q(f, 1)), a);
        CHECK(pr.contained);
        CHECK(pr.terms.size() == 1);
        // 2(a,e1) 2(a,e2)
        CHECK(pr.total == q(f, 8, 100));
        CHECK(pr.direct == pr.total);
        CHECK_FALSE(pr.balanced);
    }
    {
        Arrangement arr("I2(4)xA1");
        auto f = arr.field();
        FVector a{q(f, 3, 10), q(f, 2, 10), q(f, 1, 10)};
        auto pr = product_reduction(arr, box_body(f, 3, q(f, 1)), a);
        CHECK(pr.contained);
        CHECK(pr.terms.size() == 2);
        CHECK(pr.balanced);
        CHECK(pr.total.is_zero());
        CHECK(pr.direct.is_zero());
    }
    CHECK_THROWS_AS(product_reduction(Arrangement("A2"), box_body(make_field(1), 2, AlgebraicNumber(make_field(1), Rational(1))),
                                      FVector{AlgebraicNumber(make_field(1), Rational(0)), AlgebraicNumber(make_field(1), Rational(0))}),
                    Error);
}

TEST_CASE("shares of I2(2m) are equal") {
    for (int m : {2, 4}) {
        Field f = dihedral_field(m);
        DihedralFrame fr(m, f);
        FVector a{q(f, 2, 10), q(f, 1, 10)};
        Body poly = explicit_body(regular_polygon(fr, zero_vector(f, 2), q(f, 2)));
        Body disc = ball_body(f, q(f, 1));
        Method mc;
        mc.exact = false;
        mc.mc.samples = 400000;
        mc.mc.seed = 7;
        for (int r = 0; r < 2; ++r) {
            auto ex = hirschhorn_shares(m, r, poly, a, Method{});
            CHECK(ex.exact);
            CHECK(ex.equal);
            for (const auto& x : ex.exact_shares) CHECK(x == ex.exact_shares[0]);
            for (const auto& x : ex.r0_shares) CHECK(x == ex.r0_shares[0]);
            // shares add up to the whole polygon
            AlgebraicNumber sum(f);
            for (const auto& x : ex.exact_shares) sum += x;
            CHECK(sum == exact_volume(regular_polygon(fr, a, q(f, 2))));
            CHECK(ex.certificate_verdict.ok);
            CHECK(ex.share_pairing_ok);
            CHECK(std::abs(ex.r - ex.other) == 1);

            auto est = hirschhorn_shares(m, r, disc, a, mc);
            CHECK_FALSE(est.exact);
            CHECK(est.equal);
            for (std::size_t j = 0; j < est.estimates.size(); ++j) {
                CHECK(std::abs(est.estimates[j] - M_PI / m) < 0.05);
                if (static_cast<int>(j) != r) CHECK(std::abs(est.estimates[static_cast<std::size_t>(r)] - est.estimates[j]) <= 4 * est.diff_se[j]);
            }
        }
    }
    Field f = dihedral_field(3);
    DihedralFrame fr(3, f);
    Body poly = explicit_body(regular_polygon(fr, zero_vector(f, 2), q(f, 2)));
    CHECK_THROWS_AS(hirschhorn_shares(3, 0, poly, {q(f, 2, 10), q(f, 1, 10)}, Method{}), DomainError);
    CHECK_THROWS_AS(hirschhorn_shares(4, 4, poly, {q(f, 2, 10), q(f, 1, 10)}, Method{}), DomainError);
}
