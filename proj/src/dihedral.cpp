#include "pizza/dihedral.hpp"

#include <omp.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace pizza {

namespace {

std::string idx(int i) { return std::to_string(i); }
std::string sgn(int s) { return s > 0 ? "+" : "-"; }

// Closed half-plane bounded by the line through p and q, on the side of ref.
LinearConstraint side_of(const FVector& p, const FVector& q, const FVector& ref, bool strict) {
    FVector n{p[1] - q[1], q[0] - p[0]};
    AlgebraicNumber off = dot(n, p);
    int s = (dot(n, ref) - off).sign();
    if (s == 0) throw DomainError("reference point lies on the cutting line");
    if (s < 0) {
        n = negate(n);
        off = -off;
    }
    return {n, off, strict};
}

CellUnion cells(const HalfOpenRegion& r) { return CellUnion(r); }

CellUnion concat(const std::vector<const CellUnion*>& parts, const Field& f) {
    CellUnion out(f, 2);
    for (const auto* p : parts)
        for (const auto& c : p->cells()) out.add_disjoint(c);
    return out;
}

std::vector<FVector> orbit_of_origin(const DihedralFrame& fr, const FVector& a) {
    std::vector<FVector> pts;
    std::set<std::string> seen;
    for (const auto& g : fr.group()) {
        FVector p = sub(a, g.apply(a));
        if (seen.insert(vector_key(p)).second) pts.push_back(p);
    }
    return pts;
}

HalfOpenRegion r0_region(const DihedralFrame& fr, const FVector& a, std::vector<FVector>* verts = nullptr) {
    auto hull = convex_hull_2d(orbit_of_origin(fr, a));
    if (hull.size() < 3) throw DomainError("R0(a) is degenerate (a = 0)");
    if (verts) *verts = hull;
    return polygon_region(hull);
}

AlgebraicNumber proxy_radius(const FVector& a) {
    return (abs(a[0]) + abs(a[1])) * Rational(4) + AlgebraicNumber(a[0].field(), Rational(1));
}

// Image of sector c under a linear element of W, read off from an interior direction.
int sector_image(const DihedralFrame& fr, const FMatrix& w, int c) {
    FVector mid = add(fr.u(c), fr.u(c + 1));
    return fr.sector_of(w.apply(mid));
}

}  // namespace

// ---------------------------------------------------------------------------
// Frame.

DihedralFrame::DihedralFrame(int m, Field f) : m_(m), field_(std::move(f)) {
    if (m < 1) throw DomainError("dihedral frame needs m >= 1");
    if ((field_->N % (2 * m)) != 0)
        throw DomainError("field Q(2cos(pi/" + idx(field_->N) + ")) does not contain cos(pi/" + idx(2 * m) + ")");
    for (int i = 0; i < 4 * m; ++i) dirs_.push_back({embed_cos(field_, i, 2 * m), embed_sin(field_, i, 2 * m)});
}

int DihedralFrame::wrap(int c) const {
    int s = 4 * m_;
    return ((c % s) + s) % s;
}

const FVector& DihedralFrame::u(int i) const { return dirs_[static_cast<std::size_t>(wrap(i))]; }

HalfOpenRegion DihedralFrame::sector(int c) const {
    HalfOpenRegion r(field_, 2);
    AlgebraicNumber zero(field_);
    r.add(normal(c), zero, true);
    r.add(negate(normal(c + 1)), zero, true);
    return r;
}

int DihedralFrame::sector_of(const FVector& x) const {
    for (int c = 0; c < 4 * m_; ++c)
        if (dot(x, normal(c)).sign() > 0 && dot(x, normal(c + 1)).sign() < 0) return c;
    return -1;
}

int DihedralFrame::closed_sector_of(const FVector& x) const {
    if (is_zero(x)) return -1;
    for (int c = 0; c < 4 * m_; ++c)
        if (dot(x, normal(c)).sign() >= 0 && dot(x, normal(c + 1)).sign() <= 0 && dot(x, u(c)).sign() + dot(x, u(c + 1)).sign() > 0)
            return c;
    return -1;
}

FMatrix DihedralFrame::rotation(int k) const {
    k = wrap(k);
    FMatrix r(field_, 2, 2);
    AlgebraicNumber c = embed_cos(field_, k, 2 * m_), s = embed_sin(field_, k, 2 * m_);
    r(0, 0) = c;
    r(0, 1) = -s;
    r(1, 0) = s;
    r(1, 1) = c;
    return r;
}

FMatrix DihedralFrame::reflection(int k) const {
    k = wrap(k);
    FMatrix r(field_, 2, 2);
    AlgebraicNumber c = embed_cos(field_, k, m_), s = embed_sin(field_, k, m_);
    r(0, 0) = c;
    r(0, 1) = s;
    r(1, 0) = s;
    r(1, 1) = -c;
    return r;
}

std::vector<FMatrix> DihedralFrame::group() const {
    std::vector<FMatrix> g;
    for (int j = 0; j < 2 * m_; ++j) g.push_back(rotation(2 * j));
    for (int j = 0; j < 2 * m_; ++j) g.push_back(reflection(j));
    return g;
}

Field dihedral_field(int m, const std::string& a_text) {
    int n = 2 * m;
    std::size_t start = 0;
    while (start <= a_text.size() && !a_text.empty()) {
        std::size_t end = a_text.find(',', start);
        if (end == std::string::npos) end = a_text.size();
        n = std::lcm(n, field_requirement(a_text.substr(start, end - start)));
        start = end + 1;
    }
    return make_field(n);
}

HalfOpenRegion regular_polygon(const DihedralFrame& fr, const FVector& c, const AlgebraicNumber& rho) {
    std::vector<FVector> vs;
    for (int k = 0; k < fr.sectors(); ++k) vs.push_back(add(c, scale(fr.u(k), rho)));
    return polygon_region(vs);
}

// ---------------------------------------------------------------------------
// Isometries.

FVector AffineIsometry::apply(const FVector& x) const { return add(linear.apply(x), translation); }
HalfOpenRegion AffineIsometry::apply(const HalfOpenRegion& r) const { return transform(r, linear, translation); }
CellUnion AffineIsometry::apply(const CellUnion& u) const { return transform(u, linear, translation); }

namespace {
const char* kind_name(AffineIsometry::Kind k) {
    switch (k) {
        case AffineIsometry::Kind::Rotation: return "rotation";
        case AffineIsometry::Kind::Reflection: return "reflection";
        default: return "congruence";
    }
}
}  // namespace

nlohmann::json AffineIsometry::to_json() const {
    nlohmann::json j{{"kind", kind_name(kind)},
                     {"linear", pizza::to_json(linear)},
                     {"translation", pizza::to_json(translation)},
                     {"step", step},
                     {"label", label}};
    if (!center.empty()) j["center"] = pizza::to_json(center);
    return j;
}

AffineIsometry AffineIsometry::from_json(const nlohmann::json& j) {
    try {
        AffineIsometry g;
        std::string k = j.at("kind").get<std::string>();
        if (k == "rotation") g.kind = Kind::Rotation;
        else if (k == "reflection") g.kind = Kind::Reflection;
        else if (k == "congruence") g.kind = Kind::Congruence;
        else throw ParseError("unknown isometry kind " + k);
        g.linear = matrix_from_json(j.at("linear"));
        g.translation = vector_from_json(j.at("translation"));
        g.step = j.at("step").get<int>();
        g.label = j.at("label").get<std::string>();
        if (j.contains("center")) g.center = vector_from_json(j.at("center"));
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad isometry JSON: ") + e.what());
    }
}

AffineIsometry rotation_about(const DihedralFrame& fr, const FVector& center, int step, std::string label) {
    AffineIsometry g;
    g.kind = AffineIsometry::Kind::Rotation;
    g.linear = fr.rotation(step);
    g.translation = sub(center, g.linear.apply(center));
    g.step = fr.wrap(step);
    g.center = center;
    g.label = std::move(label);
    return g;
}

AffineIsometry reflection_through(const DihedralFrame& fr, const FVector& center, int step, std::string label) {
    AffineIsometry g;
    g.kind = AffineIsometry::Kind::Reflection;
    g.linear = fr.reflection(step);
    g.translation = sub(center, g.linear.apply(center));
    g.step = fr.wrap(step) % (2 * fr.m());
    g.center = center;
    g.label = std::move(label);
    return g;
}

AffineIsometry congruence_from_points(const std::vector<FVector>& p, const std::vector<FVector>& q, std::string label) {
    if (p.size() != 3 || q.size() != 3) throw DomainError("congruence needs three point pairs");
    const Field& f = p[0][0].field();
    FMatrix src(f, 2, 2), dst(f, 2, 2);
    for (std::size_t c = 0; c < 2; ++c) {
        FVector d = sub(p[c + 1], p[0]), e = sub(q[c + 1], q[0]);
        for (std::size_t r = 0; r < 2; ++r) {
            src(r, c) = d[r];
            dst(r, c) = e[r];
        }
    }
    AffineIsometry g;
    g.kind = AffineIsometry::Kind::Congruence;
    g.linear = dst * inverse(src);
    if (!(g.linear.transpose() * g.linear).is_identity()) throw DomainError("point triples are not congruent");
    g.translation = sub(q[0], g.linear.apply(p[0]));
    g.label = std::move(label);
    return g;
}

std::vector<std::string> isometry_problems(const DihedralFrame& fr, const AffineIsometry& g) {
    std::vector<std::string> out;
    if (g.linear.rows() != 2 || g.linear.cols() != 2 || g.translation.size() != 2) {
        out.push_back("isometry is not planar");
        return out;
    }
    if (!(g.linear.transpose() * g.linear).is_identity()) out.push_back("linear part is not orthogonal");
    if (g.kind == AffineIsometry::Kind::Congruence) return out;
    if (g.center.size() != 2) {
        out.push_back("missing fixed point");
        return out;
    }
    if (g.apply(g.center) != g.center) out.push_back("does not fix its stated center");
    if (g.kind == AffineIsometry::Kind::Rotation) {
        if (g.step % 2 != 0) out.push_back("rotation angle is not a multiple of pi/m");
        if (g.linear != fr.rotation(g.step)) out.push_back("matrix differs from the stated rotation angle");
    } else if (g.linear != fr.reflection(g.step)) {
        out.push_back("matrix differs from the stated mirror");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Certificates.

nlohmann::json DissectionPiece::to_json() const {
    return {{"id", id}, {"label", label}, {"sign", sign}, {"chamber", chamber}, {"negligible", negligible}, {"region", region.to_json()}};
}

const DissectionPiece& DissectionCertificate::piece(const std::string& id) const {
    for (const auto& p : pieces)
        if (p.id == id) return p;
    throw DomainError("no piece " + id);
}

bool DissectionCertificate::has_piece(const std::string& id) const {
    return std::any_of(pieces.begin(), pieces.end(), [&](const DissectionPiece& p) { return p.id == id; });
}

nlohmann::json DissectionCertificate::to_json() const {
    nlohmann::json ps = nlohmann::json::array(), prs = nlohmann::json::array(), parts = nlohmann::json::array();
    for (const auto& p : pieces) ps.push_back(p.to_json());
    for (const auto& p : pairings) prs.push_back({{"src", p.src}, {"dst", p.dst}, {"isometry", p.g.to_json()}});
    for (const auto& c : partitions) parts.push_back({{"label", c.label}, {"region", c.region.to_json()}, {"pieces", c.pieces}});
    return {{"schema", 1},
            {"kind", kind},
            {"m", m},
            {"N", field->N},
            {"a", pizza::to_json(a)},
            {"a_input", pizza::to_json(a_input)},
            {"placement", pizza::to_json(placement)},
            {"proxy", proxy.to_json()},
            {"pieces", ps},
            {"pairings", prs},
            {"partitions", parts}};
}

DissectionCertificate DissectionCertificate::from_json(const nlohmann::json& j) {
    try {
        DissectionCertificate c;
        c.kind = j.at("kind").get<std::string>();
        c.m = j.at("m").get<int>();
        c.field = make_field(j.at("N").get<int>());
        c.a = vector_from_json(j.at("a"));
        c.a_input = vector_from_json(j.at("a_input"));
        c.placement = matrix_from_json(j.at("placement"));
        c.proxy = HalfOpenRegion::from_json(j.at("proxy"));
        for (const auto& p : j.at("pieces")) {
            DissectionPiece d;
            d.id = p.at("id").get<std::string>();
            d.label = p.at("label").get<std::string>();
            d.sign = p.at("sign").get<int>();
            d.chamber = p.at("chamber").get<int>();
            d.negligible = p.at("negligible").get<bool>();
            d.region = CellUnion::from_json(p.at("region"));
            c.pieces.push_back(std::move(d));
        }
        for (const auto& p : j.at("pairings"))
            c.pairings.push_back({p.at("src").get<std::string>(), p.at("dst").get<std::string>(), AffineIsometry::from_json(p.at("isometry"))});
        for (const auto& p : j.at("partitions"))
            c.partitions.push_back({p.at("label").get<std::string>(), CellUnion::from_json(p.at("region")),
                                    p.at("pieces").get<std::vector<std::string>>()});
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad certificate JSON: ") + e.what());
    }
}

DihedralPlacement canonicalize_dihedral(const DihedralFrame& fr, const FVector& a) {
    if (a.size() != 2) throw DomainError("a must be a point of the plane");
    const int m = fr.m();
    int c = fr.closed_sector_of(a);
    if (c < 0) throw DomainError("a = 0 has no canonical placement");
    DihedralPlacement p;
    if ((m - 1 - c) % 2 == 0) {
        p.w = fr.rotation(m - 1 - c);
    } else {
        p.w = fr.reflection((m + c) / 2);
        p.det = -1;
    }
    p.a = p.w.apply(a);
    p.on_line = fr.sector_of(a) < 0;
    return p;
}

R0Polygon build_R0(const DihedralFrame& fr, const FVector& a, bool degenerate) {
    const int m = fr.m();
    if (dot(a, fr.normal(m - 1)).sign() < 0 || dot(a, fr.normal(m)).sign() > 0 || dot(a, add(fr.u(m - 1), fr.u(m))).sign() <= 0)
        throw DomainError("a is not in the closure of T_" + idx(m - 1) +
                          "; rotate it into the canonical chamber first (canonicalize_dihedral)");
    if (!degenerate && fr.sector_of(a) < 0) throw DomainError("a lies on a line of the arrangement; pass the degenerate flag");
    R0Polygon r;
    r.orbit = orbit_of_origin(fr, a);
    r.region = r0_region(fr, a, &r.vertices);
    for (int i = 0; i < 2 * m; ++i) r.P.push_back(scale(fr.u(i), dot(a, fr.u(i)) * Rational(2)));
    return r;
}

namespace {

struct Builder {
    const DihedralFrame& fr;
    DissectionCertificate cert;

    Builder(const DihedralFrame& f, const FVector& a_input, const std::string& kind) : fr(f) {
        auto pl = canonicalize_dihedral(fr, a_input);
        cert.kind = kind;
        cert.m = fr.m();
        cert.field = fr.field();
        cert.a = pl.a;
        cert.a_input = a_input;
        cert.placement = pl.w;
        cert.proxy = regular_polygon(fr, pl.a, proxy_radius(pl.a));
    }

    void piece(const std::string& id, int chamber, CellUnion region, bool negligible = false) {
        cert.pieces.push_back({id, id, fr.sign(chamber), fr.wrap(chamber), negligible, std::move(region)});
    }
    void pair(const std::string& s, const std::string& d, AffineIsometry g) { cert.pairings.push_back({s, d, std::move(g)}); }
};

}  // namespace

DissectionCertificate outer_cancellation_certificate(const DihedralFrame& fr, const FVector& a_input, int parity) {
    if (parity != 0 && parity != 1) throw DomainError("parity must be 0 or 1");
    Builder b(fr, a_input, parity == 0 ? "outer" : "outer-odd");
    const int m = fr.m();
    const FVector& a = b.cert.a;
    R0Polygon r0 = build_R0(fr, a);
    const std::string pr = parity == 0 ? "" : "'";
    auto r_name = [&](int i, int s, bool primed) { return std::string("R") + (primed ? "'" : "") + "_{" + idx(i) + "," + sgn(s) + "}"; };

    // Chambers outside D (and T_{2m-1} for the odd family) are pieces themselves.
    std::map<int, std::string> chamber_piece;
    for (int k = 1 - parity; k < 2 * m; k += 2)
        for (int c : {2 * m + k, 2 * m + k - 1}) {
            int w = fr.wrap(c);
            if (chamber_piece.count(w)) continue;
            std::string id = (w == 2 * m - 1) ? r_name(2 * m - 1, -1, true) : r_name(w - 2 * m, fr.sign(w), false);
            chamber_piece[w] = id;
            b.piece(id, w, cells(fr.sector(w)));
        }

    std::map<int, std::string> rays;
    for (int k = 1 - parity; k < 2 * m; k += 2) {
        const FVector& P = r0.P[static_cast<std::size_t>(k)];
        auto sigma = reflection_through(fr, a, k + m, "reflection in L_" + idx(k) + "^perp + a");
        int lo = fr.wrap(k - 1), hi = k;
        int src_lo = fr.wrap(2 * m + k), src_hi = fr.wrap(2 * m + k - 1);
        int i_lo = k, i_hi = k - 1 < 0 ? 2 * m - 1 : k - 1;
        std::string img_lo = r_name(i_lo, fr.sign(lo), parity == 1), img_hi = r_name(i_hi, fr.sign(hi), parity == 1);
        b.piece(img_lo, lo, sigma.apply(cells(fr.sector(src_lo))));
        b.piece(img_hi, hi, sigma.apply(cells(fr.sector(src_hi))));
        b.pair(chamber_piece.at(src_lo), img_lo, sigma);
        b.pair(chamber_piece.at(src_hi), img_hi, sigma);

        // Residual open half-strips.
        HalfOpenRegion a_lo = fr.sector(lo);
        a_lo.add(negate(fr.normal(lo)), -dot(fr.normal(lo), P), true);
        HalfOpenRegion a_hi = fr.sector(hi);
        a_hi.add(fr.normal(hi + 1), dot(fr.normal(hi + 1), P), true);
        int j = parity == 0 ? (k - 1) / 2 : k / 2;
        std::string s_lo = "S" + pr + "_{" + idx(j) + "," + sgn(fr.sign(lo)) + "}";
        std::string s_hi = "S" + pr + "_{" + idx(j) + "," + sgn(fr.sign(hi)) + "}";
        b.piece(s_lo, lo, subtract(a_lo, r0.region));
        b.piece(s_hi, hi, subtract(a_hi, r0.region));
        b.pair(s_lo, s_hi, rotation_about(fr, a, 2, "rotation center a angle pi/m"));

        // Open rays from P_k.
        auto ray = [&](int dir) {
            HalfOpenRegion r(fr.field(), 2);
            const FVector& n = fr.normal(dir);
            r.add(n, dot(n, P), false);
            r.add(negate(n), -dot(n, P), false);
            r.add(fr.u(dir), dot(fr.u(dir), P), true);
            return r;
        };
        std::string d_lo = "D" + pr + "_{" + idx(lo) + "}", d_hi = "D" + pr + "_{" + idx(hi) + "}";
        // R0(a) can run along a ray before leaving it (next to T_{2m-1}); keep the outside part.
        b.piece(d_lo, lo, subtract(ray(lo), r0.region), true);
        b.piece(d_hi, hi, subtract(ray(hi + 1), r0.region), true);
        rays[lo] = d_lo;
        rays[hi] = d_hi;

        for (auto [c, img, s, d] : {std::tuple{lo, img_lo, s_lo, d_lo}, std::tuple{hi, img_hi, s_hi, d_hi}})
            b.cert.partitions.push_back({"T_" + idx(c) + " - R0(a)", subtract(fr.sector(c), r0.region), {img, s, d}});
    }

    if (parity == 0) {
        for (int j = 0; j <= m - 2; ++j)
            b.pair(rays.at(2 * j), rays.at(2 * j + 3), rotation_about(fr, a, 4, "rotation center a angle 2pi/m"));
        b.pair(rays.at(1), rays.at(2 * m - 2), reflection_through(fr, a, m, "reflection in L_" + idx(m) + " + a"));
    }
    return b.cert;
}

namespace {

struct FredGeometry {
    R0Polygon r0;
    // Triangle in sector k on the side [0, P_e]: far side from P_e to the apex.
    std::vector<FVector> far_p, far_q;
    FVector Z, Z0, ZP;
    std::vector<FVector> X, Y;
};

FredGeometry fred_geometry(const DihedralFrame& fr, const FVector& a) {
    const int m = fr.m();
    FredGeometry g;
    g.r0 = build_R0(fr, a);
    AlgebraicNumber inv_c = embed_cos(fr.field(), 1, 2 * m).inverse();
    auto alpha = [&](int i) { return dot(a, fr.u(i)); };
    for (int i = 0; i <= m - 2; ++i) g.X.push_back(scale(fr.u(2 * i + 1), alpha(2 * i) * inv_c));
    g.Y.push_back({});
    for (int i = 1; i <= m - 2; ++i) g.Y.push_back(scale(fr.u(2 * i - 1), alpha(2 * i) * inv_c));
    g.Z = scale(fr.u(2 * m - 3), alpha(2 * m - 2) * inv_c);
    AlgebraicNumber s = alpha(0) / alpha(2 * m - 2);
    const FVector& Pt = g.r0.P[static_cast<std::size_t>(2 * m - 2)];
    g.Z0 = scale(g.Z, AlgebraicNumber(fr.field(), Rational(1)) - s);
    g.ZP = add(g.Z, scale(sub(Pt, g.Z), s));
    g.far_p.resize(static_cast<std::size_t>(2 * m - 2));
    g.far_q.resize(static_cast<std::size_t>(2 * m - 2));
    for (int k = 0; k <= 2 * m - 3; ++k) {
        auto uk = static_cast<std::size_t>(k);
        if (k == 2 * m - 3) {
            g.far_p[uk] = Pt;
            g.far_q[uk] = g.Z;
        } else if (k % 2 == 0) {
            g.far_p[uk] = g.r0.P[uk];
            g.far_q[uk] = g.X[uk / 2];
        } else {
            g.far_p[uk] = g.r0.P[uk + 1];
            g.far_q[uk] = g.Y[(uk + 1) / 2];
        }
    }
    return g;
}

HalfOpenRegion q_closed(const DihedralFrame& fr, const FredGeometry& g, int k) {
    auto uk = static_cast<std::size_t>(k);
    HalfOpenRegion q = intersect(fr.sector(k).closure(), g.r0.region);
    FVector origin = zero_vector(fr.field(), 2);
    q.add(negated(side_of(g.far_p[uk], g.far_q[uk], origin, true)));
    return q;
}

}  // namespace

DissectionCertificate frederickson_certificate(const DihedralFrame& fr, const FVector& a_input) {
    Builder b(fr, a_input, "frederickson");
    const int m = fr.m();
    const FVector& a = b.cert.a;
    FredGeometry g = fred_geometry(fr, a);
    const FVector origin = zero_vector(fr.field(), 2);
    auto P = [&](int i) -> const FVector& { return g.r0.P[static_cast<std::size_t>(i)]; };
    auto far = [&](int k, bool strict) { return side_of(g.far_p[static_cast<std::size_t>(k)], g.far_q[static_cast<std::size_t>(k)], origin, strict); };

    // B'_{i,+}: interior plus the open far side.
    for (int i = 0; i <= m - 2; ++i) {
        HalfOpenRegion t = fr.sector(2 * i);
        t.add(far(2 * i, false));
        b.piece("B'_{" + idx(i) + ",+}", 2 * i, cells(t));
    }
    for (int i = 1; i <= m - 2; ++i) {
        HalfOpenRegion t = fr.sector(2 * i - 1);
        t.add(far(2 * i - 1, false));
        b.piece("B'_{" + idx(i) + ",-}", 2 * i - 1, cells(t));
    }
    // The triangle on [0, P_{2m-2}] split into B_{0,-} (apex Z) and the trapezoid B_{m-1,-}.
    {
        const int k = 2 * m - 3;
        HalfOpenRegion top = fr.sector(k);
        top.add(far(k, false));
        top.add(side_of(g.Z0, g.ZP, g.Z, true));
        b.piece("B'_{0,-}", k, cells(top));
        HalfOpenRegion trap = fr.sector(k);
        trap.add(far(k, false));
        trap.add(side_of(g.Z0, g.ZP, origin, false));
        b.piece("B'_{" + idx(m - 1) + ",-}", k, cells(trap));
        auto refl = reflection_through(fr, origin, 2 * m - 2, "reflection in L_" + idx(2 * m - 2));
        b.piece("B'_{" + idx(m - 1) + ",+}", 2 * m - 2, refl.apply(cells(trap)));
    }
    for (int k = 0; k <= 2 * m - 3; ++k) {
        HalfOpenRegion q = intersect(fr.sector(k), g.r0.region);
        q.add(negated(far(k, false)));
        b.piece("Q'_{" + idx(k) + "}", k, cells(q));
    }

    for (int i = 1; i <= m - 2; ++i)
        b.pair("B'_{" + idx(i) + ",+}", "B'_{" + idx(i) + ",-}", reflection_through(fr, origin, 2 * i, "reflection in L_" + idx(2 * i)));
    b.pair("B'_{" + idx(m - 1) + ",+}", "B'_{" + idx(m - 1) + ",-}",
           reflection_through(fr, origin, 2 * m - 2, "reflection in L_" + idx(2 * m - 2)));
    b.pair("B'_{0,+}", "B'_{0,-}", congruence_from_points({g.X[0], origin, P(0)}, {g.Z, g.Z0, g.ZP}, "congruence of isosceles triangles"));
    for (int j = 0; j <= m - 2; ++j)
        b.pair("Q'_{" + idx(2 * j) + "}", "Q'_{" + idx(2 * j + 1) + "}", rotation_about(fr, a, 2, "rotation center a angle pi/m"));

    for (int s : {1, -1}) {
        CellUnion region(fr.field(), 2);
        std::vector<std::string> ids;
        for (int c = 0; c < fr.sectors(); ++c)
            if (fr.sign(c) == s) region.add_disjoint(intersect(fr.sector(c), g.r0.region));
        for (const auto& p : b.cert.pieces)
            if (p.sign == s) ids.push_back(p.id);
        b.cert.partitions.push_back({std::string("R_{0,") + sgn(s) + "}(a)", region, ids});
    }
    return b.cert;
}

std::vector<NamedCheck> frederickson_geometry_checks(const DihedralFrame& fr, const FVector& a_input) {
    const int m = fr.m();
    auto pl = canonicalize_dihedral(fr, a_input);
    FredGeometry g = fred_geometry(fr, pl.a);
    std::vector<NamedCheck> out;
    std::vector<std::vector<FVector>> qv;
    for (int k = 0; k <= 2 * m - 3; ++k) qv.push_back(vertices(q_closed(fr, g, k)));

    auto angle_at = [&](const std::vector<FVector>& poly, const FVector& p, int step, std::string& detail) {
        std::vector<FVector> nb;
        bool found = false;
        for (const auto& v : poly) {
            if (v == p) {
                found = true;
                continue;
            }
            int pos = 0, neg = 0;
            for (const auto& w : poly) {
                int s = orient_2d(p, v, w).sign();
                pos += s > 0;
                neg += s < 0;
            }
            if (pos == 0 || neg == 0) nb.push_back(v);
        }
        if (!found || nb.size() != 2) {
            detail = "vertex not found";
            return false;
        }
        FVector x = sub(nb[0], p), y = sub(nb[1], p);
        AlgebraicNumber c = embed_cos(fr.field(), step, 2 * m);
        AlgebraicNumber d = dot(x, y);
        detail = "cos = " + std::to_string(d.to_double() / std::sqrt(dot(x, x).to_double() * dot(y, y).to_double()));
        return d.sign() == c.sign() && d * d == c * c * dot(x, x) * dot(y, y);
    };
    for (int i = 1; i <= 2 * m - 2; ++i) {
        int step = (i % 2 == 0) ? i - 1 : i;
        NamedCheck c{"angle of Q_" + idx(i - 1) + " at P_" + idx(i) + " = " + idx(step) + "pi/" + idx(2 * m), false, ""};
        c.ok = angle_at(qv[static_cast<std::size_t>(i - 1)], g.r0.P[static_cast<std::size_t>(i)], step, c.detail);
        out.push_back(c);
    }
    for (int i = 0; i <= 2 * m - 3; ++i) {
        int step = (i % 2 == 0) ? 2 * m - 2 - i : 2 * m - 1 - i;
        NamedCheck c{"angle of Q_" + idx(i) + " at P_" + idx(i) + " = " + idx(step) + "pi/" + idx(2 * m), false, ""};
        c.ok = angle_at(qv[static_cast<std::size_t>(i)], g.r0.P[static_cast<std::size_t>(i)], step, c.detail);
        out.push_back(c);
    }
    auto rot = rotation_about(fr, pl.a, 2, "rotation center a angle pi/m");
    // only odd i: for even i the angles above already differ at P_i and P_(i+1)
    for (int i = 1; i <= 2 * m - 3; i += 2) {
        NamedCheck c{"Q_" + idx(i) + " = rot(a, pi/m) Q_" + idx(i - 1), false, ""};
        c.ok = set_equal(rot.apply(cells(q_closed(fr, g, i - 1))), cells(q_closed(fr, g, i)));
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verification.

nlohmann::json Verdict::to_json() const {
    return {{"ok", ok}, {"failures", failures}, {"pairings_checked", pairings_checked}, {"partitions_checked", partitions_checked}};
}

Verdict verify_certificate(const DissectionCertificate& cert) {
    Verdict v;
    std::vector<std::string> structural;
    std::unique_ptr<DihedralFrame> fr;
    try {
        fr = std::make_unique<DihedralFrame>(cert.m, cert.field);
    } catch (const Error& e) {
        v.ok = false;
        v.failures.push_back(std::string("frame: ") + e.what());
        return v;
    }
    std::map<std::string, const DissectionPiece*> by_id;
    for (const auto& p : cert.pieces)
        if (!by_id.emplace(p.id, &p).second) structural.push_back("duplicate piece id " + p.id);
    std::map<std::string, int> uses;
    for (const auto& pr : cert.pairings) {
        ++uses[pr.src];
        ++uses[pr.dst];
    }
    for (const auto& p : cert.pieces) {
        int n = uses.count(p.id) ? uses[p.id] : 0;
        if (n > 1) structural.push_back("piece " + p.id + " is used by " + idx(n) + " pairings");
        if (n == 0 && !p.negligible && cert.kind != "shares") structural.push_back("piece " + p.id + " is not paired");
    }
    const FVector origin = zero_vector(cert.field, 2);

    const std::size_t np = cert.pairings.size(), nc = cert.partitions.size();
    std::vector<std::vector<std::string>> found(np + nc);
#pragma omp parallel for schedule(dynamic, 1)
    for (long t = 0; t < static_cast<long>(np + nc); ++t) {
        auto ut = static_cast<std::size_t>(t);
        auto& out = found[ut];
        try {
            if (ut < np) {
                const auto& pr = cert.pairings[ut];
                std::string tag = "pairing " + pr.src + " -> " + pr.dst + ": ";
                auto s = by_id.find(pr.src), d = by_id.find(pr.dst);
                if (s == by_id.end() || d == by_id.end()) {
                    out.push_back(tag + "unknown piece");
                    continue;
                }
                for (const auto& e : isometry_problems(*fr, pr.g)) out.push_back(tag + e);
                if (pr.g.kind != AffineIsometry::Kind::Congruence && pr.g.center != cert.a && pr.g.center != origin)
                    out.push_back(tag + "fixed point is neither a nor 0");
                if (s->second->sign != -d->second->sign) out.push_back(tag + "pieces have the same sign");
                if (!set_equal(pr.g.apply(s->second->region), d->second->region)) out.push_back(tag + "image differs from the target");
            } else {
                const auto& cl = cert.partitions[ut - np];
                std::string tag = "partition " + cl.label + ": ";
                std::vector<const DissectionPiece*> ps;
                for (const auto& id : cl.pieces) {
                    auto it = by_id.find(id);
                    if (it == by_id.end()) out.push_back(tag + "unknown piece " + id);
                    else ps.push_back(it->second);
                }
                for (std::size_t i = 0; i < ps.size(); ++i)
                    for (std::size_t j = i + 1; j < ps.size(); ++j)
                        if (!disjoint(ps[i]->region, ps[j]->region)) out.push_back(tag + ps[i]->id + " meets " + ps[j]->id);
                std::vector<const CellUnion*> parts;
                for (const auto* p : ps) parts.push_back(&p->region);
                CellUnion u = concat(parts, cert.field);
                if (!set_equal(u, cl.region)) out.push_back(tag + "pieces do not cover the region exactly");
                AlgebraicNumber vol(cert.field), vol_r = exact_volume(intersect(cl.region, cert.proxy));
                int chi = 0, chi_r = euler_cs(intersect(cl.region, cert.proxy));
                for (const auto* p : ps) {
                    CellUnion c = intersect(p->region, cert.proxy);
                    vol += exact_volume(c);
                    chi += euler_cs(c);
                }
                if (vol != vol_r) out.push_back(tag + "volumes are not additive");
                if (chi != chi_r) out.push_back(tag + "chi_c is not additive");
            }
        } catch (const std::exception& e) {
            out.push_back(std::string("check raised: ") + e.what());
        }
    }
    v.failures = structural;
    for (auto& f : found)
        for (auto& s : f) v.failures.push_back(std::move(s));
    v.pairings_checked = np;
    v.partitions_checked = nc;
    v.ok = v.failures.empty();
    return v;
}

AlgebraicNumber signed_piece_sum(const DissectionCertificate& cert, const HalfOpenRegion& body, Valuation v) {
    AlgebraicNumber total(cert.field);
    for (const auto& p : cert.pieces) {
        CellUnion c = intersect(p.region, body);
        AlgebraicNumber x = v == Valuation::Volume ? exact_volume(c) : AlgebraicNumber(cert.field, Rational(euler_cs(c)));
        if (p.sign > 0) total += x;
        else total -= x;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Product reduction.

nlohmann::json ProductReduction::to_json() const {
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& t : terms) ts.push_back({{"sign", t.sign}, {"label", t.label}, {"cells", t.region.cells().size()}});
    return {{"terms", ts}, {"contained", contained}, {"total", pizza::to_json(total)}, {"direct", pizza::to_json(direct)}, {"balanced", balanced}};
}

namespace {

HalfOpenRegion embed_block(const HalfOpenRegion& r, std::size_t offset, std::size_t n) {
    HalfOpenRegion out(r.field(), n);
    for (const auto& c : r.constraints()) {
        FVector v = zero_vector(r.field(), n);
        for (std::size_t i = 0; i < c.normal.size(); ++i) v[offset + i] = c.normal[i];
        out.add(v, c.offset, c.strict);
    }
    return out;
}

}  // namespace

ProductReduction product_reduction(const Arrangement& arr, const Body& k, const FVector& a) {
    if (!k.polytope()) throw UnsupportedError("product_reduction needs a polytope K");
    const auto& sys = arr.system();
    const std::size_t n = arr.dim();
    if (n > 4) throw ResourceError("product_reduction checks exact volumes in dimension <= 4");
    check_pizza_hypotheses(arr, k, a);
    const Field& f = arr.field();

    struct Factor {
        std::vector<std::pair<int, CellUnion>> options;  // sign, region (embedded)
        std::vector<FVector> corner_pts;                // vertices of the closed factor polytope
        std::size_t offset = 0, dim = 0;
        bool dihedral = false;
    };
    std::vector<Factor> fs;
    for (std::size_t j = 0; j < sys.factors.size(); ++j) {
        const auto& t = sys.factors[j];
        Factor fc;
        fc.offset = sys.block_offsets[j];
        if (t.family == 'A' && t.n == 1) {
            fc.dim = 1;
            AlgebraicNumber x = a[fc.offset] * Rational(2);
            int s = x.sign();
            HalfOpenRegion seg(f, 1);
            AlgebraicNumber zero(f);
            FVector e{AlgebraicNumber(f, Rational(s >= 0 ? 1 : -1))};
            seg.add(e, zero, true);
            seg.add(negate(e), -dot(e, FVector{x}), false);
            fc.options.push_back({s >= 0 ? 1 : -1, CellUnion(embed_block(seg, fc.offset, n))});
            fc.corner_pts = {FVector{zero}, FVector{x}};
        } else if ((t.family == 'I' && t.n % 2 == 0 && t.n >= 4) || (t.family == 'B' && t.n == 2)) {
            fc.dim = 2;
            fc.dihedral = true;
            DihedralFrame fr(t.family == 'B' ? 2 : t.n / 2, f);
            FVector aj{a[fc.offset], a[fc.offset + 1]};
            HalfOpenRegion r0 = r0_region(fr, aj, &fc.corner_pts);
            for (int s : {1, -1}) {
                CellUnion u(f, n);
                for (int c = 0; c < fr.sectors(); ++c)
                    if (fr.sign(c) == s) u.add_disjoint(embed_block(intersect(fr.sector(c), r0), fc.offset, n));
                fc.options.push_back({s, u});
            }
        } else {
            throw UnsupportedError("product_reduction handles A1 and I2(2m) factors, not " + t.label());
        }
        fs.push_back(std::move(fc));
    }

    ProductReduction out;
    // Cartesian product of the factor options.
    std::vector<std::size_t> pick(fs.size(), 0);
    while (true) {
        SignedRegion term;
        term.region = CellUnion(HalfOpenRegion(f, n));
        term.region = CellUnion(f, n);
        std::vector<HalfOpenRegion> acc{HalfOpenRegion(f, n)};
        for (std::size_t j = 0; j < fs.size(); ++j) {
            const auto& opt = fs[j].options[pick[j]];
            term.sign *= opt.first;
            term.label += (j ? " x " : "") + std::string(fs[j].dihedral ? "R0" : "S") + sgn(opt.first);
            std::vector<HalfOpenRegion> next;
            for (const auto& x : acc)
                for (const auto& c : opt.second.cells()) next.push_back(intersect(x, c));
            acc = std::move(next);
        }
        for (const auto& c : acc) term.region.add_disjoint(c);
        out.terms.push_back(std::move(term));
        std::size_t j = 0;
        while (j < fs.size() && ++pick[j] == fs[j].options.size()) pick[j++] = 0;
        if (j == fs.size()) break;
    }

    // Containment of the closed product polytope in K + a, checked on its vertices.
    HalfOpenRegion body = transform(k.hrep, FMatrix::identity(f, n), a);
    std::vector<FVector> corners{zero_vector(f, n)};
    for (const auto& fc : fs) {
        std::vector<FVector> next;
        for (const auto& base : corners)
            for (const auto& p : fc.corner_pts) {
                FVector x = base;
                for (std::size_t i = 0; i < fc.dim; ++i) x[fc.offset + i] = p[i];
                next.push_back(x);
            }
        corners = std::move(next);
    }
    HalfOpenRegion closed = body.closure();
    out.contained = std::all_of(corners.begin(), corners.end(), [&](const FVector& x) { return closed.contains(x); });

    out.total = AlgebraicNumber(f);
    std::vector<AlgebraicNumber> vols;
    for (const auto& t : out.terms) {
        vols.push_back(exact_volume(t.region));
        if (t.sign > 0) out.total += vols.back();
        else out.total -= vols.back();
    }
    out.direct = exact_pizza_serial(arr, body, Valuation::Volume).total;
    bool any_dihedral = std::any_of(fs.begin(), fs.end(), [](const Factor& fc) { return fc.dihedral; });
    out.balanced = any_dihedral && std::all_of(vols.begin(), vols.end(), [&](const AlgebraicNumber& x) { return x == vols[0]; });
    return out;
}

// ---------------------------------------------------------------------------
// Shares.

nlohmann::json ShareReport::to_json() const {
    nlohmann::json j{{"m", m}, {"r", r}, {"compared_with", other}, {"exact", exact}, {"equal", equal},
                     {"certificate_ok", certificate_verdict.ok}, {"share_pairing_ok", share_pairing_ok}};
    nlohmann::json r0 = nlohmann::json::array();
    for (const auto& x : r0_shares) r0.push_back({{"exact", x.to_string()}, {"decimal", x.to_decimal(17)}});
    j["r0_shares"] = r0;
    if (exact) {
        nlohmann::json e = nlohmann::json::array();
        for (const auto& x : exact_shares) e.push_back({{"exact", x.to_string()}, {"decimal", x.to_decimal(17)}});
        j["shares"] = e;
    } else {
        j["shares"] = estimates;
        j["diff_se"] = diff_se;
        j["samples"] = samples;
    }
    j["certificate_failures"] = certificate_verdict.failures;
    return j;
}

ShareReport hirschhorn_shares(int m, int r, const Body& k, const FVector& a, const Method& method) {
    if (m < 2 || m % 2 != 0) throw DomainError("shares need I2(2m) with m even");
    if (r < 0 || r >= m) throw DomainError("share index r must satisfy 0 <= r <= m-1");
    if (a.size() != 2) throw DomainError("a must be a point of the plane");
    Field f = a[0].field();
    Arrangement arr("I2(" + idx(2 * m) + ")", f->N);
    if (arr.field() != f) throw DomainError("a must live in the field of I2(2m)");
    check_pizza_hypotheses(arr, k, a);
    DihedralFrame fr(m, f);

    ShareReport rep;
    rep.m = m;
    rep.r = r;

    // Pick the neighbouring share whose canonical pair {x, x+1} has x <= m-2.
    auto pl = canonicalize_dihedral(fr, a);
    auto map_share = [&](int j) { return ((sector_image(fr, pl.w, j) % m) + m) % m; };
    int rc = map_share(r);
    int other = -1, lo = -1;
    for (int cand : {r + 1, r - 1}) {
        if (cand < 0 || cand >= m) continue;
        int oc = map_share(cand);
        int x = std::min(rc, oc);
        if (std::max(rc, oc) == x + 1 && x <= m - 2) {
            other = cand;
            lo = x;
            break;
        }
        if (m == 2) {
            other = cand;
            lo = 0;
            break;
        }
    }
    if (other < 0) throw DomainError("no neighbouring share for r = " + idx(r));
    rep.other = other;

    std::vector<FVector> hull;
    HalfOpenRegion r0 = r0_region(fr, a, &hull);
    for (int j = 0; j < m; ++j) {
        AlgebraicNumber s(f);
        for (int i = 0; i < 4; ++i) s += exact_volume(intersect(fr.sector(j + m * i), r0));
        rep.r0_shares.push_back(s);
    }

    if (k.polytope()) {
        rep.exact = true;
        HalfOpenRegion body = transform(k.hrep, FMatrix::identity(f, 2), a);
        for (int j = 0; j < m; ++j) {
            AlgebraicNumber s(f);
            for (int i = 0; i < 4; ++i) s += exact_volume(intersect(fr.sector(j + m * i), body));
            rep.exact_shares.push_back(s);
        }
        rep.equal = std::all_of(rep.exact_shares.begin(), rep.exact_shares.end(), [&](const AlgebraicNumber& x) { return x == rep.exact_shares[0]; });
    } else {
        if (method.exact) throw UnsupportedError("exact shares need a polytope K; use mc:n=...");
        if (k.kind != Body::Kind::Ball && k.kind != Body::Kind::Annulus) throw UnsupportedError("mc shares support ball and annulus");
        rep.exact = false;
        const auto& cfg = method.mc;
        const double ax = a[0].to_double(), ay = a[1].to_double();
        const double r1 = k.r1.to_double(), r2 = k.r2.to_double();
        const bool ann = k.kind == Body::Kind::Annulus;
        const double area = M_PI * (r2 * r2 - (ann ? r1 * r1 : 0.0));
        std::vector<std::pair<double, double>> normals;
        for (int i = 0; i < 2 * m; ++i) normals.push_back({fr.normal(i)[0].to_double(), fr.normal(i)[1].to_double()});
        const long shards = static_cast<long>((cfg.samples + cfg.shard - 1) / cfg.shard);
        std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(shards), std::vector<std::uint64_t>(static_cast<std::size_t>(m), 0));
#pragma omp parallel for schedule(static)
        for (long s = 0; s < shards; ++s) {
            auto us = static_cast<std::uint64_t>(s);
            std::uint64_t n = std::min(cfg.shard, cfg.samples - us * cfg.shard);
            std::mt19937_64 rng(shard_seed(cfg.seed, us));
            std::normal_distribution<double> gauss;
            std::uniform_real_distribution<double> unif;
            auto& cnt = counts[static_cast<std::size_t>(s)];
            for (std::uint64_t it = 0; it < n; ++it) {
                double gx = gauss(rng), gy = gauss(rng);
                double u = unif(rng);
                double rad = ann ? std::sqrt(r1 * r1 + u * (r2 * r2 - r1 * r1)) : r2 * std::sqrt(u);
                double nn = std::sqrt(gx * gx + gy * gy);
                double x = ax + rad * gx / nn, y = ay + rad * gy / nn;
                bool wall = false;
                for (const auto& [nx, ny] : normals)
                    if (std::fabs(nx * x + ny * y) < cfg.slab) wall = true;
                if (wall) continue;
                double th = std::atan2(y, x);
                if (th < 0) th += 2 * M_PI;
                int c = static_cast<int>(th / (M_PI / (2 * m)));
                c = std::min(c, 4 * m - 1);
                ++cnt[static_cast<std::size_t>(c % m)];
            }
        }
        std::vector<std::uint64_t> tot(static_cast<std::size_t>(m), 0);
        for (const auto& c : counts)
            for (std::size_t j = 0; j < tot.size(); ++j) tot[j] += c[j];
        const double n = static_cast<double>(cfg.samples);
        rep.samples = cfg.samples;
        rep.equal = true;
        auto ur = static_cast<std::size_t>(r);
        for (std::size_t j = 0; j < tot.size(); ++j) {
            rep.estimates.push_back(area * static_cast<double>(tot[j]) / n);
            double d = (static_cast<double>(tot[ur]) - static_cast<double>(tot[j])) / n;
            double m2 = (static_cast<double>(tot[ur]) + static_cast<double>(tot[j])) / n;
            double se = j == ur ? 0.0 : area * std::sqrt(std::max(0.0, m2 - d * d) / n);
            rep.diff_se.push_back(se);
            if (j != ur && std::fabs(area * d) > 4 * se) rep.equal = false;
        }
    }

    // Outside-R0 pairings for the canonical pair {lo, lo+1}.
    DissectionCertificate full = outer_cancellation_certificate(fr, a, lo % 2);
    auto share_of = [&](int c) { return c % m; };
    DissectionCertificate cert = full;
    cert.kind = "shares";
    cert.pieces.clear();
    cert.pairings.clear();
    cert.partitions.clear();
    std::set<std::string> kept;
    for (const auto& p : full.pieces)
        if (share_of(p.chamber) == lo || share_of(p.chamber) == (lo + 1) % m) {
            cert.pieces.push_back(p);
            kept.insert(p.id);
        }
    for (const auto& c : full.partitions)
        if (std::all_of(c.pieces.begin(), c.pieces.end(), [&](const std::string& id) { return kept.count(id) > 0; }))
            cert.partitions.push_back(c);
    for (const auto& p : full.pairings)
        if (kept.count(p.src) && kept.count(p.dst)) cert.pairings.push_back(p);
    rep.share_pairing_ok = true;
    std::map<std::string, int> used;
    for (const auto& p : cert.pairings) {
        int a1 = share_of(cert.piece(p.src).chamber), a2 = share_of(cert.piece(p.dst).chamber);
        if (a1 == a2) rep.share_pairing_ok = false;
        ++used[p.src];
        ++used[p.dst];
    }
    for (const auto& p : cert.pieces)
        if (!p.negligible && used[p.id] != 1) rep.share_pairing_ok = false;
    rep.certificate = std::move(cert);
    rep.certificate_verdict = verify_certificate(rep.certificate);
    return rep;
}

}  // namespace pizza
