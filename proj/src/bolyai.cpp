#include "pizza/bolyai.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pizza/errors.hpp"

namespace pizza {

namespace {

AlgebraicNumber num(const Field& f, long v) { return AlgebraicNumber(f, Rational(v)); }

// exact floor of x
long floor_of(const AlgebraicNumber& x) {
    long k = static_cast<long>(std::floor(x.to_double()));
    const Field& f = x.field();
    while (x < num(f, k)) --k;
    while (x >= num(f, k + 1)) ++k;
    return k;
}

FVector vec2(const AlgebraicNumber& x, const AlgebraicNumber& y) { return {x, y}; }

AlgebraicNumber cross(const FVector& a, const FVector& b) { return a[0] * b[1] - a[1] * b[0]; }

FMatrix half_turn(const Field& f) {
    FMatrix m(f, 2, 2);
    m(0, 0) = num(f, -1);
    m(1, 1) = num(f, -1);
    return m;
}

AffineIsometry translation_by(const FVector& t) { return affine_map(FMatrix::identity(t[0].field(), t.size()), t); }

std::set<std::string> vertex_keys(const std::vector<FVector>& pts) {
    std::set<std::string> s;
    for (const auto& p : pts) s.insert(vector_key(p));
    return s;
}

// counter-clockwise extreme points of a bounded planar region, empty if it has no interior
std::vector<FVector> polygon_of(const HalfOpenRegion& r) {
    if (is_empty(r.interior())) return {};
    auto hull = convex_hull_2d(vertices(r.closure()));
    if (hull.size() < 3) return {};
    return hull;
}

AffineIsometry inverse_of(const AffineIsometry& g) {
    FMatrix li = inverse(g.linear);
    return affine_map(li, negate(li.apply(g.translation)));
}

AffineIsometry then(const AffineIsometry& g, const AffineIsometry& h) {
    // h after g
    return affine_map(h.linear * g.linear, add(h.linear.apply(g.translation), h.translation));
}

bool orthogonal(const FMatrix& l) {
    return l.rows() == l.cols() && (l.transpose() * l).is_identity();
}

AlgebraicNumber polygon_area(const std::vector<FVector>& ccw) {
    AlgebraicNumber twice(ccw[0][0].field());
    for (std::size_t i = 1; i + 1 < ccw.size(); ++i) twice += orient_2d(ccw[0], ccw[i], ccw[i + 1]);
    return twice * Rational(1, 2);
}

void renumber(BgCertificate& c) {
    for (std::size_t i = 0; i < c.pieces.size(); ++i) c.pieces[i].id = "p" + std::to_string(i);
    c.translation_only = std::all_of(c.pieces.begin(), c.pieces.end(), [](const BgPiece& p) { return p.g.linear.is_identity(); });
}

AlgebraicNumber coordinate(const nlohmann::json& e, const Field& f) {
    if (e.is_string()) return parse_number(f, e.get<std::string>());
    if (e.is_number_integer()) return num(f, e.get<long>());
    if (e.is_number()) return AlgebraicNumber(f, parse_rational(e.dump()));
    throw ParseError("coordinate must be a number or a string");
}

FVector point_from(const nlohmann::json& j, const Field& f) {
    if (!j.is_array()) throw ParseError("point must be an array");
    FVector v;
    for (const auto& e : j) v.push_back(coordinate(e, f));
    return v;
}

AlgebraicNumber gram_det(const std::vector<FVector>& vs) {
    const Field& f = vs[0][0].field();
    FMatrix g(f, vs.size(), vs.size());
    for (std::size_t a = 0; a < vs.size(); ++a)
        for (std::size_t b = 0; b < vs.size(); ++b) g(a, b) = dot(vs[a], vs[b]);
    return det(g);
}

// j-volume of the parallelotope spanned by vs inside R^n
SurdSum span_volume(const std::vector<FVector>& vs, std::size_t n) {
    const Field& f = vs[0][0].field();
    if (vs.size() == n) return SurdSum::of(abs(det(FMatrix::from_rows(vs))));
    return SurdSum::sqrt_of(num(f, 1), gram_det(vs));
}

}  // namespace

// ---------------------------------------------------------------------------
// Parallelotopes.

HalfOpenRegion Parallelotope::region() const {
    if (rank() != dim()) throw DomainError("region of a flat parallelotope");
    return parallelotope_region(base, edges, half_open);
}

nlohmann::json Parallelotope::to_json() const {
    nlohmann::json es = nlohmann::json::array();
    for (const auto& e : edges) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& x : e) row.push_back(x.to_string());
        es.push_back(row);
    }
    nlohmann::json b = nlohmann::json::array();
    for (const auto& x : base) b.push_back(x.to_string());
    return {{"base", b}, {"edges", es}, {"half_open", half_open}};
}

Parallelotope Parallelotope::from_json(const nlohmann::json& j, const Field& f) {
    try {
        FVector base = point_from(j.at("base"), f);
        std::vector<FVector> edges;
        for (const auto& e : j.at("edges")) edges.push_back(point_from(e, f));
        return make_parallelotope(std::move(base), std::move(edges), j.value("half_open", false));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad parallelotope JSON: ") + e.what());
    }
}

Parallelotope make_parallelotope(FVector base, std::vector<FVector> edges, bool half_open) {
    if (base.empty()) throw DomainError("parallelotope needs a base point");
    if (edges.size() > base.size()) throw DomainError("more edges than dimensions");
    for (const auto& e : edges)
        if (e.size() != base.size()) throw DomainError("edge dimension differs from base");
    if (!edges.empty() && rank_of(edges) != edges.size()) throw DomainError("parallelotope edges are dependent");
    return {std::move(base), std::move(edges), half_open};
}

AffineIsometry affine_map(const FMatrix& linear, const FVector& t) {
    AffineIsometry g;
    g.kind = AffineIsometry::Kind::Congruence;
    g.linear = linear;
    g.translation = t;
    const Field& f = linear.field();
    auto show = [](const FVector& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
        return s + ")";
    };
    if (linear.is_identity()) {
        g.label = is_zero(t) ? "identity" : "translation " + show(t);
    } else if (linear.rows() == 2 && linear == half_turn(f)) {
        g.center = scale(t, AlgebraicNumber(f, Rational(1, 2)));
        g.label = "half turn about " + show(g.center);
    } else {
        g.label = "isometry";
    }
    return g;
}

// ---------------------------------------------------------------------------
// Certificates.

std::vector<FVector> BgPiece::image() const {
    std::vector<FVector> out;
    for (const auto& v : vertices) out.push_back(g.apply(v));
    return convex_hull_2d(out);
}

std::size_t BgCertificate::moved() const {
    return static_cast<std::size_t>(std::count_if(pieces.begin(), pieces.end(), [](const BgPiece& p) {
        return !(p.g.linear.is_identity() && is_zero(p.g.translation));
    }));
}

nlohmann::json BgCertificate::to_json() const {
    auto poly = [](const std::vector<FVector>& pts) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& p : pts) a.push_back(pizza::to_json(p));
        return a;
    };
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : pieces) ps.push_back({{"id", p.id}, {"vertices", poly(p.vertices)}, {"isometry", p.g.to_json()}});
    return {{"schema", 1},
            {"kind", kind},
            {"N", field->N},
            {"translation_only", translation_only},
            {"source", poly(source)},
            {"target", poly(target)},
            {"pieces", ps}};
}

BgCertificate BgCertificate::from_json(const nlohmann::json& j) {
    try {
        BgCertificate c;
        c.kind = j.at("kind").get<std::string>();
        c.field = make_field(j.at("N").get<int>());
        c.translation_only = j.at("translation_only").get<bool>();
        auto poly = [](const nlohmann::json& a) {
            std::vector<FVector> out;
            for (const auto& p : a) out.push_back(vector_from_json(p));
            return out;
        };
        c.source = poly(j.at("source"));
        c.target = poly(j.at("target"));
        for (const auto& p : j.at("pieces"))
            c.pieces.push_back({p.at("id").get<std::string>(), poly(p.at("vertices")), AffineIsometry::from_json(p.at("isometry"))});
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad certificate JSON: ") + e.what());
    }
}

nlohmann::json BgVerdict::to_json() const {
    nlohmann::json j{{"ok", ok}, {"failures", failures}};
    if (source_area.valid()) j["source_area"] = source_area.to_string();
    if (target_area.valid()) j["target_area"] = target_area.to_string();
    if (piece_area.valid()) j["piece_area"] = piece_area.to_string();
    return j;
}

BgVerdict verify_bg(const BgCertificate& c) {
    BgVerdict v;
    auto fail = [&](std::string s) {
        v.ok = false;
        v.failures.push_back(std::move(s));
    };
    HalfOpenRegion src, dst;
    try {
        src = c.source_region();
        dst = c.target_region();
    } catch (const Error& e) {
        fail(std::string("source or target is not a convex polygon: ") + e.what());
        return v;
    }
    v.source_area = polygon_area(c.source);
    v.target_area = polygon_area(c.target);
    if (v.source_area != v.target_area) fail("source and target areas differ");

    const std::size_t k = c.pieces.size();
    std::vector<HalfOpenRegion> pre(k), post(k);
    v.piece_area = AlgebraicNumber(c.field);
    for (std::size_t i = 0; i < k; ++i) {
        const BgPiece& p = c.pieces[i];
        const std::string tag = "piece " + p.id + ": ";
        if (p.vertices.size() < 3) {
            fail(tag + "fewer than three vertices");
            continue;
        }
        try {
            pre[i] = p.region();
        } catch (const Error& e) {
            fail(tag + "not a convex polygon");
            continue;
        }
        if (polygon_area(p.vertices).sign() <= 0) fail(tag + "empty interior");
        for (const auto& x : p.vertices)
            if (!src.contains(x)) {
                fail(tag + "leaves the source");
                break;
            }
        if (p.g.linear.rows() != 2 || !orthogonal(p.g.linear)) {
            fail(tag + "map is not an isometry");
            continue;
        }
        if (c.translation_only && !p.g.linear.is_identity()) fail(tag + "rotates in a translation-only certificate");
        auto img = p.image();
        for (const auto& x : img)
            if (!dst.contains(x)) {
                fail(tag + "image leaves the target");
                break;
            }
        post[i] = polygon_region(img);
        v.piece_area += polygon_area(p.vertices);
    }
    if (!v.ok) return v;

    std::vector<std::string> overlaps;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            bool a = !is_empty(intersect(pre[i].interior(), pre[j].interior()));
            bool b = !is_empty(intersect(post[i].interior(), post[j].interior()));
            if (a || b) {
#pragma omp critical
                overlaps.push_back("pieces " + c.pieces[i].id + " and " + c.pieces[j].id + (a ? " overlap" : " overlap after moving"));
            }
        }
    std::sort(overlaps.begin(), overlaps.end());
    for (auto& s : overlaps) fail(std::move(s));
    if (v.piece_area != v.source_area) fail("pieces do not cover the source");
    return v;
}

// ---------------------------------------------------------------------------
// Constructions.

std::vector<FVector> rectangle_vertices(const Field& f, const AlgebraicNumber& w, const AlgebraicNumber& h,
                                        const AlgebraicNumber& x0, const AlgebraicNumber& y0) {
    (void)f;
    if (w.sign() <= 0 || h.sign() <= 0) throw DomainError("rectangle sides must be positive");
    return {vec2(x0, y0), vec2(x0 + w, y0), vec2(x0 + w, y0 + h), vec2(x0, y0 + h)};
}

BgCertificate identity_certificate(const std::vector<FVector>& poly) {
    return moved_certificate(poly, translation_by(zero_vector(poly.at(0)[0].field(), 2)));
}

BgCertificate moved_certificate(const std::vector<FVector>& poly, const AffineIsometry& g) {
    BgCertificate c;
    c.kind = "moved";
    c.field = poly.at(0)[0].field();
    c.source = convex_hull_2d(poly);
    if (c.source.size() != poly.size() || c.source.size() < 3) throw DomainError("polygon must be strictly convex");
    c.pieces.push_back({"p0", c.source, g});
    c.target = c.pieces[0].image();
    renumber(c);
    return c;
}

BgCertificate compose(const BgCertificate& first, const BgCertificate& second) {
    if (vertex_keys(first.target) != vertex_keys(second.source)) throw Error("compose: target and source differ");
    BgCertificate c;
    c.kind = first.kind == second.kind ? first.kind : first.kind + "+" + second.kind;
    c.field = first.field;
    c.source = first.source;
    c.target = second.target;
    std::vector<std::vector<BgPiece>> found(first.pieces.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < first.pieces.size(); ++i) {
        const BgPiece& p = first.pieces[i];
        HalfOpenRegion r = p.region();
        AffineIsometry gi = inverse_of(p.g);
        for (const auto& q : second.pieces) {
            // the part of p that q picks up once p is moved
            HalfOpenRegion back = polygon_region(convex_hull_2d([&] {
                std::vector<FVector> pts;
                for (const auto& x : q.vertices) pts.push_back(gi.apply(x));
                return pts;
            }()));
            auto poly = polygon_of(intersect(r, back));
            if (poly.empty()) continue;
            found[i].push_back({"", std::move(poly), then(p.g, q.g)});
        }
    }
    for (auto& v : found)
        for (auto& p : v) c.pieces.push_back(std::move(p));
    renumber(c);
    return c;
}

BgCertificate invert(const BgCertificate& c) {
    BgCertificate r;
    r.kind = c.kind;
    r.field = c.field;
    r.source = c.target;
    r.target = c.source;
    for (const auto& p : c.pieces) r.pieces.push_back({"", p.image(), inverse_of(p.g)});
    renumber(r);
    return r;
}

BgCertificate shear_certificate(const FVector& b, const FVector& e, const FVector& f, const AlgebraicNumber& lambda) {
    const Field& fl = b.at(0).field();
    if (b.size() != 2 || e.size() != 2 || f.size() != 2) throw DomainError("shear lives in the plane");
    AlgebraicNumber d = cross(e, f);
    if (d.is_zero()) throw DomainError("shear of a degenerate parallelogram");
    FVector w = sub(f, scale(e, lambda));
    // s(x) = det(x - b, w) / det(e, w) counts how many copies of e lie between x and the side through b
    FVector n = scale(vec2(w[1], -w[0]), d.inverse());
    AlgebraicNumber nb = dot(n, b);

    BgCertificate c;
    c.kind = "shear";
    c.field = fl;
    c.source = convex_hull_2d({b, add(b, e), add(add(b, e), f), add(b, f)});
    c.target = convex_hull_2d({b, add(b, e), add(add(b, e), w), add(b, w)});
    HalfOpenRegion p = polygon_region(c.source);
    AlgebraicNumber lo = lambda.sign() < 0 ? lambda : num(fl, 0);
    AlgebraicNumber hi = lambda.sign() > 0 ? lambda + num(fl, 1) : num(fl, 1);
    const long k0 = floor_of(lo), k1 = -floor_of(-hi);
    for (long k = k0; k < k1; ++k) {
        HalfOpenRegion strip = p;
        strip.add(n, nb + num(fl, k), false);
        strip.add(negate(n), -(nb + num(fl, k + 1)), false);
        auto poly = polygon_of(strip);
        if (poly.empty()) continue;
        c.pieces.push_back({"", std::move(poly), translation_by(scale(e, num(fl, -k)))});
    }
    renumber(c);
    return c;
}

BgCertificate parallelogram_to_rectangle(const Parallelotope& p) {
    if (p.dim() != 2 || p.rank() != 2) throw DomainError("parallelogram needed");
    const FVector& e = p.edges[0];
    const FVector& f = p.edges[1];
    BgCertificate c = shear_certificate(p.base, e, f, dot(f, e) / dot(e, e));
    c.kind = "parallelogram_to_rectangle";
    return c;
}

BgCertificate rectangle_retile(const AlgebraicNumber& w1, const AlgebraicNumber& h1, const AlgebraicNumber& w2) {
    const Field& f = w1.field();
    if (w1.sign() <= 0 || h1.sign() <= 0 || w2.sign() <= 0) throw DomainError("rectangle sides must be positive");
    const AlgebraicNumber zero = num(f, 0);
    const AlgebraicNumber h2 = w1 * h1 / w2;
    if (w1 < w2) {
        BgCertificate c = invert(rectangle_retile(w2, h2, w1));
        c.kind = "rectangle_retile";
        return c;
    }
    BgCertificate c = identity_certificate(rectangle_vertices(f, w1, h1, zero, zero));
    AlgebraicNumber w = w1, h = h1;
    while (w >= w2 * Rational(2)) {
        AlgebraicNumber half = w * Rational(1, 2);
        BgCertificate step;
        step.field = f;
        step.source = rectangle_vertices(f, w, h, zero, zero);
        step.target = rectangle_vertices(f, half, h + h, zero, zero);
        step.pieces.push_back({"", rectangle_vertices(f, half, h, zero, zero), translation_by(vec2(zero, zero))});
        step.pieces.push_back({"", rectangle_vertices(f, half, h, half, zero), translation_by(vec2(-half, h))});
        renumber(step);
        c = compose(c, step);
        w = half;
        h = h + h;
    }
    if (w != w2) {
        // staircase: cut along the line (w,0)-(0,h2) and the lines x = w2, y = h
        BgCertificate step;
        step.field = f;
        step.source = rectangle_vertices(f, w, h, zero, zero);
        step.target = rectangle_vertices(f, w2, h2, zero, zero);
        step.pieces.push_back({"", convex_hull_2d({vec2(zero, zero), vec2(w2, zero), vec2(w2, h2 - h), vec2(w - w2, h), vec2(zero, h)}),
                               translation_by(vec2(zero, zero))});
        step.pieces.push_back({"", convex_hull_2d({vec2(w2, zero), vec2(w, zero), vec2(w2, h2 - h)}), translation_by(vec2(-w2, h))});
        step.pieces.push_back({"", convex_hull_2d({vec2(w - w2, h), vec2(w, h), vec2(w, zero)}), translation_by(vec2(w2 - w, h2 - h))});
        renumber(step);
        c = compose(c, step);
    }
    c.kind = "rectangle_retile";
    return c;
}

BgCertificate polygon_to_rectangle(const std::vector<FVector>& poly, const AlgebraicNumber& width) {
    if (poly.size() < 3) throw DomainError("polygon needs at least three vertices");
    const Field& f = poly[0][0].field();
    if (width.sign() <= 0) throw DomainError("width must be positive");
    auto hull = convex_hull_2d(poly);
    if (hull.size() != poly.size()) throw DomainError("polygon must be strictly convex");
    const AlgebraicNumber zero = num(f, 0), half = AlgebraicNumber(f, Rational(1, 2));

    BgCertificate out;
    out.kind = "polygon_to_rectangle";
    out.field = f;
    out.source = hull;
    AlgebraicNumber y = zero;
    for (std::size_t i = 1; i + 1 < hull.size(); ++i) {
        const FVector &A = hull[0], &B = hull[i], &C = hull[i + 1];
        FVector M = scale(add(A, C), half), N = scale(add(B, C), half);
        FVector e = sub(B, A), fe = scale(sub(C, A), half);

        // triangle -> parallelogram: the top corner turns half way round N
        BgCertificate c;
        c.field = f;
        c.source = convex_hull_2d({A, B, C});
        c.target = convex_hull_2d({A, B, add(B, fe), add(A, fe)});
        c.pieces.push_back({"", convex_hull_2d({A, B, N, M}), translation_by(zero_vector(f, 2))});
        c.pieces.push_back({"", convex_hull_2d({M, N, C}), affine_map(half_turn(f), scale(N, num(f, 2)))});
        renumber(c);

        if (e[1].is_zero()) {
            c = compose(c, shear_certificate(A, e, fe, fe[0] / e[0]));
        } else {
            FVector f2 = sub(fe, scale(e, fe[1] / e[1]));
            c = compose(c, shear_certificate(A, e, fe, fe[1] / e[1]));
            c = compose(c, shear_certificate(A, f2, e, e[0] / f2[0]));
        }
        // now an axis-parallel rectangle
        AlgebraicNumber x0 = c.target[0][0], y0 = c.target[0][1], x1 = x0, y1 = y0;
        for (const auto& p : c.target) {
            x0 = std::min(x0, p[0]), x1 = std::max(x1, p[0]);
            y0 = std::min(y0, p[1]), y1 = std::max(y1, p[1]);
        }
        c = compose(c, moved_certificate(c.target, translation_by(vec2(-x0, -y0))));
        AlgebraicNumber h = (x1 - x0) * (y1 - y0) / width;
        c = compose(c, rectangle_retile(x1 - x0, y1 - y0, width));
        c = compose(c, moved_certificate(c.target, translation_by(vec2(zero, y))));
        y += h;
        for (auto& p : c.pieces) out.pieces.push_back(std::move(p));
    }
    out.target = rectangle_vertices(f, width, y, zero, zero);
    renumber(out);
    return out;
}

// ---------------------------------------------------------------------------
// Normal forms and the invariant vector.

nlohmann::json NormalForm::to_json() const { return {{"volume", volume.to_string()}, {"box", box.to_json()}}; }

NormalForm parallelotope_normal_form(const Parallelotope& p) {
    const std::size_t n = p.dim();
    if (p.rank() != n) throw DomainError("normal form needs a full-rank parallelotope");
    if (n > 4) throw DomainError("normal form implemented up to dimension 4");
    const Field& f = p.base[0].field();
    NormalForm nf;
    nf.volume = abs(det(FMatrix::from_rows(p.edges)));
    std::vector<FVector> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back(unit_vector(f, n, i));
    edges.push_back(scale(unit_vector(f, n, n - 1), nf.volume));
    nf.box = make_parallelotope(zero_vector(f, n), std::move(edges), p.half_open);
    return nf;
}

nlohmann::json KZVector::to_json() const {
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& x : v) vs.push_back(x.to_string());
    return {{"chi", chi}, {"v", vs}};
}

KZVector kz_vector(const std::vector<SignedParallelotope>& items, const Field& f, std::size_t n) {
    KZVector out;
    out.v.assign(n, SurdSum(f));
    for (const auto& [sign, p] : items) {
        if (p.dim() != n) throw DomainError("parallelotope dimension differs");
        const std::size_t k = p.rank();
        const AlgebraicNumber s = num(f, sign);
        if (p.half_open) {
            // (0,1]^k has chi = 0 and only the top measure survives
            if (k == 0) out.chi += sign;
            else out.v[k - 1] += span_volume(p.edges, n) * s;
            continue;
        }
        out.chi += sign;
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            std::vector<FVector> sub;
            for (std::size_t i = 0; i < k; ++i)
                if (mask >> i & 1u) sub.push_back(p.edges[i]);
            out.v[sub.size() - 1] += span_volume(sub, n) * s;
        }
    }
    return out;
}

bool kz_equal(const KZVector& x, const KZVector& y) {
    if (x.chi != y.chi || x.v.size() != y.v.size()) return false;
    for (std::size_t i = 0; i < x.v.size(); ++i)
        if (!(x.v[i] - y.v[i]).is_zero()) return false;
    return true;
}

AlgebraicNumber normal_form_total(const std::vector<SignedParallelotope>& items, const Field& f, std::size_t n) {
    AlgebraicNumber t(f);
    for (const auto& [sign, p] : items) {
        if (p.dim() != n) throw DomainError("parallelotope dimension differs");
        if (p.rank() == n) t += num(f, sign) * parallelotope_normal_form(p).volume;
    }
    return t;
}

std::vector<SignedParallelotope> parse_kz_items(const nlohmann::json& j, const Field& f) {
    try {
        std::vector<SignedParallelotope> out;
        for (const auto& it : j.at("items")) out.emplace_back(it.value("sign", 1), Parallelotope::from_json(it, f));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad item list: ") + e.what());
    }
}

std::vector<FVector> parse_polygon(const nlohmann::json& j, const Field& f) {
    try {
        std::vector<FVector> out;
        for (const auto& p : j.at("vertices")) {
            out.push_back(point_from(p, f));
            if (out.back().size() != 2) throw ParseError("polygon vertices must be planar");
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad polygon JSON: ") + e.what());
    }
}

}  // namespace pizza
