#include "pizza/region.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pizza {

using Bits = boost::dynamic_bitset<>;

HalfOpenRegion::HalfOpenRegion(Field f, std::size_t dim, std::vector<LinearConstraint> cons)
    : field_(std::move(f)), dim_(dim) {
    for (auto& c : cons) add(c);
}

HalfOpenRegion& HalfOpenRegion::add(FVector normal, AlgebraicNumber offset, bool strict) {
    if (normal.size() != dim_) throw DomainError("region: constraint dimension mismatch");
    constraints_.push_back({std::move(normal), std::move(offset), strict});
    return *this;
}

bool HalfOpenRegion::contains(const FVector& x) const {
    for (const auto& c : constraints_) {
        int s = (dot(x, c.normal) - c.offset).sign();
        if (s < 0 || (s == 0 && c.strict)) return false;
    }
    return true;
}

HalfOpenRegion HalfOpenRegion::closure() const {
    HalfOpenRegion r = *this;
    for (auto& c : r.constraints_) c.strict = false;
    return r;
}

HalfOpenRegion HalfOpenRegion::interior() const {
    HalfOpenRegion r = *this;
    for (auto& c : r.constraints_) c.strict = true;
    return r;
}

nlohmann::json HalfOpenRegion::to_json() const {
    nlohmann::json cons = nlohmann::json::array();
    for (const auto& c : constraints_)
        cons.push_back({{"normal", pizza::to_json(c.normal)}, {"offset", pizza::to_json(c.offset)}, {"strict", c.strict}});
    return {{"N", field_->N}, {"dim", dim_}, {"constraints", cons}};
}

HalfOpenRegion HalfOpenRegion::from_json(const nlohmann::json& j) {
    try {
        HalfOpenRegion r(make_field(j.at("N").get<int>()), j.at("dim").get<std::size_t>());
        for (const auto& c : j.at("constraints"))
            r.add(vector_from_json(c.at("normal")), algebraic_from_json(c.at("offset")), c.at("strict").get<bool>());
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad region JSON: ") + e.what());
    }
}

HalfOpenRegion intersect(const HalfOpenRegion& a, const HalfOpenRegion& b) {
    if (a.dim() != b.dim()) throw DomainError("intersect: dimension mismatch");
    HalfOpenRegion r = a;
    for (const auto& c : b.constraints()) r.add(c);
    return r;
}


std::optional<FVector> sample_point(const HalfOpenRegion& r) { return feasible_point(r.field(), r.dim(), r.constraints()); }

LinearConstraint negated(const LinearConstraint& c) { return {negate(c.normal), -c.offset, !c.strict}; }

HalfOpenRegion box_region(const Field& f, const FVector& lo, const FVector& hi, bool lo_strict, bool hi_strict) {
    const std::size_t n = lo.size();
    HalfOpenRegion r(f, n);
    for (std::size_t i = 0; i < n; ++i) {
        r.add(unit_vector(f, n, i), lo[i], lo_strict);
        r.add(negate(unit_vector(f, n, i)), -hi[i], hi_strict);
    }
    return r;
}

namespace {

// Basis of {x : (x, e) = 0 for all e in rows}.
std::vector<FVector> null_space(const Field& f, const std::vector<FVector>& rows, std::size_t n) {
    std::vector<FVector> m = rows;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c].is_zero()) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        AlgebraicNumber inv = m[r][c].inverse();
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            AlgebraicNumber k = m[i][c];
            for (std::size_t j = 0; j < n; ++j) m[i][j] -= k * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<FVector> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
        FVector v = zero_vector(f, n);
        v[free] = AlgebraicNumber(f, Rational(1));
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
        basis.push_back(v);
    }
    return basis;
}

}  // namespace

HalfOpenRegion parallelotope_region(const FVector& base, const std::vector<FVector>& edges, bool half_open) {
    const Field& f = base[0].field();
    const std::size_t n = base.size(), k = edges.size();
    if (k > 0 && rank_of(edges) != k) throw SingularError("parallelotope edges are linearly dependent");
    HalfOpenRegion r(f, n);
    if (k > 0) {
        FMatrix g(f, k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) g(i, j) = dot(edges[i], edges[j]);
        FMatrix ginv = inverse(g);
        for (std::size_t i = 0; i < k; ++i) {
            // u_i = sum_j ginv(i,j) v_j gives lambda_i = (x - base, u_i)
            FVector u = zero_vector(f, n);
            for (std::size_t j = 0; j < k; ++j) u = add(u, scale(edges[j], ginv(i, j)));
            AlgebraicNumber b = dot(base, u);
            r.add(u, b, half_open);
            r.add(negate(u), -b - AlgebraicNumber(f, Rational(1)), false);
        }
    }
    for (const auto& w : null_space(f, edges, n)) {
        AlgebraicNumber b = dot(base, w);
        r.add(w, b, false);
        r.add(negate(w), -b, false);
    }
    return r;
}

HalfOpenRegion transform(const HalfOpenRegion& r, const FMatrix& m, const FVector& t) {
    FMatrix minv = inverse(m);
    HalfOpenRegion out(r.field(), r.dim());
    for (const auto& c : r.constraints()) {
        FVector n2 = minv.apply_transpose(c.normal);
        out.add(n2, c.offset + dot(t, n2), c.strict);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Double description by successive clipping.

namespace {

struct DDVertex {
    FVector x;
    Bits inc;
};

std::vector<DDVertex> clip(const std::vector<DDVertex>& vs, const LinearConstraint& c, std::size_t ci) {
    const std::size_t nv = vs.size();
    std::vector<int> side(nv);
    std::vector<AlgebraicNumber> val(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        val[i] = dot(vs[i].x, c.normal) - c.offset;
        side[i] = val[i].sign();
    }
    std::vector<DDVertex> out;
    for (std::size_t i = 0; i < nv; ++i) {
        if (side[i] < 0) continue;
        DDVertex v = vs[i];
        if (side[i] == 0) v.inc.set(ci);
        out.push_back(std::move(v));
    }
    for (std::size_t p = 0; p < nv; ++p) {
        if (side[p] <= 0) continue;
        for (std::size_t q = 0; q < nv; ++q) {
            if (side[q] >= 0) continue;
            Bits z = vs[p].inc & vs[q].inc;
            bool adjacent = true;
            for (std::size_t r = 0; r < nv && adjacent; ++r)
                if (r != p && r != q && z.is_subset_of(vs[r].inc)) adjacent = false;
            if (!adjacent) continue;
            AlgebraicNumber t = val[p] / (val[p] - val[q]);
            DDVertex v{add(vs[p].x, scale(sub(vs[q].x, vs[p].x), t)), z};
            v.inc.set(ci);
            out.push_back(std::move(v));
        }
    }
    return out;
}

// Vertices of {weak constraints} intersected with [-B, B]^n. Box constraint
// bits follow the m original ones.
std::vector<DDVertex> dd_box(const Field& f, std::size_t n, const std::vector<LinearConstraint>& cons,
                             const AlgebraicNumber& bound) {
    const std::size_t m = cons.size(), total = m + 2 * n;
    std::vector<DDVertex> vs;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        DDVertex v{zero_vector(f, n), Bits(total)};
        for (std::size_t k = 0; k < n; ++k) {
            bool hi = (mask >> k) & 1;
            v.x[k] = hi ? bound : -bound;
            v.inc.set(m + 2 * k + (hi ? 1 : 0));
        }
        vs.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < m && !vs.empty(); ++i) vs = clip(vs, cons[i], i);
    return vs;
}

bool touches_box(const DDVertex& v, std::size_t m) {
    for (std::size_t i = m; i < v.inc.size(); ++i)
        if (v.inc.test(i)) return true;
    return false;
}

std::vector<LinearConstraint> weak_of(const std::vector<LinearConstraint>& cons) {
    std::vector<LinearConstraint> w = cons;
    for (auto& c : w) c.strict = false;
    return w;
}

bool cone_is_trivial(const Field& f, std::size_t n, const std::vector<LinearConstraint>& cons) {
    std::vector<LinearConstraint> homog;
    for (const auto& c : cons) homog.push_back({c.normal, AlgebraicNumber(f), false});
    auto vs = dd_box(f, n, homog, AlgebraicNumber(f, Rational(1)));
    for (const auto& v : vs)
        if (!is_zero(v.x)) return false;
    return true;
}

AlgebraicNumber initial_bound(const Field& f, const std::vector<LinearConstraint>& cons) {
    // A crude scale from the offsets; the doubling loop corrects it.
    Rational b = 1;
    for (const auto& c : cons) {
        Rational o = abs(Rational(mpq_class(c.offset.to_double())));
        if (o > b) b = o;
    }
    return AlgebraicNumber(f, b * 2 + 1);
}

}  // namespace

bool is_bounded(const HalfOpenRegion& r) {
    auto weak = weak_of(r.constraints());
    if (!lp_feasible(r.field(), r.dim(), weak)) return true;
    return cone_is_trivial(r.field(), r.dim(), weak);
}

int affine_rank(const std::vector<FVector>& pts) {
    if (pts.empty()) return -1;
    std::vector<FVector> diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
    if (diffs.empty()) return 0;
    return static_cast<int>(rank_of(diffs));
}

AlgebraicNumber orient_2d(const FVector& o, const FVector& p, const FVector& q) {
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0]);
}

std::vector<FVector> convex_hull_2d(std::vector<FVector> pts) {
    auto less = [](const FVector& x, const FVector& y) { return x[0] < y[0] || (x[0] == y[0] && x[1] < y[1]); };
    std::sort(pts.begin(), pts.end(), less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<FVector> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && orient_2d(hull[k - 2], hull[k - 1], pts[i]).sign() <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orient_2d(hull[k - 2], hull[k - 1], pts[i]).sign() <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

HalfOpenRegion polygon_region(const std::vector<FVector>& ccw) {
    if (ccw.size() < 3) throw DomainError("polygon needs at least 3 vertices");
    const Field& f = ccw[0][0].field();
    HalfOpenRegion r(f, 2);
    for (std::size_t i = 0; i < ccw.size(); ++i) {
        const FVector& p = ccw[i];
        const FVector& q = ccw[(i + 1) % ccw.size()];
        FVector n{p[1] - q[1], q[0] - p[0]};
        if (orient_2d(p, q, ccw[(i + 2) % ccw.size()]).sign() <= 0) throw DomainError("polygon vertices are not strictly convex and counter-clockwise");
        r.add(n, dot(n, p), false);
    }
    return r;
}

Polytope::Polytope(const HalfOpenRegion& r) : region_(r) {
    const Field& f = r.field();
    const std::size_t n = r.dim(), m = r.constraints().size();
    auto weak = weak_of(r.constraints());
    if (!lp_feasible(f, n, weak)) return;
    if (!cone_is_trivial(f, n, weak)) throw UnboundedError("region is unbounded");
    AlgebraicNumber bound = initial_bound(f, weak);
    std::vector<DDVertex> vs;
    for (;;) {
        vs = dd_box(f, n, weak, bound);
        bool touch = std::any_of(vs.begin(), vs.end(), [&](const DDVertex& v) { return touches_box(v, m); });
        if (!touch) break;
        bound *= Rational(4);
    }
    for (auto& v : vs) {
        verts_.push_back(v.x);
        Bits inc(m);
        for (std::size_t i = 0; i < m; ++i) inc[i] = v.inc[i];
        incidence_.push_back(inc);
    }
    dim_ = affine_rank(verts_);
}

void Polytope::build_faces() const {
    if (faces_built_) return;
    faces_built_ = true;
    if (verts_.empty()) return;
    const std::size_t nv = verts_.size(), m = region_.constraints().size();
    std::vector<Bits> on(m, Bits(nv));
    for (std::size_t v = 0; v < nv; ++v)
        for (std::size_t c = 0; c < m; ++c)
            if (incidence_[v][c]) on[c].set(v);
    auto tight_of = [&](const Bits& vs) {
        Bits t(m);
        t.set();
        for (std::size_t v = vs.find_first(); v != Bits::npos; v = vs.find_next(v)) t &= incidence_[v];
        return t;
    };
    std::map<Bits, std::size_t> index;
    Bits all(nv);
    all.set();
    faces_.push_back({all, dim_, tight_of(all)});
    facets_.emplace_back();
    index[all] = 0;
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
        if (faces_[fi].dim == 0) continue;
        const Bits s = faces_[fi].verts;
        std::vector<Bits> cands;
        for (std::size_t c = 0; c < m; ++c) {
            if (faces_[fi].tight.test(c)) continue;
            Bits sub = s & on[c];
            if (sub.none() || sub == s) continue;
            if (std::find(cands.begin(), cands.end(), sub) == cands.end()) cands.push_back(sub);
        }
        std::vector<std::size_t> facet_ids;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            bool maximal = true;
            for (std::size_t j = 0; j < cands.size() && maximal; ++j)
                if (j != i && cands[i].is_proper_subset_of(cands[j])) maximal = false;
            if (!maximal) continue;
            auto it = index.find(cands[i]);
            std::size_t id;
            if (it == index.end()) {
                id = faces_.size();
                index[cands[i]] = id;
                faces_.push_back({cands[i], faces_[fi].dim - 1, tight_of(cands[i])});
                facets_.emplace_back();
            } else {
                id = it->second;
            }
            facet_ids.push_back(id);
        }
        facets_[fi] = facet_ids;
    }
}

const std::vector<Polytope::Face>& Polytope::faces() const {
    build_faces();
    return faces_;
}

std::vector<std::size_t> Polytope::facets_of(std::size_t face) const {
    build_faces();
    return facets_.at(face);
}

std::vector<std::vector<std::size_t>> Polytope::triangulate(std::size_t face) const {
    const Face& fc = faces_[face];
    std::size_t apex = fc.verts.find_first();
    if (fc.dim == 0) return {{apex}};
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t g : facets_[face]) {
        if (faces_[g].verts.test(apex)) continue;
        for (auto s : triangulate(g)) {
            s.push_back(apex);
            out.push_back(std::move(s));
        }
    }
    return out;
}

AlgebraicNumber Polytope::volume() const {
    const Field& f = region_.field();
    const std::size_t n = region_.dim();
    AlgebraicNumber vol(f);
    if (verts_.empty() || dim_ < static_cast<int>(n)) return vol;
    build_faces();
    Rational fact = 1;
    for (std::size_t k = 2; k <= n; ++k) fact *= static_cast<long>(k);
    for (const auto& s : triangulate(0)) {
        FMatrix m(f, n, n);
        for (std::size_t i = 1; i <= n; ++i) {
            FVector d = sub(verts_[s[i]], verts_[s[0]]);
            for (std::size_t k = 0; k < n; ++k) m(i - 1, k) = d[k];
        }
        vol += abs(det(m));
    }
    return vol * (Rational(1) / fact);
}

int Polytope::euler_cs() const {
    build_faces();
    int chi = 0;
    const auto& cons = region_.constraints();
    for (const auto& fc : faces_) {
        bool included = true;
        for (std::size_t c = 0; c < cons.size() && included; ++c)
            if (cons[c].strict && fc.tight.test(c)) included = false;
        if (included) chi += (fc.dim % 2 == 0) ? 1 : -1;
    }
    return chi;
}

std::vector<FVector> vertices(const HalfOpenRegion& r, bool require_bounded) {
    if (require_bounded || is_bounded(r)) return Polytope(r).vertices();
    const Field& f = r.field();
    const std::size_t n = r.dim(), m = r.constraints().size();
    auto weak = weak_of(r.constraints());
    if (!lp_feasible(f, n, weak)) return {};
    // Vertices of an unbounded closure: box vertices whose original tight
    // normals have full rank, once the box stops cutting them.
    AlgebraicNumber bound = initial_bound(f, weak);
    std::vector<FVector> prev;
    for (int round = 0; round < 40; ++round) {
        auto vs = dd_box(f, n, weak, bound);
        std::vector<FVector> pts;
        bool touching = false;
        for (const auto& v : vs) {
            std::vector<FVector> normals;
            for (std::size_t i = 0; i < m; ++i)
                if (v.inc[i]) normals.push_back(weak[i].normal);
            if (normals.empty() || rank_of(normals) < n) continue;
            if (touches_box(v, m)) touching = true;
            pts.push_back(v.x);
        }
        if (!touching && round > 0 && pts.size() == prev.size()) return pts;
        prev = pts;
        bound *= Rational(4);
    }
    throw ResourceError("vertex enumeration of an unbounded region did not stabilise");
}

AlgebraicNumber exact_volume(const HalfOpenRegion& r) {
    Polytope p(r);
    if (p.empty()) return AlgebraicNumber(r.field());
    return p.volume();
}

int euler_cs(const HalfOpenRegion& r) {
    Polytope p(r);
    if (p.empty()) return 0;
    return p.euler_cs();
}

// ---------------------------------------------------------------------------
// Intrinsic volumes.

IntrinsicVector2D intrinsic_vector_2d(const HalfOpenRegion& r) {
    if (r.dim() != 2) throw DomainError("intrinsic_vector_2d needs a planar region");
    const Field& f = r.field();
    Polytope p(r);
    IntrinsicVector2D out{0, SurdSum(f), AlgebraicNumber(f)};
    if (p.empty()) return out;
    const auto& faces = p.faces();
    const auto& cons = r.constraints();
    const auto& vs = p.vertices();
    auto edge_length = [&](const Polytope::Face& fc) {
        std::size_t a = fc.verts.find_first(), b = fc.verts.find_next(a);
        FVector d = sub(vs[b], vs[a]);
        return SurdSum::length(d[0], d[1]);
    };
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        const auto& fc = faces[fi];
        bool included = true;
        for (std::size_t c = 0; c < cons.size() && included; ++c)
            if (cons[c].strict && fc.tight.test(c)) included = false;
        if (!included) continue;
        if (fc.dim == 0) {
            out.chi += 1;
        } else if (fc.dim == 1) {
            out.chi -= 1;
            out.v1 += edge_length(fc);
        } else {
            out.chi += 1;
            SurdSum perimeter(f);
            for (std::size_t g : p.facets_of(fi)) perimeter += edge_length(faces[g]);
            out.v1 -= perimeter * AlgebraicNumber(f, Rational(1, 2));
            out.v2 += p.volume();
        }
    }
    return out;
}

nlohmann::json ValuationVector::to_json() const {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : intrinsic) v.push_back(pizza::to_json(x));
    return {{"chi", chi}, {"V", v}};
}

ValuationVector box_intrinsic_vector(const Field& f, const std::vector<AlgebraicNumber>& edges, bool half_open,
                                     std::size_t n) {
    if (edges.size() > n) throw DomainError("box has more edges than the ambient dimension");
    ValuationVector out;
    out.intrinsic.assign(n, AlgebraicNumber(f));
    if (half_open) {
        // Every proper face is cut away; only the top-dimensional measure survives.
        out.chi = edges.empty() ? 1 : 0;
        if (!edges.empty()) {
            AlgebraicNumber prod(f, Rational(1));
            for (const auto& e : edges) prod *= e;
            out.intrinsic[edges.size() - 1] = prod;
        }
        return out;
    }
    out.chi = 1;
    // elementary symmetric polynomials e_1..e_k
    std::vector<AlgebraicNumber> e(edges.size() + 1, AlgebraicNumber(f));
    e[0] = AlgebraicNumber(f, Rational(1));
    for (const auto& x : edges)
        for (std::size_t k = edges.size(); k >= 1; --k) e[k] += e[k - 1] * x;
    for (std::size_t k = 1; k <= edges.size(); ++k) out.intrinsic[k - 1] = e[k];
    return out;
}

// ---------------------------------------------------------------------------
// Cell unions.

namespace {

struct ClipVertex {
    double x, y;
    long next_line;  // line of the edge leaving this vertex, negative on the box
};

// Float clip of a big square by the closed half-planes. It only proposes: a
// nonempty verdict is backed by an exact interior point, an empty one by an
// exact infeasible triple (Helly in the plane).
struct PlaneClip {
    enum class Status { Empty, Nonempty, Unknown } status = Status::Unknown;
    std::vector<ClipVertex> poly;
    std::vector<double> nx, ny, b;
};

PlaneClip clip_plane(const Field& f, const std::vector<LinearConstraint>& cons) {
    PlaneClip pc;
    const std::size_t k = cons.size();
    if (k < 3) return pc;
    pc.nx.resize(k), pc.ny.resize(k), pc.b.resize(k);
    double scale = 1;
    for (std::size_t i = 0; i < k; ++i) {
        double x = cons[i].normal[0].to_double(), y = cons[i].normal[1].to_double();
        double len = std::hypot(x, y);
        if (len == 0) return pc;
        pc.nx[i] = x / len, pc.ny[i] = y / len, pc.b[i] = cons[i].offset.to_double() / len;
        scale = std::max(scale, std::abs(pc.b[i]));
    }
    const double big = 1e4 * scale, tol = 1e-9 * scale;
    std::vector<ClipVertex> poly{{-big, -big, -1}, {big, -big, -2}, {big, big, -3}, {-big, big, -4}}, out;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t n = poly.size();
        std::vector<double> d(n);
        std::size_t arg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = pc.nx[j] * poly[i].x + pc.ny[j] * poly[i].y - pc.b[j];
            if (d[i] > d[arg]) arg = i;
        }
        if (d[arg] < -tol) {
            long l1 = poly[(arg + n - 1) % n].next_line, l2 = poly[arg].next_line;
            if (l1 >= 0 && l2 >= 0) {
                std::vector<LinearConstraint> triple{cons[static_cast<std::size_t>(l1)],
                                                     cons[static_cast<std::size_t>(l2)], cons[j]};
                if (!lp_feasible(f, 2, triple)) pc.status = PlaneClip::Status::Empty;
            }
            return pc;
        }
        out.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const ClipVertex& p = poly[i];
            const ClipVertex& q = poly[(i + 1) % n];
            double dp = d[i], dq = d[(i + 1) % n];
            if (dp >= 0) out.push_back(p);
            if ((dp >= 0) != (dq >= 0)) {
                double t = dp / (dp - dq);
                out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y), dp >= 0 ? static_cast<long>(j) : p.next_line});
            }
        }
        poly.swap(out);
        if (poly.size() < 3) return pc;
    }
    double area = 0, cx = 0, cy = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        area += p.x * q.y - q.x * p.y;
        cx += p.x, cy += p.y;
    }
    if (!(area > 1e-9 * scale * scale)) return pc;
    cx /= static_cast<double>(poly.size());
    cy /= static_cast<double>(poly.size());
    if (!HalfOpenRegion(f, 2, cons).contains({AlgebraicNumber(f, Rational(cx)), AlgebraicNumber(f, Rational(cy))}))
        return pc;
    pc.status = PlaneClip::Status::Nonempty;
    pc.poly = std::move(poly);
    return pc;
}

// Plane cell with duplicates removed and redundant constraints dropped, each
// drop proved by an exact infeasible triple of two edge lines and the negated
// constraint. nullopt when empty.
std::optional<HalfOpenRegion> simplify_plane_cell(const HalfOpenRegion& r) {
    std::vector<LinearConstraint> cons;
    for (const auto& c : r.constraints()) {
        auto same = std::find_if(cons.begin(), cons.end(), [&](const LinearConstraint& d) {
            return d.offset == c.offset && d.normal == c.normal;
        });
        if (same == cons.end())
            cons.push_back(c);
        else
            same->strict = same->strict || c.strict;
    }
    PlaneClip pc = clip_plane(r.field(), cons);
    if (pc.status == PlaneClip::Status::Empty) return std::nullopt;
    HalfOpenRegion dedup(r.field(), 2, cons);
    if (pc.status == PlaneClip::Status::Unknown) {
        if (is_empty(dedup)) return std::nullopt;
        return dedup;
    }
    const std::size_t k = cons.size(), n = pc.poly.size();
    const auto& poly = pc.poly;
    std::vector<bool> edge(k, false), keep(k, true);
    for (const auto& v : poly)
        if (v.next_line >= 0) edge[static_cast<std::size_t>(v.next_line)] = true;
    for (std::size_t i = 0; i < k; ++i) {
        if (edge[i]) continue;
        auto val = [&](const ClipVertex& v) { return pc.nx[i] * v.x + pc.ny[i] * v.y; };
        std::size_t arg = 0;
        for (std::size_t v = 1; v < n; ++v)
            if (val(poly[v]) < val(poly[arg])) arg = v;
        long l1 = poly[(arg + n - 1) % n].next_line, l2 = poly[arg].next_line;
        if (l1 < 0 || l2 < 0) continue;
        std::vector<LinearConstraint> triple{cons[static_cast<std::size_t>(l1)], cons[static_cast<std::size_t>(l2)],
                                             negated(cons[i])};
        if (!lp_feasible(r.field(), 2, triple)) keep[i] = false;
    }
    std::vector<LinearConstraint> kept;
    for (std::size_t i = 0; i < k; ++i)
        if (keep[i]) kept.push_back(cons[i]);
    return HalfOpenRegion(r.field(), 2, std::move(kept));
}

}  // namespace

bool is_empty(const HalfOpenRegion& r) {
    if (r.dim() == 2) {
        PlaneClip pc = clip_plane(r.field(), r.constraints());
        if (pc.status != PlaneClip::Status::Unknown) return pc.status == PlaneClip::Status::Empty;
    }
    return !lp_feasible(r.field(), r.dim(), r.constraints());
}

namespace {

void push_cell(std::vector<HalfOpenRegion>& cells, const HalfOpenRegion& r) {
    if (r.dim() == 2) {
        if (auto s = simplify_plane_cell(r)) cells.push_back(std::move(*s));
    } else if (!is_empty(r)) {
        cells.push_back(r);
    }
}

}  // namespace

CellUnion::CellUnion(const HalfOpenRegion& r) : field_(r.field()), dim_(r.dim()) { push_cell(cells_, r); }

void CellUnion::add_disjoint(const HalfOpenRegion& r) {
    if (!field_) {
        field_ = r.field();
        dim_ = r.dim();
    }
    push_cell(cells_, r);
}

bool CellUnion::contains(const FVector& x) const {
    return std::any_of(cells_.begin(), cells_.end(), [&](const HalfOpenRegion& c) { return c.contains(x); });
}

nlohmann::json CellUnion::to_json() const {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : cells_) cells.push_back(c.to_json());
    return {{"N", field_ ? field_->N : 0}, {"dim", dim_}, {"cells", cells}};
}

CellUnion CellUnion::from_json(const nlohmann::json& j) {
    try {
        CellUnion u(make_field(j.at("N").get<int>()), j.at("dim").get<std::size_t>());
        for (const auto& c : j.at("cells")) u.cells_.push_back(HalfOpenRegion::from_json(c));
        return u;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad cell union JSON: ") + e.what());
    }
}

CellUnion subtract(const HalfOpenRegion& a, const HalfOpenRegion& b) {
    CellUnion out(a.field(), a.dim());
    if (is_empty(intersect(a, b))) {
        out.add_disjoint(a);
        return out;
    }
    HalfOpenRegion prefix = a;
    for (const auto& c : b.constraints()) {
        HalfOpenRegion piece = prefix;
        piece.add(negated(c));
        out.add_disjoint(piece);
        prefix.add(c);
    }
    return out;
}

CellUnion subtract(const CellUnion& a, const HalfOpenRegion& b) {
    CellUnion out(a.field(), a.dim());
    for (const auto& cell : a.cells()) {
        CellUnion part = subtract(cell, b);
        for (const auto& piece : part.cells()) out.add_disjoint(piece);
    }
    return out;
}

CellUnion subtract(const CellUnion& a, const CellUnion& b) {
    CellUnion out = a;
    for (const auto& cell : b.cells()) out = subtract(out, cell);
    return out;
}

CellUnion intersect(const CellUnion& a, const HalfOpenRegion& b) {
    CellUnion out(a.field(), a.dim());
    for (const auto& cell : a.cells()) out.add_disjoint(intersect(cell, b));
    return out;
}

CellUnion intersect(const CellUnion& a, const CellUnion& b) {
    CellUnion out(a.field(), a.dim());
    for (const auto& x : a.cells())
        for (const auto& y : b.cells()) out.add_disjoint(intersect(x, y));
    return out;
}

CellUnion transform(const CellUnion& u, const FMatrix& m, const FVector& t) {
    CellUnion out(u.field(), u.dim());
    for (const auto& c : u.cells()) out.add_disjoint(transform(c, m, t));
    return out;
}

bool is_empty(const CellUnion& u) {
    return std::all_of(u.cells().begin(), u.cells().end(), [](const HalfOpenRegion& c) { return is_empty(c); });
}

bool is_subset(const CellUnion& a, const CellUnion& b) { return is_empty(subtract(a, b)); }

bool set_equal(const CellUnion& a, const CellUnion& b) { return is_subset(a, b) && is_subset(b, a); }

bool disjoint(const CellUnion& a, const CellUnion& b) {
    for (const auto& x : a.cells())
        for (const auto& y : b.cells())
            if (!is_empty(intersect(x, y))) return false;
    return true;
}

AlgebraicNumber exact_volume(const CellUnion& u) {
    AlgebraicNumber v(u.field());
    for (const auto& c : u.cells()) v += exact_volume(c);
    return v;
}

int euler_cs(const CellUnion& u) {
    int chi = 0;
    for (const auto& c : u.cells()) chi += euler_cs(c);
    return chi;
}

}  // namespace pizza
