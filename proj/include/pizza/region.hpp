#pragma once

#include <boost/dynamic_bitset.hpp>

#include <optional>
#include <string>
#include <vector>

#include "pizza/field.hpp"
#include "pizza/lp.hpp"
#include "pizza/surd.hpp"

namespace pizza {

/// Convex polyhedron cut out by individually flagged half-spaces.
class HalfOpenRegion {
public:
    HalfOpenRegion() = default;
    HalfOpenRegion(Field f, std::size_t dim) : field_(std::move(f)), dim_(dim) {}
    HalfOpenRegion(Field f, std::size_t dim, std::vector<LinearConstraint> cons);

    const Field& field() const { return field_; }
    std::size_t dim() const { return dim_; }
    const std::vector<LinearConstraint>& constraints() const { return constraints_; }

    /// (x, normal) > offset (strict) or >= offset.
    HalfOpenRegion& add(FVector normal, AlgebraicNumber offset, bool strict);
    HalfOpenRegion& add(const LinearConstraint& c) { return add(c.normal, c.offset, c.strict); }

    bool contains(const FVector& x) const;
    HalfOpenRegion closure() const;
    /// All constraints made strict (the interior when full-dimensional).
    HalfOpenRegion interior() const;

    nlohmann::json to_json() const;
    static HalfOpenRegion from_json(const nlohmann::json& j);

private:
    Field field_;
    std::size_t dim_ = 0;
    std::vector<LinearConstraint> constraints_;
};

HalfOpenRegion intersect(const HalfOpenRegion& a, const HalfOpenRegion& b);
bool is_empty(const HalfOpenRegion& r);
std::optional<FVector> sample_point(const HalfOpenRegion& r);
/// Recession cone of the closure is {0} (true for empty closures).
bool is_bounded(const HalfOpenRegion& r);

/// Axis box with per-side flags: lo_i (<|<=) x_i (<|<=) hi_i.
HalfOpenRegion box_region(const Field& f, const FVector& lo, const FVector& hi, bool lo_strict, bool hi_strict);
/// base + sum (0,1] v_i (half-open) or [0,1] v_i, for linearly independent v_i spanning R^n.
HalfOpenRegion parallelotope_region(const FVector& base, const std::vector<FVector>& edges, bool half_open);
/// Image under x -> M x + t with M invertible.
HalfOpenRegion transform(const HalfOpenRegion& r, const FMatrix& m, const FVector& t);

/// Complement of one constraint as a constraint.
LinearConstraint negated(const LinearConstraint& c);

/// Face lattice, vertices and measures of the closure of a bounded region.
class Polytope {
public:
    struct Face {
        boost::dynamic_bitset<> verts;
        int dim = 0;
        boost::dynamic_bitset<> tight;  // constraints tight on the whole face
    };

    /// Throws UnboundedError for unbounded closures.
    explicit Polytope(const HalfOpenRegion& r);

    const HalfOpenRegion& region() const { return region_; }
    const std::vector<FVector>& vertices() const { return verts_; }
    bool empty() const { return verts_.empty(); }
    int dim() const { return dim_; }
    const std::vector<Face>& faces() const;

    /// n-volume (0 when not full-dimensional).
    AlgebraicNumber volume() const;
    /// Euler characteristic with compact support of the region itself.
    int euler_cs() const;

    /// Facets of a face, as indices into faces().
    std::vector<std::size_t> facets_of(std::size_t face) const;

private:
    void build_faces() const;
    std::vector<std::vector<std::size_t>> triangulate(std::size_t face) const;

    HalfOpenRegion region_;
    std::vector<FVector> verts_;
    std::vector<boost::dynamic_bitset<>> incidence_;  // per vertex, over constraints
    int dim_ = -1;
    mutable std::vector<Face> faces_;
    mutable std::vector<std::vector<std::size_t>> facets_;
    mutable bool faces_built_ = false;
};

/// Vertices of the closure. With require_bounded=false, unbounded pointed
/// closures report their vertices (possibly none).
std::vector<FVector> vertices(const HalfOpenRegion& r, bool require_bounded = true);
AlgebraicNumber exact_volume(const HalfOpenRegion& r);
int euler_cs(const HalfOpenRegion& r);

/// Affine rank (dimension of the affine hull) of a point set; -1 if empty.
int affine_rank(const std::vector<FVector>& pts);

/// Extreme points of a planar point set in counter-clockwise order (exact monotone chain).
std::vector<FVector> convex_hull_2d(std::vector<FVector> pts);
/// Closed convex polygon from counter-clockwise vertices (at least 3, not collinear).
HalfOpenRegion polygon_region(const std::vector<FVector>& ccw);
/// Twice the signed area of the triangle (o, p, q).
AlgebraicNumber orient_2d(const FVector& o, const FVector& p, const FVector& q);

/// (chi, V1, V2) of a bounded region in the plane, flags respected.
struct IntrinsicVector2D {
    int chi = 0;
    SurdSum v1;
    AlgebraicNumber v2;
};
IntrinsicVector2D intrinsic_vector_2d(const HalfOpenRegion& r);

/// (V0, V1, ..., Vn) where the V_i, i >= 1, are exact field elements.
struct ValuationVector {
    int chi = 0;
    std::vector<AlgebraicNumber> intrinsic;  // V1..Vn
    nlohmann::json to_json() const;
};
/// Rectangular box with the given edge lengths (k <= n entries, padded with zero edges).
ValuationVector box_intrinsic_vector(const Field& f, const std::vector<AlgebraicNumber>& edges, bool half_open,
                                     std::size_t n);

/// Finite disjoint union of convex half-open cells.
class CellUnion {
public:
    CellUnion() = default;
    CellUnion(Field f, std::size_t dim) : field_(std::move(f)), dim_(dim) {}
    explicit CellUnion(const HalfOpenRegion& r);

    const std::vector<HalfOpenRegion>& cells() const { return cells_; }
    std::size_t dim() const { return dim_; }
    const Field& field() const { return field_; }
    void add_disjoint(const HalfOpenRegion& r);
    bool contains(const FVector& x) const;

    nlohmann::json to_json() const;
    static CellUnion from_json(const nlohmann::json& j);

private:
    Field field_;
    std::size_t dim_ = 0;
    std::vector<HalfOpenRegion> cells_;
};

/// a minus b as disjoint cells.
CellUnion subtract(const HalfOpenRegion& a, const HalfOpenRegion& b);
CellUnion subtract(const CellUnion& a, const HalfOpenRegion& b);
CellUnion subtract(const CellUnion& a, const CellUnion& b);
CellUnion intersect(const CellUnion& a, const HalfOpenRegion& b);
CellUnion intersect(const CellUnion& a, const CellUnion& b);
CellUnion transform(const CellUnion& u, const FMatrix& m, const FVector& t);
bool is_empty(const CellUnion& u);
bool is_subset(const CellUnion& a, const CellUnion& b);
bool set_equal(const CellUnion& a, const CellUnion& b);
bool disjoint(const CellUnion& a, const CellUnion& b);
/// Sum over cells (cells must be bounded).
AlgebraicNumber exact_volume(const CellUnion& u);
int euler_cs(const CellUnion& u);

}  // namespace pizza
