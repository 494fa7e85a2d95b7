#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pizza/dihedral.hpp"
#include "pizza/surd.hpp"

namespace pizza {

/// base + sum [0,1] v_i, or base + sum (0,1] v_i when half_open.
struct Parallelotope {
    FVector base;
    std::vector<FVector> edges;
    bool half_open = false;

    std::size_t dim() const { return base.size(); }
    std::size_t rank() const { return edges.size(); }
    HalfOpenRegion region() const;
    nlohmann::json to_json() const;
    static Parallelotope from_json(const nlohmann::json& j, const Field& f);
};
/// DomainError unless the edges are linearly independent.
Parallelotope make_parallelotope(FVector base, std::vector<FVector> edges, bool half_open = false);

/// One closed convex piece of the source and the isometry placing it in the target.
struct BgPiece {
    std::string id;
    std::vector<FVector> vertices;  // counter-clockwise
    AffineIsometry g;
    HalfOpenRegion region() const { return polygon_region(vertices); }
    std::vector<FVector> image() const;
};

/// Scissors congruence between two closed convex polygons, boundaries ignored.
struct BgCertificate {
    std::string kind;
    Field field;
    std::vector<FVector> source, target;  // counter-clockwise
    std::vector<BgPiece> pieces;
    bool translation_only = true;

    HalfOpenRegion source_region() const { return polygon_region(source); }
    HalfOpenRegion target_region() const { return polygon_region(target); }
    /// Pieces whose isometry is not the identity.
    std::size_t moved() const;
    nlohmann::json to_json() const;
    static BgCertificate from_json(const nlohmann::json& j);
};

struct BgVerdict {
    bool ok = true;
    std::vector<std::string> failures;
    AlgebraicNumber source_area, target_area, piece_area;
    nlohmann::json to_json() const;
};
/// Pieces inside the source with disjoint interiors and full total area, isometries
/// orthogonal (identity linear part if translation_only), images likewise tiling the target.
BgVerdict verify_bg(const BgCertificate& c);

/// Rectangle [x0, x0 + w] x [y0, y0 + h] as counter-clockwise vertices.
std::vector<FVector> rectangle_vertices(const Field& f, const AlgebraicNumber& w, const AlgebraicNumber& h,
                                        const AlgebraicNumber& x0, const AlgebraicNumber& y0);

BgCertificate identity_certificate(const std::vector<FVector>& poly);
/// The whole polygon moved by one isometry.
BgCertificate moved_certificate(const std::vector<FVector>& poly, const AffineIsometry& g);
/// first: A -> B, second: B -> C gives A -> C (pieces are the common refinement).
BgCertificate compose(const BgCertificate& first, const BgCertificate& second);
BgCertificate invert(const BgCertificate& c);

/// P(b; e, f) -> P(b; e, f - lambda e) by strips along e, translations only.
BgCertificate shear_certificate(const FVector& b, const FVector& e, const FVector& f, const AlgebraicNumber& lambda);
/// Closed parallelogram -> rectangle on the same base edge (edges[0]) with the same height.
BgCertificate parallelogram_to_rectangle(const Parallelotope& p);
/// [0,w1]x[0,h1] -> [0,w2]x[0,h2], h2 = w1 h1 / w2, translations only. Halving steps
/// until w1 < 2 w2, then the three-piece cut along the line (w1,0)-(0,h2).
BgCertificate rectangle_retile(const AlgebraicNumber& w1, const AlgebraicNumber& h1, const AlgebraicNumber& w2);
/// Convex polygon -> [0,width] x [0, area/width]: fan triangulation, each triangle to a
/// parallelogram by a half turn, to an axis-parallel rectangle by two shears, retiled and stacked.
BgCertificate polygon_to_rectangle(const std::vector<FVector>& poly, const AlgebraicNumber& width);

struct NormalForm {
    AlgebraicNumber volume;
    Parallelotope box;  // [0,1]^(n-1) x [0, volume] with the flag of the input
    nlohmann::json to_json() const;
};
/// Full-rank parallelotopes only (n <= 4); DomainError on rank deficiency.
NormalForm parallelotope_normal_form(const Parallelotope& p);

/// (V0, V1, ..., Vn) of a signed combination of parallelotopes in R^n.
struct KZVector {
    int chi = 0;
    std::vector<SurdSum> v;  // V_1 .. V_n
    nlohmann::json to_json() const;
};
using SignedParallelotope = std::pair<int, Parallelotope>;
KZVector kz_vector(const std::vector<SignedParallelotope>& items, const Field& f, std::size_t n);
bool kz_equal(const KZVector& x, const KZVector& y);
/// sum of the signed volumes of the full-rank items by normal form; the class lies in the
/// flat subgroup exactly when this vanishes.
AlgebraicNumber normal_form_total(const std::vector<SignedParallelotope>& items, const Field& f, std::size_t n);

/// {"items": [{"sign": 1, "base": [...], "edges": [[...], ...], "half_open": true}, ...]};
/// coordinates are numbers or exact strings such as "1/3".
std::vector<SignedParallelotope> parse_kz_items(const nlohmann::json& j, const Field& f);
/// {"vertices": [[x, y], ...]}
std::vector<FVector> parse_polygon(const nlohmann::json& j, const Field& f);
/// The isometry x -> L x + t, labelled as a translation, a half turn or a congruence.
AffineIsometry affine_map(const FMatrix& linear, const FVector& t);

}  // namespace pizza
