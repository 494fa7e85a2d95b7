#pragma once

#include <string>
#include <vector>

#include "pizza/pizza.hpp"

namespace pizza {

/// The plane with the lines of I2(2m): L_i has direction u(i) at angle i pi/2m,
/// sector c is the open cone between L_c and L_{c+1}, with sign (-1)^c.
/// Indices are taken mod 4m (u(i + 2m) = -u(i)).
class DihedralFrame {
public:
    DihedralFrame(int m, Field f);

    int m() const { return m_; }
    const Field& field() const { return field_; }
    int sectors() const { return 4 * m_; }
    int wrap(int c) const;

    const FVector& u(int i) const;
    /// Left normal of L_i, equal to u(i + m).
    const FVector& normal(int i) const { return u(i + m_); }
    HalfOpenRegion sector(int c) const;
    int sign(int c) const { return (wrap(c) % 2 == 0) ? 1 : -1; }
    /// Sector whose open cone contains x, or -1 when x lies on a line.
    int sector_of(const FVector& x) const;
    /// Sector whose closure contains x (the smallest index when x is on a line, -1 for the origin).
    int closed_sector_of(const FVector& x) const;

    /// Rotation by k pi/2m.
    FMatrix rotation(int k) const;
    /// Reflection fixing the line spanned by u(k).
    FMatrix reflection(int k) const;
    /// The 4m linear elements of W.
    std::vector<FMatrix> group() const;

private:
    int m_;
    Field field_;
    std::vector<FVector> dirs_;
};

/// Smallest field holding the frame for m together with the numbers in `a_text`.
Field dihedral_field(int m, const std::string& a_text = "");

struct AffineIsometry {
    enum class Kind { Rotation, Reflection, Congruence };
    Kind kind = Kind::Congruence;
    FMatrix linear;
    FVector translation;
    /// Rotation angle step * pi/2m, or the mirror direction u(step).
    int step = 0;
    /// Fixed point named by the label.
    FVector center;
    std::string label;

    FVector apply(const FVector& x) const;
    HalfOpenRegion apply(const HalfOpenRegion& r) const;
    CellUnion apply(const CellUnion& u) const;
    nlohmann::json to_json() const;
    static AffineIsometry from_json(const nlohmann::json& j);
};

AffineIsometry rotation_about(const DihedralFrame& fr, const FVector& center, int step, std::string label);
AffineIsometry reflection_through(const DihedralFrame& fr, const FVector& center, int step, std::string label);
/// The isometry sending p[i] to q[i] (three affinely independent points); DomainError if none exists.
AffineIsometry congruence_from_points(const std::vector<FVector>& p, const std::vector<FVector>& q, std::string label);

/// Orthogonality and agreement with the label (angle, mirror, fixed point).
std::vector<std::string> isometry_problems(const DihedralFrame& fr, const AffineIsometry& g);

struct DissectionPiece {
    std::string id;
    std::string label;
    int sign = 1;
    int chamber = -1;  // sector of origin, -1 if none
    /// Contained in a line: has no area and is not paired in K_0.
    bool negligible = false;
    CellUnion region;
    nlohmann::json to_json() const;
};

struct Pairing {
    std::string src, dst;
    AffineIsometry g;
};

struct PartitionClaim {
    std::string label;
    CellUnion region;
    std::vector<std::string> pieces;
};

struct DissectionCertificate {
    std::string kind;
    int m = 2;
    Field field;
    FVector a;        // canonical placement
    FVector a_input;  // as given
    FMatrix placement;  // a = placement * a_input, an element of W
    std::vector<DissectionPiece> pieces;
    std::vector<Pairing> pairings;
    std::vector<PartitionClaim> partitions;
    /// W_a-stable polygon used to bound the unbounded pieces for measure checks.
    HalfOpenRegion proxy;

    const DissectionPiece& piece(const std::string& id) const;
    bool has_piece(const std::string& id) const;
    nlohmann::json to_json() const;
    static DissectionCertificate from_json(const nlohmann::json& j);
};

struct DihedralPlacement {
    FMatrix w;
    int det = 1;
    FVector a;
    bool on_line = false;
};
/// w in W with w(a) in the closure of sector m-1.
DihedralPlacement canonicalize_dihedral(const DihedralFrame& fr, const FVector& a);

struct R0Polygon {
    HalfOpenRegion region;         // closed
    std::vector<FVector> vertices;  // counter-clockwise
    std::vector<FVector> orbit;     // distinct points u(0), u in W_a
    std::vector<FVector> P;         // P_i, 0 <= i < 2m
};
/// conv{u(0) : u in W_a}. `a` must lie in the closure of sector m-1 and, unless
/// `degenerate`, off every line.
R0Polygon build_R0(const DihedralFrame& fr, const FVector& a, bool degenerate = false);

/// The pieces of the outer dissection for the even or odd apex family. parity 0 is
/// the lemma's dissection (apexes P_k, k odd), parity 1 the one used for odd shares.
DissectionCertificate outer_cancellation_certificate(const DihedralFrame& fr, const FVector& a_input, int parity = 0);
DissectionCertificate frederickson_certificate(const DihedralFrame& fr, const FVector& a_input);

struct NamedCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};
/// Angles of the Q_i at the P_i and the rotation law Q_{2j+1} = rot(a, pi/m) Q_{2j}.
std::vector<NamedCheck> frederickson_geometry_checks(const DihedralFrame& fr, const FVector& a_input);

struct Verdict {
    bool ok = true;
    std::vector<std::string> failures;
    std::size_t pairings_checked = 0;
    std::size_t partitions_checked = 0;
    nlohmann::json to_json() const;
};
Verdict verify_certificate(const DissectionCertificate& cert);

/// Signed measure of the pieces inside `body` (pieces in the same frame as body).
AlgebraicNumber signed_piece_sum(const DissectionCertificate& cert, const HalfOpenRegion& body, Valuation v);

/// Regular 4m-gon with circumradius rho centred at c; stable under W_c.
HalfOpenRegion regular_polygon(const DihedralFrame& fr, const FVector& c, const AlgebraicNumber& rho);

struct SignedRegion {
    int sign = 1;
    std::string label;
    CellUnion region;
};
struct ProductReduction {
    std::vector<SignedRegion> terms;
    bool contained = false;     // the product polytope lies in K + a
    AlgebraicNumber total;      // sum of signed term volumes
    AlgebraicNumber direct;     // sum_T (-1)^T Vol(T cap (K+a))
    /// For at least one dihedral factor: every term has the volume of the all-plus term.
    bool balanced = false;
    nlohmann::json to_json() const;
};
/// Rewrites the pizza of an A1^r x I2(2m_1) x ... arrangement as the signed list of products of
/// segments (0, 2(a,e)e] and R_{0,+-} polygons. K must be a polytope.
ProductReduction product_reduction(const Arrangement& arr, const Body& k, const FVector& a);

struct ShareReport {
    int m = 0;
    int r = 0;
    int other = 0;
    bool exact = true;
    std::vector<AlgebraicNumber> exact_shares;  // polygon K
    std::vector<AlgebraicNumber> r0_shares;     // R0(a) part
    std::vector<double> estimates;              // ball: mc
    std::vector<double> diff_se;                // se of share_r - share_j
    std::uint64_t samples = 0;
    bool equal = false;
    DissectionCertificate certificate;  // outside-R0 pairings for shares r and other
    Verdict certificate_verdict;
    bool share_pairing_ok = false;
    nlohmann::json to_json() const;
};
/// Shares sum_i T_{r+mi} cap (K+a) of I2(2m), m even.
ShareReport hirschhorn_shares(int m, int r, const Body& k, const FVector& a, const Method& method);

}  // namespace pizza
