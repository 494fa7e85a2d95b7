#pragma once

#include <cstdint>
#include <map>
#include <memory>

#include "pizza/two_structure.hpp"

namespace pizza {

/// Coxeter arrangement {H_alpha : alpha in Phi+} with its chambers and signs.
class Arrangement {
public:
    Arrangement(const std::string& type, int field_hint = 0);
    explicit Arrangement(std::shared_ptr<const PseudoRootSystem> system);

    const PseudoRootSystem& system() const { return *system_; }
    std::shared_ptr<const PseudoRootSystem> system_ptr() const { return system_; }
    const CoxeterGroup& group() const { return *group_; }
    const Field& field() const { return system_->field; }
    std::size_t dim() const { return system_->ambient_dim; }
    const std::vector<Chamber>& chambers() const { return chambers_; }
    /// 2-structures with epsilon, computed on first use.
    const std::vector<TwoStructure>& two_structures() const;

private:
    std::shared_ptr<const PseudoRootSystem> system_;
    std::shared_ptr<CoxeterGroup> group_;
    std::vector<Chamber> chambers_;
    mutable std::shared_ptr<std::vector<TwoStructure>> structures_;
};

enum class Valuation { Volume, Chi };
Valuation parse_valuation(const std::string& s);
std::string to_string(Valuation v);

struct Body {
    enum class Kind { Ball, Annulus, Orbit, Box, Explicit };
    Kind kind = Kind::Ball;
    AlgebraicNumber r1, r2;  // ball: r1 = r2 = r
    AlgebraicNumber c;       // box half-width
    FVector p;               // orbit seed
    HalfOpenRegion hrep;     // polytope kinds, centered at the origin

    bool polytope() const { return kind == Kind::Orbit || kind == Kind::Box || kind == Kind::Explicit; }
    std::string label() const;
    nlohmann::json to_json() const;
};

Body ball_body(const Field& f, const AlgebraicNumber& r);
Body annulus_body(const Field& f, const AlgebraicNumber& r1, const AlgebraicNumber& r2);
Body box_body(const Field& f, std::size_t n, const AlgebraicNumber& c);
/// conv(W p), cut out by the W-images of the extreme rays of the base chamber.
Body orbit_body(const CoxeterGroup& w, const FVector& p);
Body explicit_body(const HalfOpenRegion& r);
/// "ball:r=1", "annulus:1,2", "orbit:p=2,0.5", "box:c=1".
Body parse_body(const std::string& spec, const Arrangement& arr);
/// Field needed for the numbers inside a shape spec.
int body_field_requirement(const std::string& spec);

/// W-images of the extreme rays of the closed base chamber (essential systems).
std::vector<FVector> base_chamber_rays(const CoxeterGroup& w);
/// w(K) = K as constraint sets, for every reflection in W.
bool is_w_stable(const Body& k, const CoxeterGroup& w);
/// -id in W, K W-stable and hull{w(a)} inside K; HypothesisError names the failing w(a).
void check_pizza_hypotheses(const Arrangement& arr, const Body& k, const FVector& a);

struct PizzaTerm {
    std::size_t chamber = 0;
    int sign = 1;
    AlgebraicNumber value;
};
struct ExactPizza {
    AlgebraicNumber total;
    std::vector<PizzaTerm> terms;
};
/// sum_T (-1)^T mu(T cap body) over open chambers; body is already translated.
ExactPizza exact_pizza_serial(const Arrangement& arr, const HalfOpenRegion& body, Valuation v);
ExactPizza exact_pizza_parallel(const Arrangement& arr, const HalfOpenRegion& body, Valuation v);

struct McConfig {
    std::uint64_t samples = 10000000;
    std::uint64_t seed = 42;
    std::uint64_t shard = 1u << 16;
    double slab = 1e-12;
};
struct McPizza {
    double estimate = 0;
    double se = 0;
    std::uint64_t samples = 0;
    std::uint64_t discarded = 0;
    std::int64_t signed_hits = 0;
    std::uint64_t hits = 0;
};
/// Uniform samples in a ball or annulus centred at a. Shard seeds are derived from the
/// seed and the shard index, so both kernels return identical results.
McPizza mc_pizza_serial(const Arrangement& arr, const Body& k, const FVector& a, const McConfig& cfg);
McPizza mc_pizza_parallel(const Arrangement& arr, const Body& k, const FVector& a, const McConfig& cfg);
double ball_volume(std::size_t n, double r);
/// Seed of shard `index`; every sampler in the library derives its streams this way.
std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t index);

struct Method {
    bool exact = true;
    McConfig mc;
    /// Allow exact sums over more than kHeavyChambers chambers.
    bool heavy = false;
};
inline constexpr std::size_t kHeavyChambers = 400;
Method parse_method(const std::string& s);

struct PizzaResult {
    bool exact = true;
    AlgebraicNumber value;
    double estimate = 0;
    double se = 0;
    std::vector<PizzaTerm> terms;
    McPizza mc;
    nlohmann::json to_json(bool with_terms = false) const;
};
/// Checks the hypotheses, then dispatches to the parallel kernels.
PizzaResult pizza_sum(const Arrangement& arr, const Body& k, const FVector& a, Valuation v, const Method& m);

struct A1nClosedForm {
    AlgebraicNumber value;  // prod 2(a, e_i) over Phi+
    HalfOpenRegion region;  // prod (0, 2(a,e_i) e_i]
};
/// DomainError unless the system is of type A1^n.
A1nClosedForm a1n_closed_form(const Arrangement& arr, const FVector& a);

/// Integer identity at a point off all walls; DomainError on a wall.
struct PointwiseCheck {
    int lhs = 0;
    int rhs = 0;
    bool ok() const { return lhs == rhs; }
};
PointwiseCheck expansion_check_pointwise(const Arrangement& arr, const std::vector<TwoStructure>& ts, const FVector& x);

struct ValuationCheck {
    AlgebraicNumber lhs, rhs;
    bool ok() const { return lhs == rhs; }
};
/// sum_T (-1)^T mu(T cap K) against sum_phi eps(phi) sum_T' (-1)^T' mu(T' cap K), any polytope K.
ValuationCheck expansion_check_valuation(const Arrangement& arr, const std::vector<TwoStructure>& ts,
                                         const HalfOpenRegion& k, Valuation v);
/// Chambers of H_phi with signs relative to phi+.
std::vector<Chamber> structure_chambers(const Arrangement& arr, const TwoStructure& phi);

/// Multivariate polynomial over the field; monomials keyed by exponent vectors.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(Field f, std::size_t vars) : field_(std::move(f)), vars_(vars) {}
    static Polynomial constant(const Field& f, std::size_t vars, const AlgebraicNumber& c);
    static Polynomial linear(const FVector& coeffs);

    const std::map<std::vector<int>, AlgebraicNumber>& terms() const { return terms_; }
    std::size_t vars() const { return vars_; }
    bool is_zero() const { return terms_.empty(); }
    bool homogeneous(int degree) const;
    AlgebraicNumber evaluate(const FVector& x) const;
    /// x -> f(M x)
    Polynomial compose(const FMatrix& m) const;
    std::string to_string() const;
    nlohmann::json to_json() const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const AlgebraicNumber& s) const;
    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

private:
    void add_term(const std::vector<int>& e, const AlgebraicNumber& c);
    Field field_;
    std::size_t vars_ = 0;
    std::map<std::vector<int>, AlgebraicNumber> terms_;
};

/// f(a) = sum_phi eps(phi) prod_{e in phi+} 2(a, e); DomainError if some 2-structure has a dihedral piece.
Polynomial f_polynomial(const Arrangement& arr, const std::vector<TwoStructure>& ts);

/// sum_T (-1)^T V1(T cap body) in the plane, over open or closed chambers.
SurdSum intrinsic1_pizza_2d(const Arrangement& arr, const HalfOpenRegion& body, bool closed_chambers = false);

/// Crust K2 \ K1 (both W-stable, K1 inside K2) translated by a.
AlgebraicNumber crust_exact(const Arrangement& arr, const HalfOpenRegion& inner, const HalfOpenRegion& outer,
                            const FVector& a, Valuation v);

}  // namespace pizza
