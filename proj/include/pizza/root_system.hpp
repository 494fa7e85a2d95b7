#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "pizza/field.hpp"

namespace pizza {

/// One irreducible factor of a type expression.
struct TypeFactor {
    char family = 'A';  // A B D I H F E
    int n = 1;          // rank index (A_n, B_n, ...), or m for I2(m)
    std::string label() const;
};

/// Parses TYPE := "A"k | "B"k | "D"k | "I2("m")" | "H3" | "H4" | "F4" | "E"6..8
///              | TYPE "x" TYPE | TYPE "^" k. Powers are expanded.
std::vector<TypeFactor> parse_type(const std::string& spec);
/// Smallest N such that the standard coordinates live in Q(2cos(pi/N)).
int type_field_requirement(const std::string& spec);
int type_field_requirement(const std::vector<TypeFactor>& factors);

struct PseudoRootSystem {
    Field field;
    std::size_t ambient_dim = 0;
    std::size_t rank = 0;
    std::vector<FVector> roots;
    std::string label;
    std::vector<TypeFactor> factors;
    /// Coordinate block offset of each factor.
    std::vector<std::size_t> block_offsets;

    /// Index of `v` in roots, or -1.
    long index_of(const FVector& v) const;
    void rebuild_index();
    nlohmann::json to_json() const;

private:
    std::unordered_map<std::string, std::size_t> index_;
};

/// Builds the system in a field Q(2cos(pi/N)) with N a multiple of the type's
/// requirement and of `field_hint` (0: no hint).
PseudoRootSystem build_system(const std::string& spec, int field_hint = 0);
PseudoRootSystem build_system(const std::vector<TypeFactor>& factors, int field_hint = 0);
/// Orthogonal-block product; the result lives in the lcm of both fields.
PseudoRootSystem product(const PseudoRootSystem& a, const PseudoRootSystem& b);
/// Wraps an explicit root list (validated separately).
PseudoRootSystem system_from_roots(const Field& f, std::size_t dim, std::vector<FVector> roots, std::string label);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
};
ValidationReport validate_system(const PseudoRootSystem& s);

struct PositiveSystem {
    std::shared_ptr<const PseudoRootSystem> system;
    FVector order_vector;
    std::vector<std::size_t> positive;  // indices into system->roots
    std::vector<int> root_sign;         // +1 / -1 per root

    const FVector& root(std::size_t k) const { return system->roots[positive[k]]; }
    std::size_t size() const { return positive.size(); }
    bool is_positive(std::size_t root_index) const { return root_sign[root_index] > 0; }
};

/// Phi+ = {alpha : (t, alpha) > 0}; DomainError naming a root orthogonal to t.
PositiveSystem positive_system(std::shared_ptr<const PseudoRootSystem> s, const FVector& t);
/// t = (1, eps, eps^2, ...) for the first exact eps in 1/100, 1/1009, ... that is generic.
PositiveSystem default_positive_system(std::shared_ptr<const PseudoRootSystem> s);

/// Re-expresses vectors of another field in the system's field.
FVector embed_vector(const FVector& v, const Field& target);

}  // namespace pizza
