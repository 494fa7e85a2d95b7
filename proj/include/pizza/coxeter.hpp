#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pizza/region.hpp"
#include "pizza/root_system.hpp"

namespace pizza {

inline constexpr std::size_t kDefaultOrderCap = 100000;

struct GroupElement {
    FMatrix matrix;
    /// perm[i] = index of w(alpha_i) in the root list.
    std::vector<std::uint32_t> perm;
    int det = 1;
};

class CoxeterGroup {
public:
    /// BFS closure of the reflections s_alpha, alpha in Phi+, by right multiplication.
    explicit CoxeterGroup(PositiveSystem positive, std::size_t order_cap = kDefaultOrderCap);

    const PositiveSystem& positive() const { return positive_; }
    const PseudoRootSystem& system() const { return *positive_.system; }
    const Field& field() const { return positive_.system->field; }
    std::size_t order() const { return elements_.size(); }
    const std::vector<GroupElement>& elements() const { return elements_; }
    const GroupElement& element(std::size_t i) const { return elements_[i]; }
    std::size_t identity() const { return 0; }

    /// Index of the element with the given root permutation, or -1.
    long find_perm(const std::vector<std::uint32_t>& perm) const;
    /// Index of the element with the given matrix, or -1.
    long find_matrix(const FMatrix& m) const;
    std::size_t compose(std::size_t a, std::size_t b) const;  // a * b
    std::size_t inverse_of(std::size_t a) const;
    /// Reflection s_alpha for the k-th positive root.
    std::size_t reflection(std::size_t k) const { return reflections_[k]; }

    bool has_minus_id() const;
    long minus_id() const;
    /// Indices k (into the positive list) with alpha_k in Phi+ and w^-1 alpha_k in Phi-.
    std::vector<std::size_t> inversion_set(std::size_t w) const;
    /// Index in the root list of -alpha_i.
    std::size_t negative_of(std::size_t root) const { return neg_[root]; }

private:
    PositiveSystem positive_;
    std::vector<GroupElement> elements_;
    std::unordered_map<std::string, std::size_t> by_perm_;
    mutable std::unordered_map<std::string, std::size_t> by_matrix_;
    std::vector<std::size_t> reflections_;
    std::vector<std::size_t> neg_;
};

std::string perm_key(const std::vector<std::uint32_t>& perm);

struct Chamber {
    std::size_t element = 0;
    int sign = 1;
    /// S(T, T0) as indices into the positive list.
    std::vector<std::size_t> separating;
    HalfOpenRegion open;
    HalfOpenRegion closed;
};

/// Positive roots (indices into the positive list) bounding the base chamber.
std::vector<std::size_t> base_chamber_walls(const CoxeterGroup& w);
/// One chamber per group element; DomainError for non-essential arrangements.
std::vector<Chamber> chambers_with_signs(const CoxeterGroup& w);

}  // namespace pizza
