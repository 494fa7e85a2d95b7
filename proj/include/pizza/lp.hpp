#pragma once

#include <optional>
#include <vector>

#include "pizza/field.hpp"

namespace pizza {

/// (x, normal) > offset when strict, (x, normal) >= offset otherwise.
struct LinearConstraint {
    FVector normal;
    AlgebraicNumber offset;
    bool strict = false;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    AlgebraicNumber value;
    FVector point;
};

/// Exact two-phase simplex (Bland's rule): maximize (c, x) over the weak
/// versions of `constraints`, x free in R^dim.
LpResult lp_maximize(const Field& f, std::size_t dim, const FVector& c,
                     const std::vector<LinearConstraint>& constraints);

/// A point satisfying every constraint, strict ones strictly; nullopt if none.
std::optional<FVector> feasible_point(const Field& f, std::size_t dim,
                                      const std::vector<LinearConstraint>& constraints);

inline bool lp_feasible(const Field& f, std::size_t dim, const std::vector<LinearConstraint>& constraints) {
    return feasible_point(f, dim, constraints).has_value();
}

/// Indices of constraints that cannot be dropped without changing the weak
/// polyhedron (duplicates keep their first occurrence).
std::vector<std::size_t> irredundant_constraints(const Field& f, std::size_t dim,
                                                 const std::vector<LinearConstraint>& constraints);

}  // namespace pizza
