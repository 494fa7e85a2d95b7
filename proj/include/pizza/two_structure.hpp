#pragma once

#include <boost/dynamic_bitset.hpp>

#include "pizza/coxeter.hpp"

namespace pizza {

using RootSet = boost::dynamic_bitset<>;

struct TwoStructureComponent {
    std::vector<std::size_t> roots;  // indices into the root list
    int lines = 1;                   // 1 for A1, m for I2(m)
    std::string type() const;        // "A1", "B2", "I2(8)", ...
};

struct TwoStructure {
    RootSet roots;     // phi
    RootSet positive;  // phi+ = phi cap Phi+
    std::vector<TwoStructureComponent> components;
    int epsilon = 1;
    /// Element w with w(phi0) = phi and w(phi0+) = phi+.
    std::size_t transporter = 0;
    std::size_t rank = 0;

    std::vector<std::size_t> root_indices() const;
    std::vector<std::size_t> positive_indices() const;
    /// Sorted component types, e.g. "A1,B2".
    std::string type_signature() const;
    nlohmann::json to_json(const CoxeterGroup& w) const;
};

struct ConditionB {
    bool ok = true;
    long witness = -1;  // element with w(phi+) = phi+ and det -1
};

RootSet root_set(const CoxeterGroup& w, const std::vector<std::size_t>& roots);
/// Image of a root set under a group element.
RootSet image(const CoxeterGroup& w, std::size_t element, const RootSet& s);
RootSet positive_part(const CoxeterGroup& w, const RootSet& s);

/// Splits a root set into its irreducible orthogonal pieces and names them.
std::vector<TwoStructureComponent> split_components(const CoxeterGroup& w, const RootSet& s);
/// A1, or a reflection-closed rank-2 piece with 2^k >= 4 lines.
bool allowed_component(const CoxeterGroup& w, const TwoStructureComponent& c);

ConditionB check_condition_b(const CoxeterGroup& w, const RootSet& phi);

/// Irreducible subsystems of type A1, B2 or I2(2^k), k >= 3.
std::vector<RootSet> candidate_components(const CoxeterGroup& w);

/// Deterministic depth-first search; HypothesisError without -id, Error if none found.
TwoStructure find_base_two_structure(const CoxeterGroup& w);
/// W-orbit of the base, base first, with epsilon assigned by transport.
std::vector<TwoStructure> enumerate_two_structures(const CoxeterGroup& w);
/// eps(phi) = det(w) for w(phi0, phi0+) = (phi, phi+); Error on inconsistency.
void assign_epsilon(const CoxeterGroup& w, std::vector<TwoStructure>& structures, std::size_t base = 0);
/// All orthogonal families of candidate components satisfying (b). Independent of the orbit.
/// ResourceError when |Phi+| > max_positive.
std::vector<RootSet> brute_force_two_structures(const CoxeterGroup& w, std::size_t max_positive = 24);

}  // namespace pizza
