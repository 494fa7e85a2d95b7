#include "pizza/coxeter.hpp"

#include <deque>

namespace pizza {

std::string perm_key(const std::vector<std::uint32_t>& perm) {
    return std::string(reinterpret_cast<const char*>(perm.data()), perm.size() * sizeof(std::uint32_t));
}

CoxeterGroup::CoxeterGroup(PositiveSystem positive, std::size_t order_cap) : positive_(std::move(positive)) {
    const auto& sys = *positive_.system;
    const std::size_t nr = sys.roots.size(), n = sys.ambient_dim;
    neg_.resize(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        long j = sys.index_of(negate(sys.roots[i]));
        if (j < 0) throw DomainError("root system is not closed under negation");
        neg_[i] = static_cast<std::size_t>(j);
    }
    // generators
    std::vector<GroupElement> gens;
    for (std::size_t k = 0; k < positive_.size(); ++k) {
        const FVector& beta = positive_.root(k);
        GroupElement g;
        g.matrix = FMatrix::reflection(beta);
        g.det = -1;
        g.perm.resize(nr);
        for (std::size_t i = 0; i < nr; ++i) {
            long j = sys.index_of(g.matrix.apply(sys.roots[i]));
            if (j < 0) throw DomainError("root system is not closed under reflections");
            g.perm[i] = static_cast<std::uint32_t>(j);
        }
        gens.push_back(std::move(g));
    }
    GroupElement id;
    id.matrix = FMatrix::identity(sys.field, n);
    id.perm.resize(nr);
    for (std::size_t i = 0; i < nr; ++i) id.perm[i] = static_cast<std::uint32_t>(i);
    by_perm_.emplace(perm_key(id.perm), 0);
    elements_.push_back(std::move(id));
    for (std::size_t cur = 0; cur < elements_.size(); ++cur) {
        for (const auto& g : gens) {
            std::vector<std::uint32_t> p(nr);
            const auto& wp = elements_[cur].perm;
            for (std::size_t i = 0; i < nr; ++i) p[i] = wp[g.perm[i]];
            std::string key = perm_key(p);
            if (by_perm_.count(key)) continue;
            if (elements_.size() >= order_cap)
                throw ResourceError("group order exceeds the cap of " + std::to_string(order_cap));
            GroupElement e;
            e.matrix = elements_[cur].matrix * g.matrix;
            e.perm = std::move(p);
            e.det = -elements_[cur].det;
            by_perm_.emplace(std::move(key), elements_.size());
            elements_.push_back(std::move(e));
        }
    }
    for (const auto& g : gens) reflections_.push_back(by_perm_.at(perm_key(g.perm)));
}

long CoxeterGroup::find_perm(const std::vector<std::uint32_t>& perm) const {
    auto it = by_perm_.find(perm_key(perm));
    return it == by_perm_.end() ? -1 : static_cast<long>(it->second);
}

long CoxeterGroup::find_matrix(const FMatrix& m) const {
    if (by_matrix_.empty())
        for (std::size_t i = 0; i < elements_.size(); ++i) by_matrix_.emplace(elements_[i].matrix.key(), i);
    auto it = by_matrix_.find(m.key());
    return it == by_matrix_.end() ? -1 : static_cast<long>(it->second);
}

std::size_t CoxeterGroup::compose(std::size_t a, std::size_t b) const {
    const auto& pa = elements_[a].perm;
    const auto& pb = elements_[b].perm;
    std::vector<std::uint32_t> p(pa.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = pa[pb[i]];
    return static_cast<std::size_t>(find_perm(p));
}

std::size_t CoxeterGroup::inverse_of(std::size_t a) const {
    const auto& pa = elements_[a].perm;
    std::vector<std::uint32_t> p(pa.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[pa[i]] = static_cast<std::uint32_t>(i);
    return static_cast<std::size_t>(find_perm(p));
}

long CoxeterGroup::minus_id() const {
    std::vector<std::uint32_t> p(neg_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<std::uint32_t>(neg_[i]);
    long idx = find_perm(p);
    // The root permutation only sees Span(Phi); -id must also act as -1 off it.
    if (idx >= 0 && system().rank < system().ambient_dim) return -1;
    return idx;
}

bool CoxeterGroup::has_minus_id() const { return minus_id() >= 0; }

std::vector<std::size_t> CoxeterGroup::inversion_set(std::size_t w) const {
    const auto& p = elements_[w].perm;
    std::vector<std::uint32_t> inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<std::uint32_t>(i);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < positive_.size(); ++k)
        if (!positive_.is_positive(inv[positive_.positive[k]])) out.push_back(k);
    return out;
}

std::vector<std::size_t> base_chamber_walls(const CoxeterGroup& w) {
    const Field& f = w.field();
    const std::size_t n = w.system().ambient_dim;
    std::vector<LinearConstraint> cons;
    for (std::size_t k = 0; k < w.positive().size(); ++k) cons.push_back({w.positive().root(k), AlgebraicNumber(f), false});
    return irredundant_constraints(f, n, cons);
}

std::vector<Chamber> chambers_with_signs(const CoxeterGroup& w) {
    const auto& sys = w.system();
    if (sys.rank != sys.ambient_dim)
        throw DomainError("arrangement of " + sys.label + " is not essential (rank " + std::to_string(sys.rank) +
                          " < dimension " + std::to_string(sys.ambient_dim) + "); restrict to Span(Phi) first");
    const Field& f = sys.field;
    const std::size_t n = sys.ambient_dim;
    auto walls = base_chamber_walls(w);
    FVector rho = zero_vector(f, n);
    for (std::size_t k = 0; k < w.positive().size(); ++k) rho = add(rho, w.positive().root(k));
    std::vector<Chamber> out;
    out.reserve(w.order());
    for (std::size_t e = 0; e < w.order(); ++e) {
        const auto& g = w.element(e);
        Chamber c;
        c.element = e;
        c.open = HalfOpenRegion(f, n);
        c.closed = HalfOpenRegion(f, n);
        for (std::size_t k : walls) {
            const FVector& normal = sys.roots[g.perm[w.positive().positive[k]]];
            c.open.add(normal, AlgebraicNumber(f), true);
            c.closed.add(normal, AlgebraicNumber(f), false);
        }
        FVector wr = g.matrix.apply(rho);
        for (std::size_t k = 0; k < w.positive().size(); ++k)
            if (dot(wr, w.positive().root(k)).sign() < 0) c.separating.push_back(k);
        c.sign = c.separating.size() % 2 ? -1 : 1;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace pizza
