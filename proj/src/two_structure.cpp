#include "pizza/two_structure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace pizza {

namespace {

bool power_of_two_at_least_4(int m) { return m >= 4 && (m & (m - 1)) == 0; }

// Permutation of root indices induced by s_alpha for alpha = roots[i].
const std::vector<std::uint32_t>& reflection_perm(const CoxeterGroup& w, std::size_t root) {
    const auto& pos = w.positive().positive;
    auto it = std::find(pos.begin(), pos.end(), root);
    if (it == pos.end()) it = std::find(pos.begin(), pos.end(), w.negative_of(root));
    return w.element(w.reflection(static_cast<std::size_t>(it - pos.begin()))).perm;
}

RootSet reflection_closure(const CoxeterGroup& w, RootSet s) {
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto a = s.find_first(); a != RootSet::npos; a = s.find_next(a)) {
            const auto& p = reflection_perm(w, a);
            for (auto b = s.find_first(); b != RootSet::npos; b = s.find_next(b))
                if (!s.test(p[b])) {
                    s.set(p[b]);
                    grew = true;
                }
        }
    }
    return s;
}

std::vector<FVector> vectors_of(const CoxeterGroup& w, const RootSet& s) {
    std::vector<FVector> out;
    for (auto i = s.find_first(); i != RootSet::npos; i = s.find_next(i)) out.push_back(w.system().roots[i]);
    return out;
}

struct OrthogonalityTable {
    std::vector<RootSet> orth;  // orth[i] = roots orthogonal to root i
    explicit OrthogonalityTable(const CoxeterGroup& w) {
        const auto& r = w.system().roots;
        orth.assign(r.size(), RootSet(r.size()));
        for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t j = i + 1; j < r.size(); ++j)
                if (dot(r[i], r[j]).is_zero()) orth[i].set(j), orth[j].set(i);
    }
    bool orthogonal(const RootSet& a, const RootSet& b) const {
        for (auto i = a.find_first(); i != RootSet::npos; i = a.find_next(i))
            if (!b.is_subset_of(orth[i])) return false;
        return true;
    }
};

// Depth-first search over families of pairwise orthogonal candidates in a fixed order.
// The visitor returns true to stop the search.
void for_each_family(const CoxeterGroup& w, const std::vector<RootSet>& comps,
                     const std::function<bool(const RootSet&, std::size_t)>& visit) {
    OrthogonalityTable tab(w);
    const std::size_t nc = comps.size();
    std::vector<std::vector<char>> ok(nc, std::vector<char>(nc, 0));
    for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = i + 1; j < nc; ++j) ok[i][j] = ok[j][i] = tab.orthogonal(comps[i], comps[j]);
    std::vector<std::size_t> chosen;
    bool stop = false;
    std::function<void(std::size_t, const RootSet&)> rec = [&](std::size_t start, const RootSet& cur) {
        for (std::size_t c = start; c < nc && !stop; ++c) {
            bool fits = true;
            for (auto d : chosen) fits = fits && ok[c][d];
            if (!fits) continue;
            RootSet next = cur | comps[c];
            std::size_t rk = rank_of(vectors_of(w, next));
            chosen.push_back(c);
            if (visit(next, rk)) stop = true;
            else if (rk < w.system().rank) rec(c + 1, next);
            chosen.pop_back();
        }
    };
    rec(0, RootSet(w.system().roots.size()));
}

TwoStructure make_structure(const CoxeterGroup& w, const RootSet& phi) {
    TwoStructure t;
    t.roots = phi;
    t.positive = positive_part(w, phi);
    t.components = split_components(w, phi);
    t.rank = rank_of(vectors_of(w, phi));
    return t;
}

}  // namespace

std::string TwoStructureComponent::type() const {
    if (lines == 1) return "A1";
    if (lines == 4) return "B2";
    return "I2(" + std::to_string(lines) + ")";
}

std::vector<std::size_t> TwoStructure::root_indices() const {
    std::vector<std::size_t> out;
    for (auto i = roots.find_first(); i != RootSet::npos; i = roots.find_next(i)) out.push_back(i);
    return out;
}

std::vector<std::size_t> TwoStructure::positive_indices() const {
    std::vector<std::size_t> out;
    for (auto i = positive.find_first(); i != RootSet::npos; i = positive.find_next(i)) out.push_back(i);
    return out;
}

std::string TwoStructure::type_signature() const {
    std::vector<std::string> t;
    for (const auto& c : components) t.push_back(c.type());
    std::sort(t.begin(), t.end());
    std::string s;
    for (const auto& x : t) s += (s.empty() ? "" : ",") + x;
    return s;
}

nlohmann::json TwoStructure::to_json(const CoxeterGroup& w) const {
    nlohmann::json j;
    j["roots"] = nlohmann::json::array();
    for (auto i : root_indices()) j["roots"].push_back(pizza::to_json(w.system().roots[i]));
    j["positive"] = nlohmann::json::array();
    for (auto i : positive_indices()) j["positive"].push_back(pizza::to_json(w.system().roots[i]));
    j["components"] = nlohmann::json::array();
    for (const auto& c : components) j["components"].push_back({{"type", c.type()}, {"size", c.roots.size()}});
    j["type"] = type_signature();
    j["rank"] = rank;
    j["epsilon"] = epsilon;
    j["transporter"] = {{"index", transporter},
                        {"det", w.element(transporter).det},
                        {"matrix", pizza::to_json(w.element(transporter).matrix)}};
    return j;
}

RootSet root_set(const CoxeterGroup& w, const std::vector<std::size_t>& roots) {
    RootSet s(w.system().roots.size());
    for (auto i : roots) s.set(i);
    return s;
}

RootSet image(const CoxeterGroup& w, std::size_t element, const RootSet& s) {
    const auto& p = w.element(element).perm;
    RootSet out(s.size());
    for (auto i = s.find_first(); i != RootSet::npos; i = s.find_next(i)) out.set(p[i]);
    return out;
}

RootSet positive_part(const CoxeterGroup& w, const RootSet& s) {
    RootSet out(s.size());
    for (auto i = s.find_first(); i != RootSet::npos; i = s.find_next(i))
        if (w.positive().is_positive(i)) out.set(i);
    return out;
}

std::vector<TwoStructureComponent> split_components(const CoxeterGroup& w, const RootSet& s) {
    OrthogonalityTable tab(w);
    std::vector<std::size_t> idx;
    for (auto i = s.find_first(); i != RootSet::npos; i = s.find_next(i)) idx.push_back(i);
    std::vector<std::size_t> parent(idx.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            if (!tab.orth[idx[a]].test(idx[b])) parent[find(a)] = find(b);
    std::map<std::size_t, TwoStructureComponent> groups;
    for (std::size_t a = 0; a < idx.size(); ++a) groups[find(a)].roots.push_back(idx[a]);
    std::vector<TwoStructureComponent> out;
    for (auto& [k, c] : groups) {
        c.lines = static_cast<int>(c.roots.size() / 2);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.roots.front() < b.roots.front(); });
    return out;
}

bool allowed_component(const CoxeterGroup& w, const TwoStructureComponent& c) {
    RootSet s = root_set(w, c.roots);
    if (reflection_closure(w, s) != s) return false;
    if (c.lines == 1) return c.roots.size() == 2;
    return power_of_two_at_least_4(c.lines) && rank_of(vectors_of(w, s)) == 2;
}

ConditionB check_condition_b(const CoxeterGroup& w, const RootSet& phi) {
    RootSet pos = positive_part(w, phi);
    auto stabilizes = [&](std::size_t e) {
        const auto& p = w.element(e).perm;
        for (auto i = pos.find_first(); i != RootSet::npos; i = pos.find_next(i))
            if (!pos.test(p[i])) return false;
        return true;
    };
    // reflections first: they are the usual witnesses
    for (std::size_t k = 0; k < w.positive().size(); ++k)
        if (stabilizes(w.reflection(k))) return {false, static_cast<long>(w.reflection(k))};
    for (std::size_t e = 0; e < w.order(); ++e)
        if (w.element(e).det < 0 && stabilizes(e)) return {false, static_cast<long>(e)};
    return {};
}

std::vector<RootSet> candidate_components(const CoxeterGroup& w) {
    const auto& ps = w.positive();
    const std::size_t nr = w.system().roots.size();
    std::vector<RootSet> a1, dihedral;
    std::set<RootSet> seen;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        RootSet s(nr);
        s.set(ps.positive[k]);
        s.set(w.negative_of(ps.positive[k]));
        a1.push_back(s);
    }
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            if (dot(ps.root(i), ps.root(j)).is_zero()) continue;
            RootSet s = a1[i] | a1[j];
            s = reflection_closure(w, s);
            int lines = static_cast<int>(s.count() / 2);
            if (power_of_two_at_least_4(lines) && seen.insert(s).second) dihedral.push_back(s);
        }
    // larger pieces first, then by lowest root index
    std::stable_sort(dihedral.begin(), dihedral.end(), [](const RootSet& a, const RootSet& b) {
        if (a.count() != b.count()) return a.count() > b.count();
        return a.find_first() < b.find_first();
    });
    dihedral.insert(dihedral.end(), a1.begin(), a1.end());
    return dihedral;
}

TwoStructure find_base_two_structure(const CoxeterGroup& w) {
    if (!w.has_minus_id())
        throw HypothesisError("-id is not in W(" + w.system().label + "); 2-structures would not have full rank");
    auto comps = candidate_components(w);
    std::optional<RootSet> found;
    for_each_family(w, comps, [&](const RootSet& phi, std::size_t rk) {
        if (rk != w.system().rank) return false;
        if (!check_condition_b(w, phi).ok) return false;
        found = phi;
        return true;
    });
    if (!found) throw Error("no 2-structure found for " + w.system().label + " by exhaustive component search");
    TwoStructure t = make_structure(w, *found);
    t.epsilon = 1;
    t.transporter = w.identity();
    return t;
}

std::vector<TwoStructure> enumerate_two_structures(const CoxeterGroup& w) {
    TwoStructure base = find_base_two_structure(w);
    std::vector<TwoStructure> out{base};
    std::set<RootSet> seen{base.roots};
    for (std::size_t e = 0; e < w.order(); ++e) {
        RootSet img = image(w, e, base.roots);
        if (seen.insert(img).second) out.push_back(make_structure(w, img));
    }
    assign_epsilon(w, out, 0);
    return out;
}

void assign_epsilon(const CoxeterGroup& w, std::vector<TwoStructure>& structures, std::size_t base) {
    std::map<RootSet, std::size_t> by_positive;
    for (std::size_t i = 0; i < structures.size(); ++i) by_positive.emplace(structures[i].positive, i);
    std::vector<int> eps(structures.size(), 0);
    std::vector<std::size_t> via(structures.size(), 0);
    const RootSet& p0 = structures[base].positive;
    for (std::size_t e = 0; e < w.order(); ++e) {
        auto it = by_positive.find(image(w, e, p0));
        if (it == by_positive.end()) continue;
        int d = w.element(e).det;
        if (eps[it->second] == 0) {
            eps[it->second] = d;
            via[it->second] = e;
        } else if (eps[it->second] != d) {
            throw Error("inconsistent epsilon for 2-structure " + std::to_string(it->second) +
                        ": transporters of both determinants exist");
        }
    }
    for (std::size_t i = 0; i < structures.size(); ++i) {
        if (eps[i] == 0) throw Error("2-structure " + std::to_string(i) + " is not in the orbit of the base");
        structures[i].epsilon = eps[i];
        structures[i].transporter = via[i];
    }
}

std::vector<RootSet> brute_force_two_structures(const CoxeterGroup& w, std::size_t max_positive) {
    if (w.positive().size() > max_positive)
        throw ResourceError("brute-force 2-structure search limited to |Phi+| <= " + std::to_string(max_positive));
    auto comps = candidate_components(w);
    std::set<RootSet> found;
    for_each_family(w, comps, [&](const RootSet& phi, std::size_t) {
        if (check_condition_b(w, phi).ok) found.insert(phi);
        return false;
    });
    return {found.begin(), found.end()};
}

}  // namespace pizza
