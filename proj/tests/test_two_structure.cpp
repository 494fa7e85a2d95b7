#include <doctest.h>

#include <set>

#include "pizza/two_structure.hpp"

using namespace pizza;

namespace {

CoxeterGroup group(const std::string& t) {
    auto s = std::make_shared<const PseudoRootSystem>(build_system(t));
    return CoxeterGroup(default_positive_system(s));
}

std::set<RootSet> as_set(const std::vector<TwoStructure>& ts) {
    std::set<RootSet> out;
    for (const auto& t : ts) out.insert(t.roots);
    return out;
}

}  // namespace

TEST_CASE("2-structure counts match brute force") {
    struct Case {
        const char* type;
        std::size_t count;
        const char* signature;
    };
    for (Case c : {Case{"B2", 1, "B2"}, Case{"B3", 3, "A1,B2"}, Case{"I2(6)", 3, "A1,A1"}, Case{"I2(8)", 1, "I2(8)"},
                   Case{"A1", 1, "A1"}, Case{"A1^3", 1, "A1,A1,A1"}, Case{"B2xA1", 1, "A1,B2"},
                   Case{"D4", 3, "A1,A1,A1,A1"}}) {
        CAPTURE(c.type);
        auto w = group(c.type);
        auto ts = enumerate_two_structures(w);
        CHECK(ts.size() == c.count);
        auto brute = brute_force_two_structures(w);
        CHECK(as_set(ts) == std::set<RootSet>(brute.begin(), brute.end()));
        for (const auto& t : ts) {
            CHECK(t.type_signature() == c.signature);
            CHECK(t.rank == w.system().rank);
            CHECK(check_condition_b(w, t.roots).ok);
            for (const auto& comp : t.components) CHECK(allowed_component(w, comp));
        }
        CHECK(ts[0].epsilon == 1);
    }
}

TEST_CASE("more types: orbit equals brute force") {
    for (const char* t : {"I2(4)", "I2(10)", "I2(12)", "I2(16)", "B4", "B2^2", "I2(8)xA1"}) {
        CAPTURE(t);
        auto w = group(t);
        auto ts = enumerate_two_structures(w);
        auto brute = brute_force_two_structures(w);
        CHECK(as_set(ts) == std::set<RootSet>(brute.begin(), brute.end()));
        std::set<std::string> sigs;
        for (const auto& s : ts) sigs.insert(s.type_signature());
        CHECK(sigs.size() == 1);
    }
}

TEST_CASE("condition (b) witnesses") {
    auto w = group("B2");
    const auto& sys = w.system();
    auto f = sys.field;
    FVector e1 = unit_vector(f, 2, 0), e2 = unit_vector(f, 2, 1);
    RootSet phi = root_set(w, {static_cast<std::size_t>(sys.index_of(e1)), static_cast<std::size_t>(sys.index_of(negate(e1))),
                               static_cast<std::size_t>(sys.index_of(e2)), static_cast<std::size_t>(sys.index_of(negate(e2)))});
    auto r = check_condition_b(w, phi);
    REQUIRE_FALSE(r.ok);
    const auto& g = w.element(static_cast<std::size_t>(r.witness));
    CHECK(g.det == -1);
    CHECK(g.matrix.apply(e1) == e2);
    CHECK(g.matrix.apply(e2) == e1);

    auto b3 = group("B3");
    CHECK(check_condition_b(b3, find_base_two_structure(b3).roots).ok);
    auto i8 = group("I2(8)");
    RootSet all(i8.system().roots.size());
    all.set();
    CHECK(check_condition_b(i8, all).ok);
    // a B2 in B3 without the orthogonal A1 fails: s_{e3} fixes it
    auto base = find_base_two_structure(b3);
    for (const auto& c : base.components)
        if (c.lines == 4) CHECK_FALSE(check_condition_b(b3, root_set(b3, c.roots)).ok);
}

TEST_CASE("types without -id") {
    auto w = group("A2");
    CHECK_THROWS_AS(find_base_two_structure(w), HypothesisError);
    auto brute = brute_force_two_structures(w);
    CHECK(brute.size() == 3);
    for (const auto& s : brute) CHECK(s.count() == 2);
    CHECK_THROWS_AS(brute_force_two_structures(group("H3"), 10), ResourceError);
}

TEST_CASE("epsilon equivariance") {
    for (const char* t : {"B3", "I2(6)", "D4", "B4", "I2(12)"}) {
        CAPTURE(t);
        auto w = group(t);
        auto ts = enumerate_two_structures(w);
        std::map<RootSet, std::size_t> by_pos;
        for (std::size_t i = 0; i < ts.size(); ++i) by_pos.emplace(ts[i].positive, i);
        for (std::size_t u = 0; u < w.order(); ++u)
            for (const auto& phi : ts) {
                auto it = by_pos.find(image(w, u, phi.positive));
                if (it == by_pos.end()) continue;
                REQUIRE(ts[it->second].epsilon == w.element(u).det * phi.epsilon);
            }
        for (const auto& phi : ts) {
            CHECK(image(w, phi.transporter, ts[0].roots) == phi.roots);
            CHECK(image(w, phi.transporter, ts[0].positive) == phi.positive);
            CHECK(w.element(phi.transporter).det == phi.epsilon);
        }
    }
}

TEST_CASE("corrupted structure list is detected") {
    auto w = group("B3");
    auto ts = enumerate_two_structures(w);
    // a set outside the orbit cannot be transported to
    ts.back().positive = positive_part(w, ts.back().positive.flip());
    CHECK_THROWS_AS(assign_epsilon(w, ts), Error);
    auto js = enumerate_two_structures(w)[1].to_json(w);
    CHECK(js["type"] == "A1,B2");
    CHECK(js["roots"].size() == 10);
}
