#include "pizza/root_system.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace pizza {

std::string TypeFactor::label() const {
    if (family == 'I') return "I2(" + std::to_string(n) + ")";
    return std::string(1, family) + std::to_string(n);
}

namespace {

struct TypeParser {
    std::string s;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("bad type spec '" + s + "': " + why);
    }

    int number() {
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail("expected a number at position " + std::to_string(start));
        if (pos - start > 6) fail("number too large");
        return std::stoi(s.substr(start, pos - start));
    }

    std::vector<TypeFactor> atom() {
        if (pos >= s.size()) fail("unexpected end");
        if (s[pos] == '(') {
            ++pos;
            auto inner = expr();
            if (pos >= s.size() || s[pos] != ')') fail("missing ')'");
            ++pos;
            return inner;
        }
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[pos])));
        ++pos;
        TypeFactor t;
        t.family = c;
        switch (c) {
            case 'A':
            case 'B':
            case 'D':
                t.n = number();
                if (t.n < 1) fail("rank must be positive");
                if (c == 'D' && t.n < 2) fail("D needs rank >= 2");
                break;
            case 'I':
                if (pos >= s.size() || s[pos] != '2') fail("expected I2(m)");
                ++pos;
                if (pos >= s.size() || s[pos] != '(') fail("expected I2(m)");
                ++pos;
                t.n = number();
                if (pos >= s.size() || s[pos] != ')') fail("missing ')' in I2(m)");
                ++pos;
                if (t.n < 2) fail("I2(m) needs m >= 2");
                break;
            case 'H':
                t.n = number();
                if (t.n != 3 && t.n != 4) fail("only H3 and H4 exist");
                break;
            case 'F':
                t.n = number();
                if (t.n != 4) fail("only F4 exists");
                break;
            case 'E':
                t.n = number();
                if (t.n < 6 || t.n > 8) fail("only E6, E7, E8 are supported");
                break;
            default:
                fail(std::string("unknown family '") + s[pos - 1] + "'");
        }
        return {t};
    }

    std::vector<TypeFactor> power() {
        auto base = atom();
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            int k = number();
            if (k < 1 || k > 16) fail("power out of range");
            std::vector<TypeFactor> out;
            for (int i = 0; i < k; ++i) out.insert(out.end(), base.begin(), base.end());
            return out;
        }
        return base;
    }

    std::vector<TypeFactor> expr() {
        auto out = power();
        while (pos < s.size() && (s[pos] == 'x' || s[pos] == '*')) {
            ++pos;
            auto more = power();
            out.insert(out.end(), more.begin(), more.end());
        }
        return out;
    }
};

int factor_requirement(const TypeFactor& t) {
    switch (t.family) {
        case 'A':
        case 'B':
            return t.n == 1 ? 1 : 4;
        case 'D':
        case 'F':
        case 'E':
            return 4;
        case 'H':
            return 5;
        case 'I':
            return t.n % 2 == 0 ? t.n : 2 * t.n;
    }
    return 1;
}

AlgebraicNumber num(const Field& f, long p, long q = 1) { return AlgebraicNumber(f, Rational(p, q)); }

std::vector<std::vector<int>> even_permutations(int k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        int inv = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (p[i] > p[j]) ++inv;
        if (inv % 2 == 0) out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Roots of +-e_i +- e_j over sqrt2, i < j, in dimension n.
void add_long_pairs(const Field& f, std::size_t n, std::vector<FVector>& roots) {
    AlgebraicNumber h = embed_cos(f, 1, 4);  // 1/sqrt2
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (int si : {1, -1})
                for (int sj : {1, -1}) {
                    FVector v = zero_vector(f, n);
                    v[i] = si > 0 ? h : -h;
                    v[j] = sj > 0 ? h : -h;
                    roots.push_back(v);
                }
}

std::vector<FVector> e8_roots(const Field& f) {
    std::vector<FVector> roots;
    add_long_pairs(f, 8, roots);
    AlgebraicNumber q = embed_cos(f, 1, 4) * Rational(1, 2);  // 1/(2 sqrt2)
    for (int mask = 0; mask < 256; ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) % 2) continue;
        FVector v(8, q);
        for (int k = 0; k < 8; ++k)
            if (mask >> k & 1) v[k] = -q;
        roots.push_back(v);
    }
    return roots;
}

std::vector<FVector> factor_roots(const Field& f, const TypeFactor& t, std::size_t& dim) {
    std::vector<FVector> roots;
    switch (t.family) {
        case 'A':
            if (t.n == 1) {
                dim = 1;
                roots = {{num(f, 1)}, {num(f, -1)}};
                break;
            }
            dim = static_cast<std::size_t>(t.n) + 1;
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) {
                    if (i == j) continue;
                    FVector v = zero_vector(f, dim);
                    v[i] = embed_cos(f, 1, 4);
                    v[j] = -embed_cos(f, 1, 4);
                    roots.push_back(v);
                }
            break;
        case 'B':
            dim = static_cast<std::size_t>(t.n);
            for (std::size_t i = 0; i < dim; ++i) {
                roots.push_back(unit_vector(f, dim, i));
                roots.push_back(negate(unit_vector(f, dim, i)));
            }
            add_long_pairs(f, dim, roots);
            break;
        case 'D':
            dim = static_cast<std::size_t>(t.n);
            add_long_pairs(f, dim, roots);
            break;
        case 'I':
            dim = 2;
            for (int k = 0; k < 2 * t.n; ++k) roots.push_back({embed_cos(f, k, t.n), embed_sin(f, k, t.n)});
            break;
        case 'H': {
            AlgebraicNumber phi = embed_cos(f, 1, 5) * Rational(2);
            AlgebraicNumber iphi = phi - num(f, 1);
            AlgebraicNumber half = num(f, 1, 2);
            dim = static_cast<std::size_t>(t.n);
            for (std::size_t i = 0; i < dim; ++i) {
                roots.push_back(unit_vector(f, dim, i));
                roots.push_back(negate(unit_vector(f, dim, i)));
            }
            std::vector<AlgebraicNumber> base;
            if (t.n == 3) {
                base = {phi * half, half, iphi * half};
            } else {
                base = {num(f, 0), half, phi * half, iphi * half};
                for (int mask = 0; mask < 16; ++mask) {
                    FVector v(4, half);
                    for (int k = 0; k < 4; ++k)
                        if (mask >> k & 1) v[k] = -half;
                    roots.push_back(v);
                }
            }
            for (const auto& p : even_permutations(t.n))
                for (int mask = 0; mask < (1 << t.n); ++mask) {
                    FVector v = zero_vector(f, dim);
                    bool skip = false;
                    for (int k = 0; k < t.n; ++k) {
                        AlgebraicNumber x = base[k];
                        if (mask >> k & 1) {
                            if (x.is_zero()) skip = true;  // avoid duplicate sign of 0
                            x = -x;
                        }
                        v[p[k]] = x;
                    }
                    if (!skip) roots.push_back(v);
                }
            break;
        }
        case 'F': {
            dim = 4;
            for (std::size_t i = 0; i < 4; ++i) {
                roots.push_back(unit_vector(f, 4, i));
                roots.push_back(negate(unit_vector(f, 4, i)));
            }
            add_long_pairs(f, 4, roots);
            for (int mask = 0; mask < 16; ++mask) {
                FVector v(4, num(f, 1, 2));
                for (int k = 0; k < 4; ++k)
                    if (mask >> k & 1) v[k] = num(f, -1, 2);
                roots.push_back(v);
            }
            break;
        }
        case 'E': {
            dim = 8;
            auto all = e8_roots(f);
            if (t.n == 8) {
                roots = all;
                break;
            }
            // E7: roots orthogonal to one root; E6: orthogonal to an A2 pair.
            FVector r1 = zero_vector(f, 8), r2 = zero_vector(f, 8);
            r1[6] = r1[7] = embed_cos(f, 1, 4);
            r2[5] = embed_cos(f, 1, 4);
            r2[6] = -embed_cos(f, 1, 4);
            for (const auto& v : all) {
                if (!dot(v, r1).is_zero()) continue;
                if (t.n == 6 && !dot(v, r2).is_zero()) continue;
                roots.push_back(v);
            }
            break;
        }
        default:
            throw UnsupportedError("unsupported type " + t.label());
    }
    return roots;
}

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

}  // namespace

std::vector<TypeFactor> parse_type(const std::string& spec) {
    TypeParser p;
    for (char c : spec)
        if (!std::isspace(static_cast<unsigned char>(c))) p.s += c;
    if (p.s.empty()) throw ParseError("empty type spec");
    auto out = p.expr();
    if (p.pos != p.s.size()) p.fail("trailing input at position " + std::to_string(p.pos));
    return out;
}

int type_field_requirement(const std::vector<TypeFactor>& factors) {
    int n = 1;
    for (const auto& t : factors) n = lcm_int(n, factor_requirement(t));
    return n;
}

int type_field_requirement(const std::string& spec) { return type_field_requirement(parse_type(spec)); }

long PseudoRootSystem::index_of(const FVector& v) const {
    auto it = index_.find(vector_key(v));
    return it == index_.end() ? -1 : static_cast<long>(it->second);
}

void PseudoRootSystem::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < roots.size(); ++i) index_.emplace(vector_key(roots[i]), i);
}

nlohmann::json PseudoRootSystem::to_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : roots) rs.push_back(pizza::to_json(r));
    return {{"label", label}, {"N", field->N}, {"ambient_dim", ambient_dim}, {"rank", rank}, {"roots", rs}};
}

FVector embed_vector(const FVector& v, const Field& target) {
    FVector out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.embed_into(target));
    return out;
}

PseudoRootSystem system_from_roots(const Field& f, std::size_t dim, std::vector<FVector> roots, std::string label) {
    PseudoRootSystem s;
    s.field = f;
    s.ambient_dim = dim;
    s.roots = std::move(roots);
    s.rank = s.roots.empty() ? 0 : rank_of(s.roots);
    s.label = std::move(label);
    s.rebuild_index();
    return s;
}

PseudoRootSystem build_system(const std::vector<TypeFactor>& factors, int field_hint) {
    if (factors.empty()) throw ParseError("empty type");
    int n = type_field_requirement(factors);
    if (field_hint > 0) n = lcm_int(n, field_hint);
    Field f = make_field(n);
    std::vector<std::vector<FVector>> blocks;
    std::vector<std::size_t> dims;
    std::size_t total = 0;
    for (const auto& t : factors) {
        std::size_t d = 0;
        blocks.push_back(factor_roots(f, t, d));
        dims.push_back(d);
        total += d;
    }
    PseudoRootSystem s;
    s.field = f;
    s.ambient_dim = total;
    s.factors = factors;
    std::size_t off = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        s.block_offsets.push_back(off);
        for (const auto& r : blocks[b]) {
            FVector v = zero_vector(f, total);
            for (std::size_t k = 0; k < r.size(); ++k) v[off + k] = r[k];
            s.roots.push_back(v);
        }
        off += dims[b];
    }
    for (std::size_t i = 0; i < factors.size(); ++i) s.label += (i ? "x" : "") + factors[i].label();
    s.rank = rank_of(s.roots);
    s.rebuild_index();
    return s;
}

PseudoRootSystem build_system(const std::string& spec, int field_hint) {
    return build_system(parse_type(spec), field_hint);
}

PseudoRootSystem product(const PseudoRootSystem& a, const PseudoRootSystem& b) {
    Field f = make_field(lcm_int(a.field->N, b.field->N));
    PseudoRootSystem s;
    s.field = f;
    s.ambient_dim = a.ambient_dim + b.ambient_dim;
    s.factors = a.factors;
    s.factors.insert(s.factors.end(), b.factors.begin(), b.factors.end());
    s.block_offsets = a.block_offsets;
    for (auto off : b.block_offsets) s.block_offsets.push_back(off + a.ambient_dim);
    for (const auto& r : a.roots) {
        FVector v = embed_vector(r, f);
        v.resize(s.ambient_dim, AlgebraicNumber(f));
        s.roots.push_back(v);
    }
    for (const auto& r : b.roots) {
        FVector v = zero_vector(f, a.ambient_dim);
        for (const auto& x : embed_vector(r, f)) v.push_back(x);
        s.roots.push_back(v);
    }
    s.label = a.label + "x" + b.label;
    s.rank = a.rank + b.rank;
    s.rebuild_index();
    return s;
}

ValidationReport validate_system(const PseudoRootSystem& s) {
    ValidationReport rep;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.failures.push_back(std::move(msg));
    };
    const AlgebraicNumber one(s.field, Rational(1));
    for (std::size_t i = 0; i < s.roots.size(); ++i) {
        if (s.roots[i].size() != s.ambient_dim) fail("root " + std::to_string(i) + " has the wrong dimension");
        if (dot(s.roots[i], s.roots[i]) != one) fail("root " + std::to_string(i) + " is not a unit vector");
        if (s.index_of(negate(s.roots[i])) < 0) fail("root " + std::to_string(i) + " has no negative in the set");
    }
    if (!rep.ok) return rep;
    for (std::size_t b = 0; b < s.roots.size(); ++b) {
        const FVector& beta = s.roots[b];
        for (std::size_t a = 0; a < s.roots.size(); ++a) {
            // s_beta(alpha) = alpha - 2 (alpha, beta) beta for unit beta
            AlgebraicNumber c = dot(s.roots[a], beta) * Rational(2);
            FVector img = sub(s.roots[a], scale(beta, c));
            if (s.index_of(img) < 0)
                fail("s_beta(alpha) not in the set for alpha=#" + std::to_string(a) + " beta=#" + std::to_string(b));
        }
    }
    return rep;
}

PositiveSystem positive_system(std::shared_ptr<const PseudoRootSystem> s, const FVector& t) {
    if (t.size() != s->ambient_dim) throw DomainError("order vector has the wrong dimension");
    PositiveSystem p;
    p.order_vector = t;
    p.root_sign.resize(s->roots.size());
    for (std::size_t i = 0; i < s->roots.size(); ++i) {
        int sg = dot(t, s->roots[i]).sign();
        if (sg == 0) {
            std::string coords;
            for (const auto& x : s->roots[i]) coords += (coords.empty() ? "" : ", ") + x.to_decimal(6);
            throw DomainError("order vector is orthogonal to root #" + std::to_string(i) + " (" + coords + ")");
        }
        p.root_sign[i] = sg;
        if (sg > 0) p.positive.push_back(i);
    }
    p.system = std::move(s);
    return p;
}

PositiveSystem default_positive_system(std::shared_ptr<const PseudoRootSystem> s) {
    for (long den : {100L, 1009L, 10007L, 100003L}) {
        FVector t;
        Rational e(1), eps(1, den);
        for (std::size_t i = 0; i < s->ambient_dim; ++i) {
            t.emplace_back(s->field, e);
            e *= eps;
        }
        try {
            return positive_system(s, t);
        } catch (const DomainError&) {
            continue;
        }
    }
    throw DomainError("no generic order vector found");
}

}  // namespace pizza
