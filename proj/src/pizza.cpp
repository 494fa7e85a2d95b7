#include "pizza/pizza.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace pizza {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

std::string strip_key(const std::string& s, const std::string& key) {
    return s.rfind(key + "=", 0) == 0 ? s.substr(key.size() + 1) : s;
}

// Scale so the first nonzero normal coordinate has absolute value 1.
std::string constraint_key(const LinearConstraint& c) {
    AlgebraicNumber s;
    for (const auto& x : c.normal)
        if (!x.is_zero()) {
            s = abs(x).inverse();
            break;
        }
    if (!s.valid()) return "0|" + c.offset.key();
    return vector_key(scale(c.normal, s)) + "|" + (c.offset * s).key();
}

AlgebraicNumber measure(const HalfOpenRegion& r, Valuation v) {
    if (v == Valuation::Volume) return exact_volume(r);
    return AlgebraicNumber(r.field(), Rational(euler_cs(r)));
}

AlgebraicNumber measure(const CellUnion& u, Valuation v) {
    if (v == Valuation::Volume) return exact_volume(u);
    return AlgebraicNumber(u.field(), Rational(euler_cs(u)));
}

int negative_count(const std::vector<FVector>& roots, const FVector& x) {
    int neg = 0;
    for (const auto& r : roots) {
        int s = dot(x, r).sign();
        if (s == 0) throw DomainError("point lies on the wall of " + to_json(r).dump());
        neg += s < 0;
    }
    return neg;
}

struct McShard {
    std::int64_t signed_hits = 0;
    std::uint64_t hits = 0;
    std::uint64_t discarded = 0;
};

struct McSetup {
    std::vector<std::vector<double>> roots;
    std::vector<double> a;
    double r1 = 0, r2 = 1;
    bool annulus = false;
    double volume = 0;
};

McSetup mc_setup(const Arrangement& arr, const Body& k, const FVector& a) {
    if (k.kind != Body::Kind::Ball && k.kind != Body::Kind::Annulus)
        throw UnsupportedError("Monte Carlo sampling supports ball and annulus bodies");
    McSetup s;
    for (std::size_t i = 0; i < arr.group().positive().size(); ++i) s.roots.push_back(to_doubles(arr.group().positive().root(i)));
    s.a = to_doubles(a);
    s.annulus = k.kind == Body::Kind::Annulus;
    s.r1 = k.r1.to_double();
    s.r2 = k.r2.to_double();
    const std::size_t n = arr.dim();
    s.volume = s.annulus ? ball_volume(n, s.r2) - ball_volume(n, s.r1) : ball_volume(n, s.r2);
    return s;
}

McShard mc_shard(const McSetup& s, std::uint64_t seed, std::uint64_t index, std::uint64_t count, double slab) {
    std::mt19937_64 rng(shard_seed(seed, index));
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    const std::size_t n = s.a.size();
    const double dn = static_cast<double>(n);
    const double lo = std::pow(s.r1, dn), hi = std::pow(s.r2, dn);
    std::vector<double> y(n), x(n);
    McShard out;
    for (std::uint64_t it = 0; it < count; ++it) {
        double norm2 = 0;
        for (auto& v : y) {
            v = gauss(rng);
            norm2 += v * v;
        }
        double u = unif(rng);
        double rad = s.annulus ? std::pow(lo + u * (hi - lo), 1 / dn) : s.r2 * std::pow(u, 1 / dn);
        double f = rad / std::sqrt(norm2);
        for (std::size_t i = 0; i < n; ++i) x[i] = s.a[i] + f * y[i];
        int neg = 0;
        bool wall = false;
        for (const auto& r : s.roots) {
            double d = 0;
            for (std::size_t i = 0; i < n; ++i) d += r[i] * x[i];
            if (std::fabs(d) < slab) wall = true;
            neg += d < 0;
        }
        if (wall) {
            ++out.discarded;
            continue;
        }
        ++out.hits;
        out.signed_hits += (neg % 2) ? -1 : 1;
    }
    return out;
}

McPizza mc_finish(const McSetup& s, const McConfig& cfg, std::int64_t sh, std::uint64_t hits, std::uint64_t disc) {
    McPizza r;
    r.samples = cfg.samples;
    r.signed_hits = sh;
    r.hits = hits;
    r.discarded = disc;
    const double n = static_cast<double>(cfg.samples);
    const double mean = static_cast<double>(sh) / n;
    const double m2 = static_cast<double>(hits) / n;
    r.estimate = s.volume * mean;
    r.se = s.volume * std::sqrt(std::max(0.0, m2 - mean * mean) / n);
    return r;
}

}  // namespace

Arrangement::Arrangement(const std::string& type, int field_hint)
    : Arrangement(std::make_shared<const PseudoRootSystem>(build_system(type, field_hint))) {}

Arrangement::Arrangement(std::shared_ptr<const PseudoRootSystem> system) : system_(std::move(system)) {
    group_ = std::make_shared<CoxeterGroup>(default_positive_system(system_));
    if (system_->rank == system_->ambient_dim) chambers_ = chambers_with_signs(*group_);
}

const std::vector<TwoStructure>& Arrangement::two_structures() const {
    if (!structures_) structures_ = std::make_shared<std::vector<TwoStructure>>(enumerate_two_structures(*group_));
    return *structures_;
}

Valuation parse_valuation(const std::string& s) {
    if (s == "volume") return Valuation::Volume;
    if (s == "chi") return Valuation::Chi;
    throw ParseError("unknown valuation '" + s + "' (volume|chi)");
}

std::string to_string(Valuation v) { return v == Valuation::Volume ? "volume" : "chi"; }

std::string Body::label() const {
    switch (kind) {
        case Kind::Ball: return "ball(r=" + r2.to_string() + ")";
        case Kind::Annulus: return "annulus(" + r1.to_string() + "," + r2.to_string() + ")";
        case Kind::Box: return "box(c=" + c.to_string() + ")";
        case Kind::Orbit: return "orbit(p=" + pizza::to_json(p).dump() + ")";
        case Kind::Explicit: return "explicit";
    }
    return "?";
}

nlohmann::json Body::to_json() const {
    nlohmann::json j{{"label", label()}};
    if (polytope()) j["hrep"] = hrep.to_json();
    return j;
}

Body ball_body(const Field& f, const AlgebraicNumber& r) {
    if (r.sign() <= 0) throw DomainError("ball radius must be positive");
    Body b;
    b.kind = Body::Kind::Ball;
    b.r1 = r;
    b.r2 = r;
    b.c = AlgebraicNumber(f);
    return b;
}

Body annulus_body(const Field& f, const AlgebraicNumber& r1, const AlgebraicNumber& r2) {
    if (r1.sign() <= 0 || !(r1 < r2)) throw DomainError("annulus needs 0 < r1 < r2");
    Body b;
    b.kind = Body::Kind::Annulus;
    b.r1 = r1;
    b.r2 = r2;
    b.c = AlgebraicNumber(f);
    return b;
}

Body box_body(const Field& f, std::size_t n, const AlgebraicNumber& c) {
    if (c.sign() <= 0) throw DomainError("box half-width must be positive");
    Body b;
    b.kind = Body::Kind::Box;
    b.c = c;
    FVector lo(n, -c), hi(n, c);
    b.hrep = box_region(f, lo, hi, false, false);
    return b;
}

std::vector<FVector> base_chamber_rays(const CoxeterGroup& w) {
    const std::size_t n = w.system().ambient_dim;
    auto walls = base_chamber_walls(w);
    if (walls.size() != n || w.system().rank != n) throw DomainError("base chamber is not simplicial; arrangement not essential");
    std::vector<FVector> rows;
    for (auto k : walls) rows.push_back(w.positive().root(k));
    FMatrix inv = inverse(FMatrix::from_rows(rows));
    std::vector<FVector> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(inv.column(i));
    return out;
}

Body orbit_body(const CoxeterGroup& w, const FVector& p) {
    const auto& f = w.field();
    if (is_zero(p)) throw DomainError("orbit seed must be nonzero");
    // dominant representative of the orbit
    FVector dom;
    for (const auto& g : w.elements()) {
        FVector q = g.matrix.apply(p);
        bool ok = true;
        for (std::size_t k = 0; k < w.positive().size() && ok; ++k) ok = dot(q, w.positive().root(k)).sign() >= 0;
        if (ok) {
            dom = q;
            break;
        }
    }
    Body b;
    b.kind = Body::Kind::Orbit;
    b.p = p;
    b.c = AlgebraicNumber(f);
    b.hrep = HalfOpenRegion(f, w.system().ambient_dim);
    std::set<std::string> seen;
    for (const auto& ray : base_chamber_rays(w)) {
        AlgebraicNumber h = dot(dom, ray);
        for (const auto& g : w.elements()) {
            FVector u = g.matrix.apply(ray);
            if (!seen.insert(vector_key(u)).second) continue;
            b.hrep.add(negate(u), -h, false);
        }
    }
    return b;
}

Body explicit_body(const HalfOpenRegion& r) {
    if (!is_bounded(r)) throw UnboundedError("explicit body must be bounded");
    Body b;
    b.kind = Body::Kind::Explicit;
    b.hrep = r.closure();
    b.c = AlgebraicNumber(r.field());
    return b;
}

Body parse_body(const std::string& spec, const Arrangement& arr) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw ParseError("shape '" + spec + "' needs kind:params");
    std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
    const Field& f = arr.field();
    if (kind == "ball") return ball_body(f, parse_number(f, strip_key(rest, "r")));
    if (kind == "annulus") {
        auto parts = split(rest, ',');
        if (parts.size() != 2) throw ParseError("annulus needs r1,r2");
        return annulus_body(f, parse_number(f, strip_key(parts[0], "r1")), parse_number(f, strip_key(parts[1], "r2")));
    }
    if (kind == "box") return box_body(f, arr.dim(), parse_number(f, strip_key(rest, "c")));
    if (kind == "orbit") {
        FVector p;
        for (const auto& t : split(strip_key(rest, "p"), ',')) p.push_back(parse_number(f, t));
        if (p.size() != arr.dim()) throw ParseError("orbit seed has " + std::to_string(p.size()) + " coordinates, expected " +
                                                    std::to_string(arr.dim()));
        return orbit_body(arr.group(), p);
    }
    throw ParseError("unknown shape kind '" + kind + "'");
}

int body_field_requirement(const std::string& spec) {
    auto colon = spec.find(':');
    int n = 1;
    if (colon == std::string::npos) return n;
    for (auto t : split(spec.substr(colon + 1), ',')) {
        auto eq = t.find('=');
        if (eq != std::string::npos) t = t.substr(eq + 1);
        int r = field_requirement(t);
        n = n / std::gcd(n, r) * r;
    }
    return n;
}

bool is_w_stable(const Body& k, const CoxeterGroup& w) {
    if (!k.polytope()) return true;
    std::set<std::string> keys;
    for (const auto& c : k.hrep.constraints()) keys.insert(constraint_key(c));
    for (std::size_t r = 0; r < w.positive().size(); ++r) {
        const FMatrix& m = w.element(w.reflection(r)).matrix;
        for (const auto& c : k.hrep.constraints())
            if (!keys.count(constraint_key({m.apply(c.normal), c.offset, false}))) return false;
    }
    return true;
}

void check_pizza_hypotheses(const Arrangement& arr, const Body& k, const FVector& a) {
    const auto& w = arr.group();
    if (a.size() != arr.dim()) throw DomainError("a has " + std::to_string(a.size()) + " coordinates, expected " + std::to_string(arr.dim()));
    if (!w.has_minus_id()) throw HypothesisError("-id is not in W(" + arr.system().label + ")");
    if (!is_w_stable(k, w)) throw HypothesisError("body " + k.label() + " is not W-stable");
    if (!k.polytope()) {
        const AlgebraicNumber& r = k.kind == Body::Kind::Annulus ? k.r1 : k.r2;
        if (dot(a, a) > r * r)
            throw HypothesisError("hull{w(a)} not inside the ball of radius " + r.to_string() + ": |a| too large at w(a)=" +
                                  to_json(a).dump());
        return;
    }
    for (const auto& g : w.elements()) {
        FVector wa = g.matrix.apply(a);
        if (!k.hrep.contains(wa)) throw HypothesisError("hull{w(a)} not inside K: w(a)=" + to_json(wa).dump() + " lies outside");
    }
}

ExactPizza exact_pizza_serial(const Arrangement& arr, const HalfOpenRegion& body, Valuation v) {
    const auto& ch = arr.chambers();
    if (ch.empty()) throw DomainError("arrangement has no chamber decomposition (not essential)");
    ExactPizza out{AlgebraicNumber(arr.field()), {}};
    for (std::size_t i = 0; i < ch.size(); ++i) {
        AlgebraicNumber val = measure(intersect(ch[i].open, body), v);
        out.terms.push_back({i, ch[i].sign, val});
        if (ch[i].sign > 0) out.total += val;
        else out.total -= val;
    }
    return out;
}

ExactPizza exact_pizza_parallel(const Arrangement& arr, const HalfOpenRegion& body, Valuation v) {
    const auto& ch = arr.chambers();
    if (ch.empty()) throw DomainError("arrangement has no chamber decomposition (not essential)");
    const long nc = static_cast<long>(ch.size());
    std::vector<AlgebraicNumber> vals(ch.size());
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < nc; ++i) {
        try {
            vals[i] = measure(intersect(ch[i].open, body), v);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    // fixed-order merge keeps the result independent of the schedule
    ExactPizza out{AlgebraicNumber(arr.field()), {}};
    for (std::size_t i = 0; i < ch.size(); ++i) {
        out.terms.push_back({i, ch[i].sign, vals[i]});
        if (ch[i].sign > 0) out.total += vals[i];
        else out.total -= vals[i];
    }
    return out;
}

double ball_volume(std::size_t n, double r) {
    const double dn = static_cast<double>(n);
    return std::pow(M_PI, dn / 2) / std::tgamma(dn / 2 + 1) * std::pow(r, dn);
}

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ splitmix64(index + 1)); }

McPizza mc_pizza_serial(const Arrangement& arr, const Body& k, const FVector& a, const McConfig& cfg) {
    McSetup s = mc_setup(arr, k, a);
    const std::uint64_t shards = (cfg.samples + cfg.shard - 1) / cfg.shard;
    std::int64_t sh = 0;
    std::uint64_t hits = 0, disc = 0;
    for (std::uint64_t i = 0; i < shards; ++i) {
        auto r = mc_shard(s, cfg.seed, i, std::min(cfg.shard, cfg.samples - i * cfg.shard), cfg.slab);
        sh += r.signed_hits;
        hits += r.hits;
        disc += r.discarded;
    }
    return mc_finish(s, cfg, sh, hits, disc);
}

McPizza mc_pizza_parallel(const Arrangement& arr, const Body& k, const FVector& a, const McConfig& cfg) {
    McSetup s = mc_setup(arr, k, a);
    const long shards = static_cast<long>((cfg.samples + cfg.shard - 1) / cfg.shard);
    std::int64_t sh = 0;
    std::uint64_t hits = 0, disc = 0;
    // integer counts: the reduction is exact, so thread count does not change the result
#pragma omp parallel for schedule(static) reduction(+ : sh, hits, disc)
    for (long i = 0; i < shards; ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        auto r = mc_shard(s, cfg.seed, ui, std::min(cfg.shard, cfg.samples - ui * cfg.shard), cfg.slab);
        sh += r.signed_hits;
        hits += r.hits;
        disc += r.discarded;
    }
    return mc_finish(s, cfg, sh, hits, disc);
}

Method parse_method(const std::string& s) {
    Method m;
    if (s == "exact") return m;
    if (s.rfind("mc", 0) != 0) throw ParseError("method must be exact or mc:n=..,seed=..");
    m.exact = false;
    auto colon = s.find(':');
    if (colon == std::string::npos) return m;
    for (const auto& kv : split(s.substr(colon + 1), ',')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("bad mc option '" + kv + "'");
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        double d = 0;
        try {
            d = std::stod(val);
        } catch (...) {
            throw ParseError("bad number '" + val + "'");
        }
        if (d < 0 || d != std::floor(d)) throw ParseError("mc option " + key + " must be a nonnegative integer");
        auto u = static_cast<std::uint64_t>(d);
        if (key == "n") m.mc.samples = u;
        else if (key == "seed") m.mc.seed = u;
        else if (key == "shard") m.mc.shard = std::max<std::uint64_t>(1, u);
        else throw ParseError("unknown mc option '" + key + "'");
    }
    if (m.mc.samples == 0) throw ParseError("mc needs n > 0");
    return m;
}

nlohmann::json PizzaResult::to_json(bool with_terms) const {
    nlohmann::json j;
    j["exact"] = exact;
    if (exact) {
        j["value"] = pizza::to_json(value);
        j["decimal"] = value.to_decimal(20);
        j["is_zero"] = value.is_zero();
    } else {
        j["estimate"] = estimate;
        j["se"] = se;
        j["samples"] = mc.samples;
        j["discarded"] = mc.discarded;
        j["signed_hits"] = mc.signed_hits;
    }
    if (with_terms && exact) {
        j["terms"] = nlohmann::json::array();
        for (const auto& t : terms)
            j["terms"].push_back({{"chamber", t.chamber}, {"sign", t.sign}, {"value", t.value.to_decimal(20)}});
    }
    return j;
}

PizzaResult pizza_sum(const Arrangement& arr, const Body& k, const FVector& a, Valuation v, const Method& m) {
    check_pizza_hypotheses(arr, k, a);
    PizzaResult r;
    r.exact = m.exact;
    if (m.exact) {
        if (!k.polytope()) throw UnsupportedError("exact method needs a polytope body (orbit, box, explicit)");
        if (arr.dim() > 4) throw ResourceError("exact method limited to dimension <= 4");
        if (arr.chambers().size() > kHeavyChambers && !m.heavy)
            throw ResourceError(std::to_string(arr.chambers().size()) + " chambers: exact sum needs --heavy");
        auto ex = exact_pizza_parallel(arr, transform(k.hrep, FMatrix::identity(arr.field(), arr.dim()), a), v);
        r.value = ex.total;
        r.terms = std::move(ex.terms);
        return r;
    }
    if (v != Valuation::Volume) throw UnsupportedError("Monte Carlo supports the volume valuation only");
    r.mc = mc_pizza_parallel(arr, k, a, m.mc);
    r.estimate = r.mc.estimate;
    r.se = r.mc.se;
    return r;
}

A1nClosedForm a1n_closed_form(const Arrangement& arr, const FVector& a) {
    for (const auto& t : arr.system().factors)
        if (!(t.family == 'A' && t.n == 1)) throw DomainError("closed form applies to type A1^n only, got " + arr.system().label);
    const Field& f = arr.field();
    const std::size_t n = arr.dim();
    A1nClosedForm out{AlgebraicNumber(f, Rational(1)), HalfOpenRegion(f, n)};
    for (std::size_t k = 0; k < arr.group().positive().size(); ++k) {
        const FVector& e = arr.group().positive().root(k);
        AlgebraicNumber t = dot(a, e) * Rational(2);
        out.value *= t;
        // segment strictly away from 0, closed at 2(a,e)e
        FVector ref = scale(e, AlgebraicNumber(f, Rational(t.sign() >= 0 ? 1 : -1)));
        out.region.add(ref, AlgebraicNumber(f), true);
        out.region.add(negate(ref), -abs(t), false);
    }
    return out;
}

PointwiseCheck expansion_check_pointwise(const Arrangement& arr, const std::vector<TwoStructure>& ts, const FVector& x) {
    const auto& ps = arr.group().positive();
    std::vector<FVector> pos;
    for (std::size_t k = 0; k < ps.size(); ++k) pos.push_back(ps.root(k));
    PointwiseCheck c;
    c.lhs = negative_count(pos, x) % 2 ? -1 : 1;
    for (const auto& phi : ts) {
        std::vector<FVector> pp;
        for (auto i : phi.positive_indices()) pp.push_back(arr.system().roots[i]);
        c.rhs += phi.epsilon * (negative_count(pp, x) % 2 ? -1 : 1);
    }
    return c;
}

std::vector<Chamber> structure_chambers(const Arrangement& arr, const TwoStructure& phi) {
    std::vector<FVector> roots;
    for (auto i : phi.root_indices()) roots.push_back(arr.system().roots[i]);
    auto sub = std::make_shared<const PseudoRootSystem>(
        system_from_roots(arr.field(), arr.dim(), std::move(roots), phi.type_signature()));
    CoxeterGroup g(positive_system(sub, arr.group().positive().order_vector));
    return chambers_with_signs(g);
}

ValuationCheck expansion_check_valuation(const Arrangement& arr, const std::vector<TwoStructure>& ts,
                                         const HalfOpenRegion& k, Valuation v) {
    if (!is_bounded(k)) throw UnboundedError("K must be bounded");
    ValuationCheck c{exact_pizza_serial(arr, k, v).total, AlgebraicNumber(arr.field())};
    for (const auto& phi : ts) {
        AlgebraicNumber part(arr.field());
        for (const auto& t : structure_chambers(arr, phi)) {
            AlgebraicNumber val = measure(intersect(t.open, k), v);
            if (t.sign > 0) part += val;
            else part -= val;
        }
        c.rhs += part * Rational(phi.epsilon);
    }
    return c;
}

Polynomial Polynomial::constant(const Field& f, std::size_t vars, const AlgebraicNumber& c) {
    Polynomial p(f, vars);
    p.add_term(std::vector<int>(vars, 0), c);
    return p;
}

Polynomial Polynomial::linear(const FVector& coeffs) {
    Polynomial p(coeffs.at(0).field(), coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        std::vector<int> e(coeffs.size(), 0);
        e[i] = 1;
        p.add_term(e, coeffs[i]);
    }
    return p;
}

void Polynomial::add_term(const std::vector<int>& e, const AlgebraicNumber& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

bool Polynomial::homogeneous(int degree) const {
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (int x : e) d += x;
        if (d != degree) return false;
    }
    return true;
}

AlgebraicNumber Polynomial::evaluate(const FVector& x) const {
    AlgebraicNumber s(field_);
    for (const auto& [e, c] : terms_) {
        AlgebraicNumber t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) t *= x[i];
        s += t;
    }
    return s;
}

Polynomial Polynomial::compose(const FMatrix& m) const {
    Polynomial out(field_, vars_);
    std::vector<Polynomial> subs;
    for (std::size_t i = 0; i < vars_; ++i) subs.push_back(linear(m.row(i)));
    for (const auto& [e, c] : terms_) {
        Polynomial t = constant(field_, vars_, c);
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) t = t * subs[i];
        out += t;
    }
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (!field_) {
        field_ = o.field_;
        vars_ = o.vars_;
    }
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial out(field_ ? field_ : o.field_, vars_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            std::vector<int> e(e1.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
            out.add_term(e, c1 * c2);
        }
    return out;
}

Polynomial Polynomial::operator*(const AlgebraicNumber& s) const {
    Polynomial out(field_, vars_);
    for (const auto& [e, c] : terms_) out.add_term(e, c * s);
    return out;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!s.empty()) s += " + ";
        s += "(" + it->second.to_string() + ")";
        for (std::size_t i = 0; i < it->first.size(); ++i)
            if (it->first[i] > 0)
                s += "*a" + std::to_string(i + 1) + (it->first[i] > 1 ? "^" + std::to_string(it->first[i]) : "");
    }
    return s;
}

nlohmann::json Polynomial::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [e, c] : terms_) j.push_back({{"exponents", e}, {"coeff", pizza::to_json(c)}});
    return j;
}

Polynomial f_polynomial(const Arrangement& arr, const std::vector<TwoStructure>& ts) {
    const Field& f = arr.field();
    const std::size_t n = arr.dim();
    Polynomial out(f, n);
    for (const auto& phi : ts) {
        for (const auto& c : phi.components)
            if (c.lines != 1)
                throw DomainError("f-polynomial needs A1-only 2-structures; found a " + c.type() + " component");
        Polynomial prod = Polynomial::constant(f, n, AlgebraicNumber(f, Rational(phi.epsilon)));
        for (auto i : phi.positive_indices()) prod = prod * Polynomial::linear(scale(arr.system().roots[i], AlgebraicNumber(f, Rational(2))));
        out += prod;
    }
    return out;
}

SurdSum intrinsic1_pizza_2d(const Arrangement& arr, const HalfOpenRegion& body, bool closed_chambers) {
    if (arr.dim() != 2) throw DomainError("V1 pizza is implemented in the plane only");
    SurdSum total(arr.field());
    for (const auto& ch : arr.chambers()) {
        SurdSum v = intrinsic_vector_2d(intersect(closed_chambers ? ch.closed : ch.open, body)).v1;
        if (ch.sign > 0) total += v;
        else total -= v;
    }
    return total;
}

AlgebraicNumber crust_exact(const Arrangement& arr, const HalfOpenRegion& inner, const HalfOpenRegion& outer,
                            const FVector& a, Valuation v) {
    FMatrix id = FMatrix::identity(arr.field(), arr.dim());
    HalfOpenRegion in = transform(inner, id, a), out = transform(outer, id, a);
    AlgebraicNumber total(arr.field());
    for (const auto& ch : arr.chambers()) {
        AlgebraicNumber val = measure(subtract(intersect(ch.open, out), in), v);
        if (ch.sign > 0) total += val;
        else total -= val;
    }
    return total;
}

}  // namespace pizza
