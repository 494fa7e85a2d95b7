#include "pizza/lp.hpp"


namespace pizza {
namespace {

// Dense tableau for: maximize obj . y  s.t.  A y = b, y >= 0, b >= 0.
class Tableau {
public:
    Tableau(const Field& f, std::size_t rows, std::size_t cols)
        : f_(f), m_(rows), n_(cols), a_(rows, FVector(cols + 1, AlgebraicNumber(f))), basis_(rows, 0) {}

    AlgebraicNumber& at(std::size_t r, std::size_t c) { return a_[r][c]; }
    AlgebraicNumber& rhs(std::size_t r) { return a_[r][n_]; }
    std::size_t& basis(std::size_t r) { return basis_[r]; }
    std::size_t rows() const { return m_; }

    void pivot(std::size_t r, std::size_t c) {
        AlgebraicNumber inv = a_[r][c].inverse();
        for (auto& x : a_[r])
            if (!x.is_zero()) x *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || a_[i][c].is_zero()) continue;
            AlgebraicNumber k = a_[i][c];
            for (std::size_t j = 0; j <= n_; ++j)
                if (!a_[r][j].is_zero()) a_[i][j] -= k * a_[r][j];
        }
        basis_[r] = c;
    }

    // Runs simplex for objective `obj` restricted to columns with allowed[j].
    // Returns false if unbounded.
    bool optimize(const FVector& obj, const std::vector<bool>& allowed) {
        for (;;) {
            // reduced cost d_j = obj_j - sum_i obj_{basis_i} a_ij
            std::size_t enter = n_;
            for (std::size_t j = 0; j < n_ && enter == n_; ++j) {
                if (!allowed[j]) continue;
                bool basic = false;
                for (std::size_t i = 0; i < m_; ++i)
                    if (basis_[i] == j) basic = true;
                if (basic) continue;
                AlgebraicNumber d = obj[j];
                for (std::size_t i = 0; i < m_; ++i)
                    if (!a_[i][j].is_zero() && !obj[basis_[i]].is_zero()) d -= obj[basis_[i]] * a_[i][j];
                if (d.sign() > 0) enter = j;
            }
            if (enter == n_) return true;
            std::size_t leave = m_;
            AlgebraicNumber best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (a_[i][enter].sign() <= 0) continue;
                AlgebraicNumber ratio = a_[i][n_] / a_[i][enter];
                if (leave == m_) {
                    leave = i;
                    best = ratio;
                    continue;
                }
                int s = (ratio - best).sign();
                if (s < 0 || (s == 0 && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
    }

    AlgebraicNumber objective_value(const FVector& obj) const {
        AlgebraicNumber v(f_);
        for (std::size_t i = 0; i < m_; ++i)
            if (!obj[basis_[i]].is_zero()) v += obj[basis_[i]] * a_[i][n_];
        return v;
    }

    FVector solution() const {
        FVector y = zero_vector(f_, n_);
        for (std::size_t i = 0; i < m_; ++i) y[basis_[i]] = a_[i][n_];
        return y;
    }

    void drop_row(std::size_t r) {
        a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        --m_;
    }

private:
    Field f_;
    std::size_t m_, n_;
    std::vector<FVector> a_;
    std::vector<std::size_t> basis_;
};

}  // namespace

LpResult lp_maximize(const Field& f, std::size_t dim, const FVector& c,
                     const std::vector<LinearConstraint>& constraints) {
    const std::size_t m = constraints.size();
    // columns: x+ (dim), x- (dim), surplus (m), artificial (m)
    const std::size_t nx = 2 * dim, ns = m, cols = nx + ns + m;
    Tableau t(f, m, cols);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& con = constraints[i];
        if (con.normal.size() != dim) throw DomainError("lp: constraint dimension mismatch");
        bool flip = con.offset.sign() < 0;
        for (std::size_t k = 0; k < dim; ++k) {
            t.at(i, k) = flip ? -con.normal[k] : con.normal[k];
            t.at(i, dim + k) = -t.at(i, k);
        }
        t.at(i, nx + i) = AlgebraicNumber(f, Rational(flip ? 1 : -1));
        t.at(i, nx + ns + i) = AlgebraicNumber(f, Rational(1));
        t.rhs(i) = flip ? -con.offset : con.offset;
        t.basis(i) = nx + ns + i;
    }
    std::vector<bool> allowed(cols, true);
    FVector phase1 = zero_vector(f, cols);
    for (std::size_t i = 0; i < m; ++i) phase1[nx + ns + i] = AlgebraicNumber(f, Rational(-1));
    t.optimize(phase1, allowed);
    LpResult res;
    if (t.objective_value(phase1).sign() < 0) {
        res.status = LpStatus::Infeasible;
        return res;
    }
    // Drive artificials out of the basis.
    for (std::size_t i = 0; i < t.rows();) {
        if (t.basis(i) < nx + ns) {
            ++i;
            continue;
        }
        std::size_t j = 0;
        while (j < nx + ns && t.at(i, j).is_zero()) ++j;
        if (j == nx + ns) {
            t.drop_row(i);
        } else {
            t.pivot(i, j);
            ++i;
        }
    }
    for (std::size_t j = nx + ns; j < cols; ++j) allowed[j] = false;
    FVector obj = zero_vector(f, cols);
    for (std::size_t k = 0; k < dim; ++k) {
        obj[k] = c[k];
        obj[dim + k] = -c[k];
    }
    if (!t.optimize(obj, allowed)) {
        res.status = LpStatus::Unbounded;
        return res;
    }
    res.status = LpStatus::Optimal;
    res.value = t.objective_value(obj);
    FVector y = t.solution();
    res.point = zero_vector(f, dim);
    for (std::size_t k = 0; k < dim; ++k) res.point[k] = y[k] - y[dim + k];
    return res;
}

namespace {

// Plane case, exact and without the simplex. If R is nonempty then either its
// interior is, and the closure has an edge on some line whose relative interior
// satisfies the others strictly, or R meets the line of a weak constraint.
// Both are interval problems on the lines.
struct Bound {
    bool set = false;
    AlgebraicNumber num, den;  // den > 0
    bool strict = false;
};

AlgebraicNumber dot2(const FVector& x, const FVector& y) { return x[0] * y[0] + x[1] * y[1]; }

int compare(const AlgebraicNumber& p1, const AlgebraicNumber& q1, const AlgebraicNumber& p2, const AlgebraicNumber& q2) {
    return (p1 * q2 - p2 * q1).sign();
}

// Point of {x on line i} satisfying the others (all strictly if `open`).
// Points of the line are (b_i n_i + s d) / |n_i|^2.
std::optional<FVector> on_line(const Field& f, const std::vector<LinearConstraint>& cons, std::size_t i, bool open) {
    const FVector& ni = cons[i].normal;
    const AlgebraicNumber& bi = cons[i].offset;
    const AlgebraicNumber nn = dot2(ni, ni);
    FVector d{-ni[1], ni[0]};
    Bound lo, hi;
    for (std::size_t j = 0; j < cons.size(); ++j) {
        if (j == i) continue;
        const auto& c = cons[j];
        bool strict = open || c.strict;
        AlgebraicNumber al = dot2(c.normal, d);
        AlgebraicNumber nij = dot2(c.normal, ni);
        AlgebraicNumber be = c.offset * nn - bi * nij;
        int sa = al.sign();
        if (sa == 0) {
            int sb = be.sign();
            if (sb == 0 && open && nij.sign() > 0) continue;  // same boundary as i
            if (sb > 0 || (sb == 0 && strict)) return std::nullopt;
            continue;
        }
        if (sa < 0) {
            al = -al;
            be = -be;
        }
        Bound& bd = sa > 0 ? lo : hi;
        if (!bd.set) {
            bd = {true, be, al, strict};
            continue;
        }
        int cmp = compare(be, al, bd.num, bd.den);
        if ((sa > 0 && cmp > 0) || (sa < 0 && cmp < 0)) bd = {true, be, al, strict};
        else if (cmp == 0) bd.strict = bd.strict || strict;
    }
    AlgebraicNumber s(f);
    const AlgebraicNumber one(f, Rational(1));
    if (lo.set && hi.set) {
        int cmp = compare(hi.num, hi.den, lo.num, lo.den);
        if (cmp < 0 || (cmp == 0 && (lo.strict || hi.strict))) return std::nullopt;
        s = (lo.num / lo.den + hi.num / hi.den) * AlgebraicNumber(f, Rational(1, 2));
    } else if (lo.set) {
        s = lo.num / lo.den + one;
    } else if (hi.set) {
        s = hi.num / hi.den - one;
    }
    AlgebraicNumber inv = nn.inverse();
    return FVector{(bi * ni[0] + s * d[0]) * inv, (bi * ni[1] + s * d[1]) * inv};
}

std::optional<FVector> plane_feasible_point(const Field& f, const std::vector<LinearConstraint>& all) {
    std::vector<LinearConstraint> cons;
    for (const auto& c : all) {
        if (c.normal[0].is_zero() && c.normal[1].is_zero()) {
            int s = c.offset.sign();
            if (s > 0 || (s == 0 && c.strict)) return std::nullopt;
            continue;
        }
        cons.push_back(c);
    }
    if (cons.empty()) return zero_vector(f, 2);
    for (std::size_t i = 0; i < cons.size(); ++i) {
        auto x = on_line(f, cons, i, true);
        if (!x) continue;
        // step off line i into the open side, short of every other line
        const FVector& ni = cons[i].normal;
        AlgebraicNumber eps(f, Rational(1));
        for (std::size_t j = 0; j < cons.size(); ++j) {
            AlgebraicNumber dn = dot2(cons[j].normal, ni);
            if (j == i || dn.sign() >= 0) continue;
            AlgebraicNumber slack = dot2(cons[j].normal, *x) - cons[j].offset;
            if (slack.sign() <= 0) continue;
            AlgebraicNumber cap = slack / (-dn) * AlgebraicNumber(f, Rational(1, 2));
            if ((cap - eps).sign() < 0) eps = cap;
        }
        return FVector{(*x)[0] + eps * ni[0], (*x)[1] + eps * ni[1]};
    }
    for (std::size_t i = 0; i < cons.size(); ++i) {
        if (cons[i].strict) continue;
        if (auto x = on_line(f, cons, i, false)) return x;
    }
    return std::nullopt;
}

std::optional<FVector> simplex_feasible_point(const Field& f, std::size_t dim,
                                              const std::vector<LinearConstraint>& constraints);

}  // namespace

std::optional<FVector> feasible_point(const Field& f, std::size_t dim,
                                      const std::vector<LinearConstraint>& constraints) {
    if (dim == 2) return plane_feasible_point(f, constraints);
    return simplex_feasible_point(f, dim, constraints);
}

namespace {

std::optional<FVector> simplex_feasible_point(const Field& f, std::size_t dim,
                                              const std::vector<LinearConstraint>& constraints) {
    bool any_strict = false;
    for (const auto& c : constraints) any_strict = any_strict || c.strict;
    if (!any_strict) {
        auto r = lp_maximize(f, dim, zero_vector(f, dim), constraints);
        if (r.status == LpStatus::Infeasible) return std::nullopt;
        return r.point;
    }
    // maximize s subject to (a,x) - s >= b on strict rows, s <= 1.
    std::vector<LinearConstraint> ext;
    ext.reserve(constraints.size() + 1);
    for (const auto& c : constraints) {
        LinearConstraint e{c.normal, c.offset, false};
        e.normal.push_back(c.strict ? AlgebraicNumber(f, Rational(-1)) : AlgebraicNumber(f));
        ext.push_back(std::move(e));
    }
    LinearConstraint cap{zero_vector(f, dim + 1), AlgebraicNumber(f, Rational(-1)), false};
    cap.normal[dim] = AlgebraicNumber(f, Rational(-1));
    ext.push_back(cap);
    FVector obj = zero_vector(f, dim + 1);
    obj[dim] = AlgebraicNumber(f, Rational(1));
    auto r = lp_maximize(f, dim + 1, obj, ext);
    if (r.status != LpStatus::Optimal || r.value.sign() <= 0) return std::nullopt;
    r.point.pop_back();
    return r.point;
}

}  // namespace

std::vector<std::size_t> irredundant_constraints(const Field& f, std::size_t dim,
                                                 const std::vector<LinearConstraint>& constraints) {
    std::vector<std::size_t> keep;
    std::vector<bool> dropped(constraints.size(), false);
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        std::vector<LinearConstraint> others;
        for (std::size_t j = 0; j < constraints.size(); ++j)
            if (j != i && !dropped[j]) others.push_back({constraints[j].normal, constraints[j].offset, false});
        // min (a_i, x) over the others >= b_i  <=>  constraint i is implied.
        auto r = lp_maximize(f, dim, negate(constraints[i].normal), others);
        bool implied = r.status == LpStatus::Optimal && (-r.value - constraints[i].offset).sign() >= 0;
        if (r.status == LpStatus::Infeasible) implied = true;
        if (implied)
            dropped[i] = true;
        else
            keep.push_back(i);
    }
    return keep;
}

}  // namespace pizza
