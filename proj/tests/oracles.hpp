#pragma once

#include <array>
#include <map>
#include <tuple>
#include <vector>

#include "pizza/bolyai.hpp"

namespace oracle {

// An integer box in the plane: [x0,x1] x [y0,y1], or (x0,x1] x (y0,y1] when half open.
struct IBox {
    int sign;
    long x0, y0, x1, y1;
    bool half_open;
};

// Cells of the unit grid: 0 = point, 1 = open unit segment, 2 = open unit square.
// A box is the disjoint union of the cells below; two combinations can be cut into
// each other (cells moved by isometries) iff the signed counts per kind agree.
inline std::array<long, 3> cell_counts(const std::vector<IBox>& items) {
    std::map<std::tuple<long, long, int>, long> cells;  // (2x, 2y) of the cell centre, kind
    for (const auto& b : items) {
        if (b.half_open && (b.x0 == b.x1 || b.y0 == b.y1)) continue;  // empty
        long lx = 2 * b.x0 + (b.half_open ? 1 : 0), ly = 2 * b.y0 + (b.half_open ? 1 : 0);
        for (long X = lx; X <= 2 * b.x1; ++X)
            for (long Y = ly; Y <= 2 * b.y1; ++Y) cells[{X, Y, static_cast<int>((X & 1) + (Y & 1))}] += b.sign;
    }
    std::array<long, 3> out{0, 0, 0};
    for (const auto& [k, c] : cells) out[std::get<2>(k)] += c;
    return out;
}

inline std::vector<pizza::SignedParallelotope> as_items(const pizza::Field& f, const std::vector<IBox>& boxes) {
    using pizza::AlgebraicNumber;
    using pizza::Rational;
    auto pt = [&](long x, long y) { return pizza::FVector{AlgebraicNumber(f, Rational(x)), AlgebraicNumber(f, Rational(y))}; };
    std::vector<pizza::SignedParallelotope> out;
    for (const auto& b : boxes) {
        std::vector<pizza::FVector> edges;
        if (b.x1 > b.x0) edges.push_back(pt(b.x1 - b.x0, 0));
        if (b.y1 > b.y0) edges.push_back(pt(0, b.y1 - b.y0));
        if (b.half_open && edges.size() < 2) continue;
        out.emplace_back(b.sign, pizza::make_parallelotope(pt(b.x0, b.y0), edges, b.half_open));
    }
    return out;
}

// Pair of combinations: b rearranges a (translations, transposes, half-open boxes reshaped
// to the same area) and, when perturb is set, gains one more random box.
template <class Rng>
std::pair<std::vector<IBox>, std::vector<IBox>> random_box_pair(Rng& rng, bool perturb) {
    auto c = [&] { return static_cast<long>(rng() % 5); };
    auto len = [&] { return static_cast<long>(rng() % 4); };
    auto coin = [&] { return rng() % 2 == 1; };
    auto random_box = [&] {
        long x = c(), y = c();
        return IBox{coin() ? 1 : -1, x, y, x + len(), y + len(), coin()};
    };
    std::vector<IBox> a, b;
    for (int i = 0; i < 3; ++i) a.push_back(random_box());
    for (const auto& x : a) {
        long w = x.x1 - x.x0, h = x.y1 - x.y0, s = c();
        if (x.half_open && w > 0 && h > 0 && coin()) b.push_back({x.sign, s, 0, s + w * h, 1, true});
        else if (coin()) b.push_back({x.sign, s, s, s + h, s + w, x.half_open});
        else b.push_back({x.sign, x.x0 + s, x.y0, x.x1 + s, x.y1, x.half_open});
    }
    if (perturb) b.push_back(random_box());
    return {a, b};
}

}  // namespace oracle
