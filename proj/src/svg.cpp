#include "pizza/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace pizza {

namespace {

using Pt = std::pair<double, double>;
using Poly = std::vector<Pt>;

struct Shape {
    Poly pts;
    std::string fill, stroke;
    double opacity = 1.0;
};

Poly to_poly(const std::vector<FVector>& vs) {
    Poly p;
    for (const auto& v : vs) p.emplace_back(v[0].to_double(), v[1].to_double());
    return p;
}

// bounded cell of the plane as a polygon; empty when it has no area
Poly cell_poly(const HalfOpenRegion& r) {
    if (is_empty(r.interior())) return {};
    auto hull = convex_hull_2d(vertices(r.closure()));
    if (hull.size() < 3) return {};
    return to_poly(hull);
}

// SVG 1.1 has no hsl(), so convert by hand
std::string hsl(std::size_t i, int light) {
    double h = static_cast<double>((i * 137) % 360) / 60.0, l = light / 100.0, sat = 0.6;
    double c = (1 - std::abs(2 * l - 1)) * sat, x = c * (1 - std::abs(std::fmod(h, 2.0) - 1)), m = l - c / 2;
    double rgb[3] = {0, 0, 0};
    int seg = static_cast<int>(h);
    const int order[6][3] = {{0, 1, 2}, {1, 0, 2}, {2, 0, 1}, {2, 1, 0}, {1, 2, 0}, {0, 2, 1}};
    rgb[order[seg][0]] = c, rgb[order[seg][1]] = x;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>((rgb[0] + m) * 255 + 0.5),
                  static_cast<int>((rgb[1] + m) * 255 + 0.5), static_cast<int>((rgb[2] + m) * 255 + 0.5));
    return buf;
}

class Canvas {
public:
    void add(Shape s) {
        for (const auto& [x, y] : s.pts) {
            lo_x = std::min(lo_x, x), hi_x = std::max(hi_x, x);
            lo_y = std::min(lo_y, y), hi_y = std::max(hi_y, y);
        }
        shapes_.push_back(std::move(s));
    }
    void dot(Pt p, std::string colour) { dots_.emplace_back(p, std::move(colour)); }

    std::string render(double width = 640) const {
        double w = std::max(hi_x - lo_x, 1e-9), h = std::max(hi_y - lo_y, 1e-9);
        double pad = 0.04 * std::max(w, h), s = width / (w + 2 * pad);
        double height = (h + 2 * pad) * s;
        auto X = [&](double x) { return (x - lo_x + pad) * s; };
        auto Y = [&](double y) { return (hi_y - y + pad) * s; };
        std::ostringstream o;
        o.precision(6);
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
          << width << ' ' << height << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        for (const auto& sh : shapes_) {
            o << "<polygon points=\"";
            for (const auto& [x, y] : sh.pts) o << X(x) << ',' << Y(y) << ' ';
            o << "\" fill=\"" << sh.fill << "\" fill-opacity=\"" << sh.opacity << "\" stroke=\"" << sh.stroke
              << "\" stroke-width=\"1\"/>\n";
        }
        for (const auto& [p, c] : dots_) o << "<circle cx=\"" << X(p.first) << "\" cy=\"" << Y(p.second) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
        o << "</svg>\n";
        return o.str();
    }

private:
    std::vector<Shape> shapes_;
    std::vector<std::pair<Pt, std::string>> dots_;
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
};

}  // namespace

std::string svg_dissection(const DissectionCertificate& c) {
    DihedralFrame fr(c.m, c.field);
    Canvas cv;
    for (int s = 0; s < fr.sectors(); ++s) {
        Poly p = cell_poly(intersect(fr.sector(s), c.proxy));
        if (!p.empty()) cv.add({p, fr.sign(s) > 0 ? "#b0b0b0" : "#f0f0f0", "#999999"});
    }
    for (const auto& piece : c.pieces) {
        if (piece.negligible) continue;
        for (const auto& cell : piece.region.cells()) {
            Poly p = cell_poly(intersect(cell, c.proxy));
            if (p.empty()) continue;
            cv.add({p, piece.sign > 0 ? "#1f4e8c" : "#a9c8ef", "#222222", 0.75});
        }
    }
    cv.dot({c.a[0].to_double(), c.a[1].to_double()}, "#c0392b");
    cv.dot({0, 0}, "black");
    return cv.render();
}

std::string svg_bg(const BgCertificate& c) {
    Canvas cv;
    Poly src = to_poly(c.source), dst = to_poly(c.target);
    double src_hi = -std::numeric_limits<double>::infinity(), dst_lo = -src_hi;
    for (const auto& p : src) src_hi = std::max(src_hi, p.first);
    for (const auto& p : dst) dst_lo = std::min(dst_lo, p.first);
    double w = 0;
    for (const auto& p : src) w = std::max(w, std::abs(p.first - src_hi));
    const double shift = src_hi - dst_lo + 0.2 * std::max(w, 1.0);
    auto moved = [&](Poly p) {
        for (auto& q : p) q.first += shift;
        return p;
    };
    cv.add({src, "none", "#000000"});
    cv.add({moved(dst), "none", "#000000"});
    for (std::size_t i = 0; i < c.pieces.size(); ++i) {
        const auto& piece = c.pieces[i];
        // darker for pieces that stay put
        bool still = piece.g.linear.is_identity() && is_zero(piece.g.translation);
        std::string fill = hsl(i, still ? 35 : 65);
        cv.add({to_poly(piece.vertices), fill, "#333333", 0.85});
        cv.add({moved(to_poly(piece.image())), fill, "#333333", 0.85});
    }
    return cv.render(800);
}

}  // namespace pizza
