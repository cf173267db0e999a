#include "rotdev/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace rotdev {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", std::fabs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

// Maps a data box onto a square canvas with a margin, y pointing up.
struct Frame {
    double x0, y0, x1, y1;
    double size;
    double margin = 24.0;

    double sx(double x) const { return margin + (x - x0) / (x1 - x0) * (size - 2 * margin); }
    double sy(double y) const { return size - margin - (y - y0) / (y1 - y0) * (size - 2 * margin); }
    std::string pt(Vec2 p) const { return num(sx(p.x)) + "," + num(sy(p.y)); }
};

std::string header(int size) {
    const std::string s = std::to_string(size);
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + s + "\" height=\"" + s + "\" viewBox=\"0 0 " +
           s + " " + s + "\">\n<rect x=\"0\" y=\"0\" width=\"" + s + "\" height=\"" + s + "\" fill=\"white\"/>\n";
}

// Liang-Barsky clip of the line {p : <p,v> = level} to the box.
std::optional<std::pair<Vec2, Vec2>> clip_line(Vec2 v, double level, double x0, double y0, double x1, double y1) {
    const Vec2 base = level * v;
    const Vec2 dir = perp(v);
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    auto slab = [&](double p, double d, double a, double b) {
        if (d == 0.0) return p >= a && p <= b;
        double t0 = (a - p) / d, t1 = (b - p) / d;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        return lo <= hi;
    };
    if (!slab(base.x, dir.x, x0, x1) || !slab(base.y, dir.y, y0, y1)) return std::nullopt;
    return std::make_pair(base + lo * dir, base + hi * dir);
}

// Part of the box where <p,v> >= level, Sutherland-Hodgman against one plane.
std::vector<Vec2> clip_box(Vec2 v, double level, double x0, double y0, double x1, double y1) {
    const std::vector<Vec2> box{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < box.size(); ++i) {
        const Vec2 a = box[i], b = box[(i + 1) % box.size()];
        const double da = dot(a, v) - level, db = dot(b, v) - level;
        if (da >= 0) out.push_back(a);
        if ((da >= 0) != (db >= 0)) out.push_back(a + (da / (da - db)) * (b - a));
    }
    return out;
}

} // namespace

std::string svg_hull(const std::vector<Vec2>& hull, const std::optional<Carrier>& carrier, const SvgStyle& style) {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    for (const Vec2& p : hull) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    if (hull.empty()) x0 = y0 = 0.0, x1 = y1 = 1.0;
    const double span = std::max({x1 - x0, y1 - y0, 0.05});
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    const Frame f{cx - 0.75 * span, cy - 0.75 * span, cx + 0.75 * span, cy + 0.75 * span,
                  static_cast<double>(style.size)};
    std::string s = header(style.size);
    if (carrier) {
        if (auto seg = clip_line(carrier->v, carrier->alpha, f.x0, f.y0, f.x1, f.y1))
            s += "<line class=\"carrier\" x1=\"" + num(f.sx(seg->first.x)) + "\" y1=\"" + num(f.sy(seg->first.y)) +
                 "\" x2=\"" + num(f.sx(seg->second.x)) + "\" y2=\"" + num(f.sy(seg->second.y)) + "\" stroke=\"" +
                 style.accent + "\" stroke-dasharray=\"6 4\"/>\n";
    }
    if (hull.size() >= 2) {
        s += "<polygon class=\"hull\" points=\"";
        for (std::size_t i = 0; i < hull.size(); ++i) s += (i ? " " : "") + f.pt(hull[i]);
        s += "\" fill=\"" + style.fill + "\" fill-opacity=\"0.4\" stroke=\"" + style.ink + "\"/>\n";
    }
    for (const Vec2& p : hull)
        s += "<circle class=\"vertex\" cx=\"" + num(f.sx(p.x)) + "\" cy=\"" + num(f.sy(p.y)) + "\" r=\"4\" fill=\"" +
             style.ink + "\"/>\n";
    s += "</svg>\n";
    return s;
}

std::string svg_profile(const std::vector<long>& n, const std::vector<double>& d, const std::vector<double>& m,
                        const SvgStyle& style) {
    if (n.empty()) return header(style.size) + "</svg>\n";
    double lo = 0.0, hi = 0.0;
    for (double x : d) lo = std::min(lo, x), hi = std::max(hi, x);
    for (double x : m) hi = std::max(hi, x);
    if (hi - lo < 1e-9) hi = lo + 1.0;
    const Frame f{static_cast<double>(n.front()), lo - 0.05 * (hi - lo), static_cast<double>(n.back()) + 1e-9,
                  hi + 0.05 * (hi - lo), static_cast<double>(style.size)};
    // At most ~1000 buckets; each keeps its maximum so peaks survive.
    const std::size_t bucket = std::max<std::size_t>(1, n.size() / 1000);
    auto polyline = [&](const std::vector<double>& y, const std::string& cls, const std::string& colour) {
        std::string out = "<polyline class=\"" + cls + "\" fill=\"none\" stroke=\"" + colour + "\" points=\"";
        for (std::size_t b = 0; b < n.size(); b += bucket) {
            const std::size_t e = std::min(n.size(), b + bucket);
            std::size_t best = b;
            for (std::size_t k = b; k < e; ++k)
                if (y[k] > y[best]) best = k;
            out += (b ? " " : "") + f.pt({static_cast<double>(n[best]), y[best]});
        }
        return out + "\"/>\n";
    };
    std::string s = header(style.size);
    s += "<line class=\"axis\" x1=\"" + num(f.sx(f.x0)) + "\" y1=\"" + num(f.sy(0)) + "\" x2=\"" + num(f.sx(f.x1)) +
         "\" y2=\"" + num(f.sy(0)) + "\" stroke=\"#999999\"/>\n";
    s += polyline(d, "deviation", style.ink);
    s += polyline(m, "running-max", style.accent);
    s += "</svg>\n";
    return s;
}

std::string svg_mask(const BoolGrid& mask, const Window& window, Vec2 v, double cap_fraction,
                     const std::vector<double>& line_levels, const SvgStyle& style) {
    const double W = window.half_width;
    const Frame f{window.center.x - W, window.center.y - W, window.center.x + W, window.center.y + W,
                  static_cast<double>(style.size)};
    const double h = window.h();
    std::string s = header(style.size);
    const double cap_level = dot(window.center, v) + (1.0 - cap_fraction) * W;
    const auto cap = clip_box(v, cap_level, f.x0, f.y0, f.x1, f.y1);
    if (cap.size() >= 3) {
        s += "<polygon class=\"far-cap\" points=\"";
        for (std::size_t i = 0; i < cap.size(); ++i) s += (i ? " " : "") + f.pt(cap[i]);
        s += "\" fill=\"" + style.shade + "\" fill-opacity=\"0.5\"/>\n";
    }
    s += "<g class=\"mask\" fill=\"" + style.fill + "\">\n";
    for (int j = 0; j < mask.height; ++j) {
        int i = 0;
        while (i < mask.width) {
            if (!mask.at(i, j)) { ++i; continue; }
            int e = i;
            while (e < mask.width && mask.at(e, j)) ++e;
            const double x = f.x0 + h * i, y = f.y0 + h * (j + 1);
            s += "<rect x=\"" + num(f.sx(x)) + "\" y=\"" + num(f.sy(y)) + "\" width=\"" +
                 num(f.sx(x + h * (e - i)) - f.sx(x)) + "\" height=\"" + num(f.sy(y - h) - f.sy(y)) + "\"/>\n";
            i = e;
        }
    }
    s += "</g>\n";
    for (double level : line_levels) {
        if (auto seg = clip_line(v, level, f.x0, f.y0, f.x1, f.y1))
            s += "<line class=\"level-line\" x1=\"" + num(f.sx(seg->first.x)) + "\" y1=\"" +
                 num(f.sy(seg->first.y)) + "\" x2=\"" + num(f.sx(seg->second.x)) + "\" y2=\"" +
                 num(f.sy(seg->second.y)) + "\" stroke=\"" + style.accent + "\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string svg_leaves(const std::vector<PseudoLeaf>& leaves, const Window& window, Vec2 v, const SvgStyle& style) {
    const double W = window.half_width;
    const Frame f{window.center.x - W, window.center.y - W, window.center.x + W, window.center.y + W,
                  static_cast<double>(style.size)};
    std::string s = header(style.size);
    for (const PseudoLeaf& leaf : leaves) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& line : leaf.polylines)
            for (const Vec2& p : line) lo = std::min(lo, dot(p, v)), hi = std::max(hi, dot(p, v));
        if (lo <= hi) {
            for (double level : {lo, hi})
                if (auto seg = clip_line(v, level, f.x0, f.y0, f.x1, f.y1))
                    s += "<line class=\"strip\" x1=\"" + num(f.sx(seg->first.x)) + "\" y1=\"" +
                         num(f.sy(seg->first.y)) + "\" x2=\"" + num(f.sx(seg->second.x)) + "\" y2=\"" +
                         num(f.sy(seg->second.y)) + "\" stroke=\"#aaaaaa\" stroke-dasharray=\"4 3\"/>\n";
        }
        for (const auto& line : leaf.polylines) {
            s += "<path class=\"leaf\" data-level=\"" + num(leaf.level) + "\" fill=\"none\" stroke=\"" + style.ink +
                 "\" d=\"";
            for (std::size_t k = 0; k < line.size(); ++k) s += (k ? " L" : "M") + f.pt(line[k]);
            s += "\"/>\n";
        }
    }
    // Arrow along v^perp from the lower-left corner.
    const Vec2 d = perp(v);
    const Vec2 a = window.center + Vec2{-0.8 * W, -0.8 * W};
    const Vec2 b = a + 0.25 * W * d;
    const Vec2 side = 0.05 * W * v;
    const Vec2 tip_base = b - 0.08 * W * d;
    s += "<line class=\"direction\" x1=\"" + num(f.sx(a.x)) + "\" y1=\"" + num(f.sy(a.y)) + "\" x2=\"" +
         num(f.sx(b.x)) + "\" y2=\"" + num(f.sy(b.y)) + "\" stroke=\"" + style.accent + "\" stroke-width=\"2\"/>\n";
    s += "<polygon class=\"direction-head\" points=\"" + f.pt(b) + " " + f.pt(tip_base + side) + " " +
         f.pt(tip_base - side) + "\" fill=\"" + style.accent + "\"/>\n";
    s += "</svg>\n";
    return s;
}

} // namespace rotdev
