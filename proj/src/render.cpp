#include "manymatch/render.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace manymatch {

std::string render_svg(const Instance& inst, const RenderOptions& opt) {
    const double margin = 20.0;
    const double span = static_cast<double>(std::max<std::int64_t>(inst.delta, 1));
    const double scale = (opt.size - 2 * margin) / span;
    // Grid y grows upwards.
    auto X = [&](const GridPoint& p) { return margin + (static_cast<double>(p.x) - 0.5) * scale; };
    auto Y = [&](const GridPoint& p) { return opt.size - margin - (static_cast<double>(p.y) - 0.5) * scale; };
    const double r = std::clamp(scale * 0.3, 1.5, 8.0);

    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.size << "\" height=\"" << opt.size
       << "\" viewBox=\"0 0 " << opt.size << ' ' << opt.size << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    auto line = [&](const GridPoint& a, const GridPoint& b, const char* style) {
        os << "<line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b) << "\" "
           << style << "/>\n";
    };
    if (opt.overlay) {
        os << "<g id=\"decomposition\">\n";
        for (auto [p, q] : opt.overlay->segments) {
            line(inst.point(p), inst.point(q), "stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"4 3\"");
        }
        os << "</g>\n";
    }
    if (opt.cover) {
        os << "<g id=\"matching\">\n";
        for (auto [a, b] : opt.cover->edges) line(inst.red[a], inst.blue[b], "stroke=\"black\" stroke-width=\"3\"");
        os << "</g>\n";
    }
    os << "<g id=\"points\">\n";
    for (const auto& p : inst.red) {
        os << "<rect x=\"" << X(p) - r << "\" y=\"" << Y(p) - r << "\" width=\"" << 2 * r << "\" height=\"" << 2 * r
           << "\" fill=\"#d62728\"/>\n";
    }
    for (const auto& p : inst.blue) {
        os << "<circle cx=\"" << X(p) << "\" cy=\"" << Y(p) << "\" r=\"" << r << "\" fill=\"#1f77b4\"/>\n";
    }
    os << "</g>\n";
    if (opt.overlay && !opt.overlay->separator.empty()) {
        os << "<g id=\"separator\">\n";
        for (std::size_t v : opt.overlay->separator) {
            const auto& p = inst.point(v);
            os << "<circle cx=\"" << X(p) << "\" cy=\"" << Y(p) << "\" r=\"" << 2 * r
               << "\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace manymatch
