#include "pzx/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pzx {

namespace {

constexpr double kCanvas = 640.0;
constexpr double kPlotHalf = 270.0;  // plot radius in pixels around the center

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

std::string render_pz_svg(const PoleZeroSet& pz) {
  double extent = 1.0;
  for (const Complex& p : pz.poles) extent = std::max(extent, std::abs(p));
  for (const Complex& z : pz.zeros) extent = std::max(extent, std::abs(z));
  const double limit = 1.2 * extent;

  const double mid = kCanvas / 2.0;
  auto sx = [&](double re) { return mid + re / limit * kPlotHalf; };
  auto sy = [&](double im) { return mid - im / limit * kPlotHalf; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
         "viewBox=\"0 0 640 640\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"640\" fill=\"white\"/>\n";

  // Axes through the origin with end labels in rad/s.
  svg += "<line x1=\"" + px(mid - kPlotHalf) + "\" y1=\"" + px(mid) + "\" x2=\"" +
         px(mid + kPlotHalf) + "\" y2=\"" + px(mid) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + px(mid) + "\" y1=\"" + px(mid - kPlotHalf) + "\" x2=\"" + px(mid) +
         "\" y2=\"" + px(mid + kPlotHalf) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + px(mid + kPlotHalf + 4) + "\" y=\"" + px(mid + 4) +
         "\" font-family=\"monospace\" font-size=\"12\">Re</text>\n";
  svg += "<text x=\"" + px(mid + 6) + "\" y=\"" + px(mid - kPlotHalf - 6) +
         "\" font-family=\"monospace\" font-size=\"12\">Im</text>\n";
  svg += "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"12\">axis limit " +
         sci(limit) + " rad/s</text>\n";

  constexpr double kMark = 7.0;
  for (const Complex& p : pz.poles) {
    const double cx = sx(p.real());
    const double cy = sy(p.imag());
    svg += "<line x1=\"" + px(cx - kMark) + "\" y1=\"" + px(cy - kMark) + "\" x2=\"" +
           px(cx + kMark) + "\" y2=\"" + px(cy + kMark) +
           "\" stroke=\"crimson\" stroke-width=\"2\"/>\n";
    svg += "<line x1=\"" + px(cx - kMark) + "\" y1=\"" + px(cy + kMark) + "\" x2=\"" +
           px(cx + kMark) + "\" y2=\"" + px(cy - kMark) +
           "\" stroke=\"crimson\" stroke-width=\"2\"/>\n";
  }
  for (const Complex& z : pz.zeros) {
    svg += "<circle cx=\"" + px(sx(z.real())) + "\" cy=\"" + px(sy(z.imag())) + "\" r=\"" +
           px(kMark) + "\" stroke=\"royalblue\" stroke-width=\"2\" fill=\"none\"/>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace pzx
