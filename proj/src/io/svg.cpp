#include "uam/io/svg.hpp"

#include "uam/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace uam::io {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

struct Canvas {
  double extent;
  double size;
  double x(Complex z) const { return (z.real() + extent) / (2.0 * extent) * size; }
  double y(Complex z) const { return (extent - z.imag()) / (2.0 * extent) * size; }
};

}  // namespace

std::string red_shade(double t) {
  // s = 0 at t = 1 (light pink), s = 1 at t = -1 (dark red).
  const double s = std::clamp((1.0 - t) / 2.0, 0.0, 1.0);
  const auto lerp = [s](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * s)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", lerp(255, 110), lerp(190, 0), lerp(190, 0));
  return buf;
}

std::string emit_trajectory_svg(const TrajectoryBundle& bundle, const SvgStyle& style) {
  if (bundle.path_count() == 0 || bundle.t.empty())
    throw Error(ErrorCode::InvalidArgument, "emit_trajectory_svg: empty bundle");
  if (!(style.extent > 0.0) || style.size_px <= 0)
    throw Error(ErrorCode::InvalidArgument, "emit_trajectory_svg: extent and size must be positive");

  const Canvas c{style.extent, static_cast<double>(style.size_px)};
  const std::string size = std::to_string(style.size_px);
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + size + "\" height=\"" + size +
         "\" viewBox=\"0 0 " + size + " " + size + "\">\n";
  svg += "<rect width=\"" + size + "\" height=\"" + size + "\" fill=\"#ffffff\"/>\n";
  const double radius = c.size / (2.0 * c.extent);
  svg += "<circle class=\"unit-circle\" cx=\"" + num(c.x(0.0)) + "\" cy=\"" + num(c.y(0.0)) + "\" r=\"" + num(radius) +
         "\" fill=\"none\" stroke=\"" + style.circle_color + "\" stroke-width=\"1\"/>\n";

  for (Index p = 0; p < bundle.path_count(); ++p) {
    svg += "<g class=\"path\" id=\"path-" + std::to_string(p) + "\" stroke-width=\"" + num(style.stroke_width) +
           "\" stroke-linecap=\"round\">\n";
    for (std::size_t i = 1; i < bundle.t.size(); ++i) {
      const Complex a = bundle.paths(p, static_cast<Index>(i - 1));
      const Complex b = bundle.paths(p, static_cast<Index>(i));
      const double t_mid = 0.5 * (bundle.t[i - 1] + bundle.t[i]);
      svg += "<line x1=\"" + num(c.x(a)) + "\" y1=\"" + num(c.y(a)) + "\" x2=\"" + num(c.x(b)) + "\" y2=\"" +
             num(c.y(b)) + "\" stroke=\"" + red_shade(t_mid) + "\"/>\n";
    }
    svg += "</g>\n";
  }

  if (style.show_anchors) {
    // Anchor column: the grid point closest to t = 1.
    std::size_t anchor = 0;
    for (std::size_t i = 1; i < bundle.t.size(); ++i)
      if (std::abs(bundle.t[i] - 1.0) < std::abs(bundle.t[anchor] - 1.0)) anchor = i;
    svg += "<g class=\"anchors\" fill=\"" + style.anchor_color + "\">\n";
    for (Index p = 0; p < bundle.path_count(); ++p) {
      const Complex z = bundle.paths(p, static_cast<Index>(anchor));
      svg += "<circle cx=\"" + num(c.x(z)) + "\" cy=\"" + num(c.y(z)) + "\" r=\"" + num(style.anchor_radius) + "\"/>\n";
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace uam::io
