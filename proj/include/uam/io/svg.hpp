#pragma once

#include "uam/trajectories.hpp"

#include <string>

namespace uam::io {

/// Drawing options; every field has a usable default.
struct SvgStyle {
  double extent = 1.5;  // the viewport covers [-extent, extent]^2
  int size_px = 800;
  double stroke_width = 1.2;
  double anchor_radius = 2.5;
  std::string circle_color = "#7f7f7f";
  std::string anchor_color = "#000000";
  bool show_anchors = true;
};

/// Colour for time t on the red ramp: light at t = 1, dark at t = -1.
std::string red_shade(double t);

/// SVG 1.1 document: unit circle, one <g class="path"> per trajectory made of
/// <line> segments coloured by the segment's mean t, and a dot at each t = 1 anchor.
/// Throws InvalidArgument for an empty bundle.
std::string emit_trajectory_svg(const TrajectoryBundle& bundle, const SvgStyle& style = {});

}  // namespace uam::io
