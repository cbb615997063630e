#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "opgt/geo.hpp"

namespace opgt {

// Synthetic camera image, row-major RGB with 8-bit channels.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  static Frame filled(int width, int height, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b);

  const std::uint8_t* at(int x1, int x2) const {
    return rgb.data() + 3 * (static_cast<std::size_t>(x2) * width + x1);
  }
  std::uint8_t* at(int x1, int x2) {
    return rgb.data() + 3 * (static_cast<std::size_t>(x2) * width + x1);
  }
};

struct Hsv {
  double hue_deg = 0.0;  // [0, 360)
  double saturation = 0.0;
  double value = 0.0;
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Closed hue interval in degrees; lo > hi means the window wraps through 360.
struct HueWindow {
  double lo_deg = 0.0;
  double hi_deg = 0.0;
};

struct HsvThresholds {
  std::vector<HueWindow> hue_windows_deg{{0.0, 10.0}, {350.0, 360.0}};
  double saturation_min = 0.6;
  double value_min = 0.3;

  bool contains(const Hsv& hsv) const;
};

// Integer pixel coordinates (x1 = column, x2 = row), unique members.
using PixelSet = std::vector<Eigen::Vector2i>;

struct DbscanParams {
  double eps_px = 3.0;
  int min_pts = 4;
};

struct Clustering {
  std::vector<PixelSet> clusters;  // discovery order, row-major within
  PixelSet noise;
};

struct EllipseFit {
  PixelPoint center;
  double semi_major_px = 0.0;
  double semi_minor_px = 0.0;
  double orientation_rad = 0.0;  // major-axis direction, [0, pi)
};

enum class ZoomCommand { In, Out, Hold };

struct ZoomPolicy {
  double lower_px = 20.0;  // ellipse major diameter thresholds
  double upper_px = 120.0;
  double dwell_s = 0.5;
};

// 12x optical zoom discretized to steps 0..11 (factor = step + 1).
inline constexpr int kMaxZoomStep = 11;

struct ZoomState {
  int step = 0;
  double last_change_t = -1e300;
};

inline double zoom_factor(const ZoomState& z) { return z.step + 1.0; }

struct Detection {
  EllipseFit ellipse;
  int pixel_count = 0;
  NormalizedOffset w;
};

struct VisionConfig {
  HsvThresholds thresholds;
  DbscanParams dbscan;
  FrameGeometry frame = FrameGeometry::of(640, 480);
  ZoomPolicy zoom;
  CameraIntrinsics base_intrinsics{1.0471975511965976, 0.8168140899333463};
};

// Pixels whose HSV value falls inside the thresholds, in row-major order.
PixelSet red_mask(const Frame& f, const HsvThresholds& t);

// DBSCAN with Euclidean eps and self-inclusive min_pts. Scan order is
// row-major regardless of input order; border points go to the first
// claiming cluster.
Clustering cluster_pixels(const PixelSet& ps, const DbscanParams& params);

// Largest cluster; ties broken by smallest centroid row, then column.
std::optional<PixelSet> select_drone_cluster(const std::vector<PixelSet>& clusters);

// Direct least-squares conic fit constrained to ellipses (4AC - B^2 = 1),
// solved via the generalized eigenproblem of the mean-centered, scaled
// scatter matrix. Throws DomainError for fewer than 5 points or a
// degenerate point configuration.
EllipseFit fit_ellipse(const std::vector<Eigen::Vector2d>& pts);
EllipseFit fit_ellipse(const PixelSet& ps);

std::optional<Detection> detect(const Frame& f, const VisionConfig& cfg);

ZoomCommand zoom_step(const std::optional<Detection>& det, const ZoomState& z,
                      const ZoomPolicy& policy, double now_s);
ZoomState apply_zoom(const ZoomState& z, ZoomCommand cmd, double now_s);

// Focal-length-proportional zoom: tan(fov/2) shrinks by the zoom factor.
CameraIntrinsics fov_for_zoom(const ZoomState& z, const CameraIntrinsics& base);

}  // namespace opgt
