#pragma once

#include <Eigen/Core>

namespace opgt {

// Local Cartesian east-north-up frame in meters, anchored at the ground
// station's UTM position. All cross-agent geometry lives in this frame.
using Position3 = Eigen::Vector3d;

struct GeodeticPosition {
  double latitude_deg = 0.0;   // [-90, 90]
  double longitude_deg = 0.0;  // [-180, 180)
  double altitude_m = 0.0;

  bool operator==(const GeodeticPosition&) const = default;
};

struct UtmPosition {
  int zone = 0;  // 1..60
  bool north = true;
  double easting_m = 0.0;
  double northing_m = 0.0;
  double altitude_m = 0.0;
};

struct PixelPoint {
  double x1 = 0.0;  // column, subpixel-capable
  double x2 = 0.0;  // row, subpixel-capable
};

struct FrameGeometry {
  int res_x1 = 640;
  int res_x2 = 480;
  PixelPoint center{319.5, 239.5};

  static FrameGeometry of(int res_x1, int res_x2) {
    return {res_x1, res_x2, {(res_x1 - 1) / 2.0, (res_x2 - 1) / 2.0}};
  }
};

// Pixel offset from the frame center, normalized with the image resolution.
struct NormalizedOffset {
  double w1 = 0.0;
  double w2 = 0.0;
};

struct CameraIntrinsics {
  double hfov_rad = 0.0;
  double vfov_rad = 0.0;
};

// Pan/tilt pointing error. Positive d_phi: target clockwise (to the right) of
// the boresight; positive d_theta: target above it.
struct MisalignmentAngles {
  double d_phi_rad = 0.0;
  double d_theta_rad = 0.0;
};

// Pan-tilt orientation. Pan is clockwise from the mount's zero azimuth,
// wrapped to (-pi, pi]; tilt is elevation above horizontal.
struct PtuPose {
  double pan_rad = 0.0;
  double tilt_rad = 0.0;
};

// Wraps an angle to (-pi, pi].
double wrap_angle(double rad);

// WGS-84 transverse Mercator (Krueger series, 6th order in the third
// flattening). Zone is chosen from longitude unless forced_zone is 1..60.
// Throws DomainError for |latitude| > 84 deg.
UtmPosition geodetic_to_utm(const GeodeticPosition& g, int forced_zone = 0);
GeodeticPosition utm_to_geodetic(const UtmPosition& u);

NormalizedOffset normalized_offset(const PixelPoint& p, const FrameGeometry& fg);

MisalignmentAngles misalignment_from_offset(const NormalizedOffset& w,
                                            const CameraIntrinsics& c);

// Exact inverse of misalignment_from_offset; requires |angles| < pi/2.
NormalizedOffset offset_from_misalignment(const MisalignmentAngles& a,
                                          const CameraIntrinsics& c);

// Azimuth is measured clockwise from north, elevation above the horizon.
double azimuth_of(const Position3& v);
double elevation_of(const Position3& v);
Position3 direction_from(double azimuth_rad, double elevation_rad);

// Pointing error of the PTU boresight (mount_heading + pan, tilt) relative to
// the bearing/elevation of `target` seen from `station`. Throws DomainError
// when target coincides with station.
MisalignmentAngles misalignment_from_positions(const Position3& station,
                                               double mount_heading_rad,
                                               const PtuPose& pose,
                                               const Position3& target);

double euclidean_distance(const Position3& a, const Position3& b);

// ENU frame anchored at `anchor`; the two UTM positions must share a zone
// (convert with forced_zone when needed).
Position3 utm_to_enu(const UtmPosition& p, const UtmPosition& anchor);
UtmPosition enu_to_utm(const Position3& enu, const UtmPosition& anchor);

}  // namespace opgt
