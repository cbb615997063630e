#include "opgt/vision.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <unordered_map>

#include "opgt/error.hpp"

namespace opgt {
namespace {

bool rowMajorLess(const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
  return a.y() != b.y() ? a.y() < b.y() : a.x() < b.x();
}

// Uniform-grid spatial index with eps-sized cells for neighbor queries.
class PixelGrid {
 public:
  PixelGrid(const PixelSet& pts, double eps) : pts_(pts), cell_(std::max(eps, 1e-9)) {
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
      cells_[key(pts[i])].push_back(i);
    }
  }

  void neighbors(int i, double eps2, std::vector<int>& out) const {
    out.clear();
    const Eigen::Vector2i p = pts_[i];
    const auto [cx, cy] = coords(p);
    for (long dy = -1; dy <= 1; ++dy) {
      for (long dx = -1; dx <= 1; ++dx) {
        const auto it = cells_.find(pack(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (int j : it->second) {
          const Eigen::Vector2i d = pts_[j] - p;
          if (static_cast<double>(d.squaredNorm()) <= eps2) out.push_back(j);
        }
      }
    }
  }

 private:
  std::pair<long, long> coords(const Eigen::Vector2i& p) const {
    return {static_cast<long>(std::floor(p.x() / cell_)),
            static_cast<long>(std::floor(p.y() / cell_))};
  }
  static std::int64_t pack(long x, long y) {
    return (static_cast<std::int64_t>(x) << 32) ^ (y & 0xffffffffLL);
  }
  std::int64_t key(const Eigen::Vector2i& p) const {
    const auto [x, y] = coords(p);
    return pack(x, y);
  }

  const PixelSet& pts_;
  double cell_;
  std::unordered_map<std::int64_t, std::vector<int>> cells_;
};

struct Conic {
  double a, b, c, d, e, f;  // a x^2 + b xy + c y^2 + d x + e y + f = 0
};

EllipseFit conicToEllipse(Conic k) {
  // the fitted eigenvector's sign is arbitrary; make the quadratic form
  // positive definite
  if (k.a + k.c < 0.0) {
    k.a = -k.a;
    k.b = -k.b;
    k.c = -k.c;
    k.d = -k.d;
    k.e = -k.e;
    k.f = -k.f;
  }
  Eigen::Matrix2d q;
  q << k.a, k.b / 2.0, k.b / 2.0, k.c;
  Eigen::Vector2d rhs(-k.d / 2.0, -k.e / 2.0);
  const double det = q.determinant();
  if (!(det > 0.0)) throw DomainError("fit_ellipse: degenerate conic");
  const Eigen::Vector2d center = q.colPivHouseholderQr().solve(rhs);
  const double f_center = k.a * center.x() * center.x() +
                          k.b * center.x() * center.y() +
                          k.c * center.y() * center.y() + k.d * center.x() +
                          k.e * center.y() + k.f;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
  const Eigen::Vector2d lam = es.eigenvalues();  // ascending
  if (!(lam(0) > 0.0) || !(f_center < 0.0)) {
    throw DomainError("fit_ellipse: degenerate conic");
  }
  const double major = std::sqrt(-f_center / lam(0));
  const double minor = std::sqrt(-f_center / lam(1));
  const Eigen::Vector2d axis = es.eigenvectors().col(0);
  double orientation = std::atan2(axis.y(), axis.x());
  if (orientation < 0.0) orientation += std::numbers::pi;
  if (orientation >= std::numbers::pi) orientation -= std::numbers::pi;
  return {{center.x(), center.y()}, major, minor, orientation};
}

}  // namespace

Frame Frame::filled(int width, int height, std::uint8_t r, std::uint8_t g,
                    std::uint8_t b) {
  Frame f;
  f.width = width;
  f.height = height;
  f.rgb.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < f.rgb.size(); i += 3) {
    f.rgb[i] = r;
    f.rgb[i + 1] = g;
    f.rgb[i + 2] = b;
  }
  return f;
}

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  const double max = std::max({r, g, b});
  const double min = std::min({r, g, b});
  const double delta = max - min;
  Hsv out;
  out.value = max;
  out.saturation = max > 0.0 ? delta / max : 0.0;
  if (delta > 0.0) {
    double h;
    if (max == r) {
      h = std::fmod((g - b) / delta, 6.0);
      if (h < 0.0) h += 6.0;
    } else if (max == g) {
      h = (b - r) / delta + 2.0;
    } else {
      h = (r - g) / delta + 4.0;
    }
    out.hue_deg = 60.0 * h;
    if (out.hue_deg >= 360.0) out.hue_deg -= 360.0;
  }
  return out;
}

bool HsvThresholds::contains(const Hsv& hsv) const {
  if (hsv.saturation < saturation_min || hsv.value < value_min) return false;
  for (const HueWindow& w : hue_windows_deg) {
    if (w.lo_deg <= w.hi_deg) {
      if (hsv.hue_deg >= w.lo_deg && hsv.hue_deg <= w.hi_deg) return true;
    } else {  // wraps through 360
      if (hsv.hue_deg >= w.lo_deg || hsv.hue_deg <= w.hi_deg) return true;
    }
  }
  return false;
}

PixelSet red_mask(const Frame& f, const HsvThresholds& t) {
  if (f.width <= 0 || f.height <= 0) {
    throw DomainError("red_mask: frame dimensions must be positive");
  }
  PixelSet out;
  const std::uint8_t value_floor =
      static_cast<std::uint8_t>(std::min(255.0, std::ceil(t.value_min * 255.0)));
  const std::uint8_t* p = f.rgb.data();
  for (int x2 = 0; x2 < f.height; ++x2) {
    for (int x1 = 0; x1 < f.width; ++x1, p += 3) {
      const std::uint8_t max = std::max({p[0], p[1], p[2]});
      if (max < value_floor) continue;  // V = max/255, cheap reject
      if (t.contains(rgb_to_hsv(p[0], p[1], p[2]))) out.emplace_back(x1, x2);
    }
  }
  return out;
}

Clustering cluster_pixels(const PixelSet& ps, const DbscanParams& params) {
  if (!(params.eps_px > 0.0) || params.min_pts < 1) {
    throw DomainError("cluster_pixels: eps must be > 0 and min_pts >= 1");
  }
  PixelSet pts = ps;
  std::sort(pts.begin(), pts.end(), rowMajorLess);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
                          return a.x() == b.x() && a.y() == b.y();
                        }),
            pts.end());

  const int n = static_cast<int>(pts.size());
  Clustering out;
  if (n == 0) return out;

  const double eps2 = params.eps_px * params.eps_px;
  const PixelGrid grid(pts, params.eps_px);

  std::vector<int> neighbor_buf;
  std::vector<bool> core(n, false);
  for (int i = 0; i < n; ++i) {
    grid.neighbors(i, eps2, neighbor_buf);
    core[i] = static_cast<int>(neighbor_buf.size()) >= params.min_pts;
  }

  constexpr int kUnassigned = -1;
  std::vector<int> label(n, kUnassigned);
  std::deque<int> queue;
  for (int seed = 0; seed < n; ++seed) {
    if (label[seed] != kUnassigned || !core[seed]) continue;
    const int cluster_id = static_cast<int>(out.clusters.size());
    out.clusters.emplace_back();
    label[seed] = cluster_id;
    queue.clear();
    queue.push_back(seed);
    while (!queue.empty()) {
      const int j = queue.front();
      queue.pop_front();
      if (!core[j]) continue;  // border points do not expand
      grid.neighbors(j, eps2, neighbor_buf);
      for (int k : neighbor_buf) {
        if (label[k] == kUnassigned) {
          label[k] = cluster_id;
          queue.push_back(k);
        }
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    if (label[i] == kUnassigned) {
      out.noise.push_back(pts[i]);
    } else {
      out.clusters[label[i]].push_back(pts[i]);
    }
  }
  for (PixelSet& c : out.clusters) std::sort(c.begin(), c.end(), rowMajorLess);
  return out;
}

std::optional<PixelSet> select_drone_cluster(const std::vector<PixelSet>& clusters) {
  if (clusters.empty()) return std::nullopt;
  const PixelSet* best = nullptr;
  double best_row = 0.0, best_col = 0.0;
  for (const PixelSet& c : clusters) {
    if (c.empty()) continue;
    double row = 0.0, col = 0.0;
    for (const auto& p : c) {
      col += p.x();
      row += p.y();
    }
    row /= static_cast<double>(c.size());
    col /= static_cast<double>(c.size());
    const bool better =
        best == nullptr || c.size() > best->size() ||
        (c.size() == best->size() &&
         (row < best_row || (row == best_row && col < best_col)));
    if (better) {
      best = &c;
      best_row = row;
      best_col = col;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

EllipseFit fit_ellipse(const PixelSet& ps) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(ps.size());
  for (const auto& p : ps) pts.push_back(p.cast<double>());
  return fit_ellipse(pts);
}

EllipseFit fit_ellipse(const std::vector<Eigen::Vector2d>& ps) {
  const int n = static_cast<int>(ps.size());
  if (n < 5) throw DomainError("fit_ellipse: at least 5 points required");

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : ps) mean += p;
  mean /= n;
  double spread = 0.0;
  for (const auto& p : ps) spread += (p - mean).squaredNorm();
  spread = std::sqrt(spread / n);
  if (!(spread > 1e-12)) throw DomainError("fit_ellipse: degenerate point set");
  const double s = spread;

  Eigen::MatrixXd d1(n, 3), d2(n, 3);
  for (int i = 0; i < n; ++i) {
    const double x = (ps[i].x() - mean.x()) / s;
    const double y = (ps[i].y() - mean.y()) / s;
    d1.row(i) << x * x, x * y, y * y;
    d2.row(i) << x, y, 1.0;
  }
  const Eigen::Matrix3d s1 = d1.transpose() * d1;
  const Eigen::Matrix3d s2 = d1.transpose() * d2;
  const Eigen::Matrix3d s3 = d2.transpose() * d2;

  const Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
  if (!lu.isInvertible()) throw DomainError("fit_ellipse: degenerate point set");
  const Eigen::Matrix3d t = -lu.solve(s2.transpose());
  const Eigen::Matrix3d m = s1 + s2 * t;
  // premultiply by the inverse of the constraint matrix for 4AC - B^2 = 1
  Eigen::Matrix3d m_reduced;
  m_reduced.row(0) = m.row(2) / 2.0;
  m_reduced.row(1) = -m.row(1);
  m_reduced.row(2) = m.row(0) / 2.0;

  const Eigen::EigenSolver<Eigen::Matrix3d> es(m_reduced);
  Eigen::Vector3d a_low = Eigen::Vector3d::Zero();
  bool found = false;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(es.eigenvalues()(i).imag()) > 1e-9) continue;
    const Eigen::Vector3d v = es.eigenvectors().col(i).real();
    const double discr = 4.0 * v(0) * v(2) - v(1) * v(1);
    if (discr > 0.0) {
      a_low = v;
      found = true;
      break;
    }
  }
  if (!found) throw DomainError("fit_ellipse: no ellipse solution");
  const Eigen::Vector3d a_high = t * a_low;

  // denormalize the conic back to pixel coordinates
  const double a1 = a_low(0), a2 = a_low(1), a3 = a_low(2);
  const double a4 = a_high(0), a5 = a_high(1), a6 = a_high(2);
  const double s2inv = 1.0 / (s * s);
  Conic k;
  k.a = a1 * s2inv;
  k.b = a2 * s2inv;
  k.c = a3 * s2inv;
  k.d = (-2.0 * a1 * mean.x() - a2 * mean.y()) * s2inv + a4 / s;
  k.e = (-a2 * mean.x() - 2.0 * a3 * mean.y()) * s2inv + a5 / s;
  k.f = (a1 * mean.x() * mean.x() + a2 * mean.x() * mean.y() +
         a3 * mean.y() * mean.y()) * s2inv -
        (a4 * mean.x() + a5 * mean.y()) / s + a6;
  return conicToEllipse(k);
}

std::optional<Detection> detect(const Frame& f, const VisionConfig& cfg) {
  const PixelSet mask = red_mask(f, cfg.thresholds);
  if (mask.empty()) return std::nullopt;
  const Clustering clustering = cluster_pixels(mask, cfg.dbscan);
  const std::optional<PixelSet> cluster = select_drone_cluster(clustering.clusters);
  if (!cluster) return std::nullopt;

  EllipseFit fit;
  bool fitted = false;
  if (cluster->size() >= 5) {
    try {
      fit = fit_ellipse(*cluster);
      fitted = true;
    } catch (const DomainError&) {
    }
  }
  if (!fitted) {
    // centroid fallback with semi-axes from the bounding box
    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    Eigen::Vector2i lo = (*cluster)[0], hi = (*cluster)[0];
    for (const auto& p : *cluster) {
      centroid += p.cast<double>();
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    centroid /= static_cast<double>(cluster->size());
    const double sx = std::max(0.5, (hi.x() - lo.x() + 1) / 2.0);
    const double sy = std::max(0.5, (hi.y() - lo.y() + 1) / 2.0);
    fit.center = {centroid.x(), centroid.y()};
    fit.semi_major_px = std::max(sx, sy);
    fit.semi_minor_px = std::min(sx, sy);
    fit.orientation_rad = sx >= sy ? 0.0 : std::numbers::pi / 2.0;
  }

  Detection det;
  det.ellipse = fit;
  det.pixel_count = static_cast<int>(cluster->size());
  det.w = normalized_offset(fit.center, cfg.frame);
  return det;
}

ZoomCommand zoom_step(const std::optional<Detection>& det, const ZoomState& z,
                      const ZoomPolicy& policy, double now_s) {
  if (now_s - z.last_change_t < policy.dwell_s) return ZoomCommand::Hold;
  if (!det) return z.step > 0 ? ZoomCommand::Out : ZoomCommand::Hold;
  const double diameter = 2.0 * det->ellipse.semi_major_px;
  if (diameter < policy.lower_px && z.step < kMaxZoomStep) return ZoomCommand::In;
  if (diameter > policy.upper_px && z.step > 0) return ZoomCommand::Out;
  return ZoomCommand::Hold;
}

ZoomState apply_zoom(const ZoomState& z, ZoomCommand cmd, double now_s) {
  ZoomState out = z;
  if (cmd == ZoomCommand::In && z.step < kMaxZoomStep) {
    out.step += 1;
    out.last_change_t = now_s;
  } else if (cmd == ZoomCommand::Out && z.step > 0) {
    out.step -= 1;
    out.last_change_t = now_s;
  }
  return out;
}

CameraIntrinsics fov_for_zoom(const ZoomState& z, const CameraIntrinsics& base) {
  const double factor = zoom_factor(z);
  return {2.0 * std::atan(std::tan(0.5 * base.hfov_rad) / factor),
          2.0 * std::atan(std::tan(0.5 * base.vfov_rad) / factor)};
}

}  // namespace opgt
