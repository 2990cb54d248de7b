#include "fovexp/region.hpp"

#include <cmath>
#include <numbers>

namespace fovexp {

Rectangle Rectangle::scaled(double factor) const {
  require(factor > 0.0, ErrorKind::InvalidArgument, "Rectangle::scaled needs a positive factor");
  return {factor * re_min, factor * re_max, factor * im_min, factor * im_max};
}

BoundingRectangle BoundingRectangle::inflate(const Rectangle& raw, double rel_tol) {
  require(raw.re_min <= raw.re_max && raw.im_min <= raw.im_max, ErrorKind::InvalidArgument,
          "BoundingRectangle: inverted extents");
  require(rel_tol >= 0.0, ErrorKind::InvalidArgument, "BoundingRectangle: negative tolerance");
  auto pad = [rel_tol](double e) { return std::max(2.0 * rel_tol * std::abs(e), 1e-12); };
  BoundingRectangle b;
  b.raw = raw;
  b.rel_margin = rel_tol;
  b.region = {raw.re_min - pad(raw.re_min), raw.re_max + pad(raw.re_max),
              raw.im_min - pad(raw.im_min), raw.im_max + pad(raw.im_max)};
  // Keep the region conjugate-symmetric when the raw extents are.
  if (raw.im_min == -raw.im_max) b.region.im_min = -b.region.im_max;
  return b;
}

namespace {

/// Nodes on [-1, 1], antisymmetric bit-for-bit: x[n-1-j] == -x[j].
std::vector<double> nodes(int n, Spacing spacing) {
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  if (n == 1) return x;
  for (int j = 0; j < n / 2; ++j) {
    const double v = spacing == Spacing::Chebyshev
                         ? -std::cos(std::numbers::pi * j / (n - 1))
                         : -1.0 + 2.0 * j / (n - 1);
    x[static_cast<std::size_t>(j)] = v;
    x[static_cast<std::size_t>(n - 1 - j)] = -v;
  }
  return x;
}

}  // namespace

RegionBoundary sample_boundary(const Rectangle& r, int n_per_side, Spacing spacing) {
  require(n_per_side >= 2, ErrorKind::InvalidArgument, "sample_boundary needs >= 2 points per side");
  require(r.re_min <= r.re_max && r.im_min <= r.im_max, ErrorKind::InvalidArgument,
          "sample_boundary: inverted rectangle");
  RegionBoundary out;
  out.rect = r;
  const double w = r.width();
  const double h = r.height();
  const double cre = 0.5 * (r.re_min + r.re_max);
  const double cim = r.conjugate_symmetric() ? 0.0 : 0.5 * (r.im_min + r.im_max);
  const bool thin_h = h <= 1e-10 * std::max(1.0, w);
  const bool thin_w = w <= 1e-10 * std::max(1.0, h);

  if (thin_h && thin_w) {
    out.samples.emplace_back(cre, cim);
    out.per_side = {1, 0, 0, 0};
    return out;
  }
  if (thin_h || thin_w) {
    const int n = 2 * n_per_side;
    for (double x : nodes(n, spacing)) {
      out.samples.push_back(thin_h ? Complex(cre + 0.5 * w * x, cim) : Complex(cre, cim + 0.5 * h * x));
    }
    out.per_side = {n, 0, 0, 0};
    return out;
  }

  const auto x = nodes(n_per_side, spacing);
  auto along = [&](double t) {
    if (t == -1.0) return r.re_min;
    if (t == 1.0) return r.re_max;
    return cre + 0.5 * w * t;
  };
  // Horizontal sides carry the corners; vertical sides use interior nodes only.
  for (double t : x) out.samples.emplace_back(along(t), r.im_min);
  for (int j = 1; j + 1 < n_per_side; ++j)
    out.samples.emplace_back(r.re_max, cim + 0.5 * h * x[static_cast<std::size_t>(j)]);
  for (double t : x) out.samples.emplace_back(along(t), r.im_max);
  for (int j = 1; j + 1 < n_per_side; ++j)
    out.samples.emplace_back(r.re_min, cim + 0.5 * h * x[static_cast<std::size_t>(j)]);
  out.per_side = {n_per_side, n_per_side - 2, n_per_side, n_per_side - 2};
  return out;
}

}  // namespace fovexp
