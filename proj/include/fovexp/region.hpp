#pragma once

#include <array>
#include <vector>

#include "fovexp/linalg.hpp"

namespace fovexp {

/// Closed axis-aligned rectangle in the complex plane.
struct Rectangle {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  double width() const noexcept { return re_max - re_min; }
  double height() const noexcept { return im_max - im_min; }
  Complex center() const noexcept { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }

  /// Closed-set membership with an absolute slack.
  bool contains(Complex z, double slack = 0.0) const noexcept {
    return z.real() >= re_min - slack && z.real() <= re_max + slack &&
           z.imag() >= im_min - slack && z.imag() <= im_max + slack;
  }

  bool conjugate_symmetric() const noexcept { return im_min == -im_max; }

  Rectangle scaled(double factor) const;
};

/// Enclosure of the numerical range: raw eigenvalue extents plus the
/// outward-inflated region used for every downstream certification.
struct BoundingRectangle {
  Rectangle raw;
  Rectangle region;
  double rel_margin = 0.0;

  /// Widens each endpoint outward by max(2 * rel_tol * |endpoint|, 1e-12).
  static BoundingRectangle inflate(const Rectangle& raw, double rel_tol);
};

enum class Spacing { Chebyshev, Uniform };

/// Samples on the boundary of a rectangle. Thin rectangles (one extent below
/// 1e-10 of the other) are sampled along their midline as a segment; a
/// rectangle that is thin both ways is sampled at its center.
///
/// When the rectangle is symmetric about the real axis the sample set is
/// closed under conjugation exactly.
struct RegionBoundary {
  Rectangle rect;
  std::vector<Complex> samples;
  std::array<int, 4> per_side{};  // bottom, right, top, left (segment: all in [0])
};

RegionBoundary sample_boundary(const Rectangle& r, int n_per_side, Spacing spacing = Spacing::Chebyshev);

}  // namespace fovexp
