#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "fovexp/error.hpp"

namespace fovexp {

inline constexpr Eigen::Index kDenseCutoff = 3000;

namespace detail {

// Pade coefficients b_0..b_m of the diagonal (m, m) approximant and the
// 1-norm thresholds theta_m below which no scaling is needed.
inline constexpr std::array<double, 4> kPade3{120., 60., 12., 1.};
inline constexpr std::array<double, 6> kPade5{30240., 15120., 3360., 420., 30., 1.};
inline constexpr std::array<double, 8> kPade7{17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
inline constexpr std::array<double, 10> kPade9{17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                               2162160.,     110880.,      3960.,       90.,        1.};
inline constexpr std::array<double, 14> kPade13{64764752532480000., 32382376266240000., 7771770303897600.,
                                                1187353796428800.,  129060195264000.,   10559470521600.,
                                                670442572800.,      33522128640.,       1323241920.,
                                                40840800.,          960960.,            16380.,
                                                182.,               1.};
inline constexpr std::array<double, 5> kTheta{1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                              2.097847961257068e0, 5.371920351148152e0};

template <typename Mat, std::size_t N>
void low_order_terms(const Mat& a, const std::array<double, N>& b, Mat& u, Mat& v) {
  const Eigen::Index n = a.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat a2 = a * a;
  Mat power = id;
  Mat uo = b[1] * id;
  v = b[0] * id;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    v += b[k] * power;
    if (k + 1 < N) uo += b[k + 1] * power;
  }
  u = a * uo;
}

}  // namespace detail

/// Dense e^A by scaling and squaring with a diagonal Pade core of degree 3,
/// 5, 7, 9 or 13 picked from ||A||_1. Reference solver for desk-scale checks.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> expm_dense_oracle(
    const Eigen::MatrixBase<Derived>& a_in, Eigen::Index cutoff = kDenseCutoff) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  require(a_in.rows() == a_in.cols(), ErrorKind::DimensionMismatch, "expm: matrix not square");
  require(a_in.rows() <= cutoff, ErrorKind::ResourceGuard, "expm: matrix exceeds the dense cutoff");
  require(a_in.allFinite(), ErrorKind::InvalidArgument, "expm: non-finite entry");
  const Eigen::Index n = a_in.rows();
  Mat a = a_in;
  if (n == 0) return a;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();

  Mat u, v;
  int squarings = 0;
  if (norm1 <= detail::kTheta[0]) {
    detail::low_order_terms(a, detail::kPade3, u, v);
  } else if (norm1 <= detail::kTheta[1]) {
    detail::low_order_terms(a, detail::kPade5, u, v);
  } else if (norm1 <= detail::kTheta[2]) {
    detail::low_order_terms(a, detail::kPade7, u, v);
  } else if (norm1 <= detail::kTheta[3]) {
    detail::low_order_terms(a, detail::kPade9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / detail::kTheta[4]))));
    a /= std::ldexp(1.0, squarings);
    const auto& b = detail::kPade13;
    const Mat id = Mat::Identity(n, n);
    const Mat a2 = a * a;
    const Mat a4 = a2 * a2;
    const Mat a6 = a4 * a2;
    const Mat uinner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    u = a * uinner;
    v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  }
  Mat r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = (r * r).eval();
  return r;
}

}  // namespace fovexp
