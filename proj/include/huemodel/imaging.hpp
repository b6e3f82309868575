#ifndef HUEMODEL_IMAGING_HPP
#define HUEMODEL_IMAGING_HPP

// Activation planes, normalized Gaussian kernels and edge-replicating
// convolution. Planes are row-major Eigen matrices: rows = height, cols = width.

#include "huemodel/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>

namespace huemodel {

template <typename Scalar>
using PlaneT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Plane = PlaneT<double>;

inline constexpr int kStandardSize = 256;

template <typename Scalar>
bool all_finite(const PlaneT<Scalar>& p) {
  return p.allFinite();
}

template <typename Scalar>
struct GaussianKernelT {
  int size{1};
  Scalar sigma{1};
  // 1-D factor, sums to 1. The 2-D weights are its outer product.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> profile;
  PlaneT<Scalar> weights;

  int radius() const { return size / 2; }
};
using GaussianKernel = GaussianKernelT<double>;

/// Sampled isotropic Gaussian, renormalized to unit sum. `size` must be odd.
template <typename Scalar = double>
GaussianKernelT<Scalar> make_gaussian(int size, Scalar sigma) {
  if (size < 1 || size % 2 == 0)
    throw ArgumentError("gaussian kernel size must be odd and >= 1, got " + std::to_string(size));
  if (!(sigma > 0) || !std::isfinite(static_cast<double>(sigma)))
    throw ArgumentError("gaussian kernel sigma must be positive and finite");

  GaussianKernelT<Scalar> k;
  k.size = size;
  k.sigma = sigma;
  const int r = size / 2;
  k.profile.resize(size);
  for (int i = 0; i < size; ++i) {
    const Scalar d = Scalar(i - r);
    k.profile(i) = std::exp(-d * d / (2 * sigma * sigma));
  }
  k.profile /= k.profile.sum();
  // mirror so the profile is exactly symmetric after rounding
  for (int i = 0; i < r; ++i) k.profile(size - 1 - i) = k.profile(i);
  k.weights = k.profile * k.profile.transpose();
  return k;
}

namespace detail {

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

} // namespace detail

/// Same-size convolution with edge replication, computed as a horizontal then
/// a vertical 1-D pass over the kernel profile.
template <typename Scalar>
PlaneT<Scalar> convolve(const PlaneT<Scalar>& p, const GaussianKernelT<Scalar>& k) {
  const int h = static_cast<int>(p.rows());
  const int w = static_cast<int>(p.cols());
  const int r = k.radius();
  if (h == 0 || w == 0) return p;

  PlaneT<Scalar> tmp(h, w);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> padded(w + 2 * r);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w + 2 * r; ++x) padded(x) = p(y, detail::clamp_index(x - r, w));
    for (int x = 0; x < w; ++x) tmp(y, x) = padded.segment(x, k.size).dot(k.profile);
  }

  PlaneT<Scalar> out = PlaneT<Scalar>::Zero(h, w);
  for (int y = 0; y < h; ++y)
    for (int i = 0; i < k.size; ++i)
      out.row(y) += k.profile(i) * tmp.row(detail::clamp_index(y + i - r, h));
  return out;
}

/// Bilinear resampling with half-pixel centres; samples outside the source
/// clamp to the nearest edge pixel.
template <typename Scalar>
PlaneT<Scalar> resize_bilinear(const PlaneT<Scalar>& p, int width, int height) {
  if (p.size() == 0) throw ArgumentError("cannot resize an empty plane");
  if (width < 1 || height < 1) throw ArgumentError("resize target must be nonempty");
  const int sh = static_cast<int>(p.rows());
  const int sw = static_cast<int>(p.cols());
  if (sh == height && sw == width) return p;

  const Scalar fx = Scalar(sw) / width;
  const Scalar fy = Scalar(sh) / height;
  PlaneT<Scalar> out(height, width);
  for (int y = 0; y < height; ++y) {
    const Scalar syf = std::clamp((y + Scalar(0.5)) * fy - Scalar(0.5), Scalar(0), Scalar(sh - 1));
    const int y0 = static_cast<int>(std::floor(syf));
    const int y1 = std::min(y0 + 1, sh - 1);
    const Scalar ty = syf - y0;
    for (int x = 0; x < width; ++x) {
      const Scalar sxf = std::clamp((x + Scalar(0.5)) * fx - Scalar(0.5), Scalar(0), Scalar(sw - 1));
      const int x0 = static_cast<int>(std::floor(sxf));
      const int x1 = std::min(x0 + 1, sw - 1);
      const Scalar tx = sxf - x0;
      const Scalar top = (1 - tx) * p(y0, x0) + tx * p(y0, x1);
      const Scalar bot = (1 - tx) * p(y1, x0) + tx * p(y1, x1);
      out(y, x) = (1 - ty) * top + ty * bot;
    }
  }
  return out;
}

template <typename Scalar>
PlaneT<Scalar> resize_to_standard(const PlaneT<Scalar>& p) {
  return resize_bilinear(p, kStandardSize, kStandardSize);
}

/// Three co-registered gamma-encoded sRGB channels in [0,1].
struct RgbImage {
  Plane r, g, b;

  int width() const { return static_cast<int>(r.cols()); }
  int height() const { return static_cast<int>(r.rows()); }

  static RgbImage filled(int width, int height, double r, double g, double b) {
    return {Plane::Constant(height, width, r), Plane::Constant(height, width, g),
            Plane::Constant(height, width, b)};
  }
};

/// Kernel size and width for one layer of the hierarchy.
struct LayerKernel {
  int size{1};
  double sigma{1};
};

/// Receptive-field sizes double from layer to layer (19, 38, 76, 152 px);
/// the even ones are bumped to the next odd size so kernels have a centre.
struct ReceptiveFieldPlan {
  LayerKernel lgn{19, 19.0 / 6.0};
  LayerKernel v1{39, 39.0 / 6.0};
  LayerKernel v2{77, 77.0 / 6.0};
  LayerKernel v4{153, 153.0 / 6.0};

  static int odd_size(int nominal) { return nominal % 2 == 0 ? nominal + 1 : nominal; }
};

} // namespace huemodel

#endif
