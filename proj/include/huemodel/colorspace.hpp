#ifndef HUEMODEL_COLORSPACE_HPP
#define HUEMODEL_COLORSPACE_HPP

// Conversions between gamma-encoded sRGB, HSL, linear LMS cone space and a
// MacLeod-Boynton chromaticity angle. Everything here is a pure function.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace huemodel {

template <typename Scalar = double>
struct Rgb {
  Scalar r{0}, g{0}, b{0};
};

template <typename Scalar = double>
struct Hsl {
  Scalar hue{0};  // degrees, [0,360)
  Scalar saturation{0};
  Scalar lightness{0};
};

template <typename Scalar = double>
struct Lms {
  Scalar l{0}, m{0}, s{0};

  Eigen::Matrix<Scalar, 3, 1> vec() const { return {l, m, s}; }
};

using RgbColor = Rgb<double>;
using HslColor = Hsl<double>;
using LmsColor = Lms<double>;

template <typename Scalar>
Scalar wrap_degrees(Scalar deg) {
  Scalar w = std::fmod(deg, Scalar(360));
  if (w < 0) w += Scalar(360);
  // fmod(-1e-18, 360) + 360 rounds to 360
  if (w >= Scalar(360)) w = 0;
  return w;
}

template <typename Scalar>
Rgb<Scalar> hsl_to_rgb(const Hsl<Scalar>& c) {
  const Scalar h = wrap_degrees(c.hue) / Scalar(60);
  const Scalar chroma = (1 - std::abs(2 * c.lightness - 1)) * c.saturation;
  const Scalar x = chroma * (1 - std::abs(std::fmod(h, Scalar(2)) - 1));
  const Scalar m = c.lightness - chroma / 2;
  Scalar r = 0, g = 0, b = 0;
  switch (static_cast<int>(h)) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  return {r + m, g + m, b + m};
}

template <typename Scalar>
Hsl<Scalar> rgb_to_hsl(const Rgb<Scalar>& c) {
  const Scalar hi = std::max({c.r, c.g, c.b});
  const Scalar lo = std::min({c.r, c.g, c.b});
  const Scalar chroma = hi - lo;
  Hsl<Scalar> out;
  out.lightness = (hi + lo) / 2;
  if (chroma <= 0) return out;
  out.saturation = chroma / (1 - std::abs(2 * out.lightness - 1));
  Scalar h;
  if (hi == c.r)
    h = std::fmod((c.g - c.b) / chroma, Scalar(6));
  else if (hi == c.g)
    h = (c.b - c.r) / chroma + 2;
  else
    h = (c.r - c.g) / chroma + 4;
  out.hue = wrap_degrees(h * Scalar(60));
  return out;
}

/// sRGB electro-optical transfer function (IEC 61966-2-1 piecewise curve).
template <typename Scalar>
Scalar srgb_decode(Scalar v) {
  return v <= Scalar(0.04045) ? v / Scalar(12.92)
                              : std::pow((v + Scalar(0.055)) / Scalar(1.055), Scalar(2.4));
}

/// Linear sRGB -> XYZ (D65), IEC 61966-2-1.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> srgb_to_xyz_matrix() {
  Eigen::Matrix<Scalar, 3, 3> m;
  m << 0.4124564, 0.3575761, 0.1804375,
       0.2126729, 0.7151522, 0.0721750,
       0.0193339, 0.1191920, 0.9503041;
  return m;
}

/// Hunt-Pointer-Estevez XYZ -> LMS.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> hpe_matrix() {
  Eigen::Matrix<Scalar, 3, 3> m;
  m << 0.40024, 0.70760, -0.08081,
      -0.22630, 1.16532,  0.04570,
       0.0,     0.0,      0.91822;
  return m;
}

/// Linear sRGB -> LMS. Each row is rescaled so linear white (1,1,1) maps to
/// exactly equal cone values (1,1,1). Numerically:
///   L = 0.3139978 R + 0.6395083 G + 0.0464940 B
///   M = 0.1553785 R + 0.7579176 G + 0.0867039 B
///   S = 0.0177566 R + 0.1094680 G + 0.8727755 B
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> linear_rgb_to_lms_matrix() {
  Eigen::Matrix<Scalar, 3, 3> m = hpe_matrix<Scalar>() * srgb_to_xyz_matrix<Scalar>();
  for (int i = 0; i < 3; ++i) m.row(i) /= m.row(i).sum();
  return m;
}

template <typename Scalar>
Lms<Scalar> rgb_to_lms(const Rgb<Scalar>& c) {
  static const Eigen::Matrix<Scalar, 3, 3> m = linear_rgb_to_lms_matrix<Scalar>();
  const Eigen::Matrix<Scalar, 3, 1> lin(srgb_decode(c.r), srgb_decode(c.g), srgb_decode(c.b));
  const Eigen::Matrix<Scalar, 3, 1> lms = m * lin;
  return {lms(0), lms(1), lms(2)};
}

// --- MacLeod-Boynton chromaticity -------------------------------------------

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> macleod_boynton(const Lms<Scalar>& c) {
  const Scalar lum = c.l + c.m;
  if (!(lum > 0)) throw std::domain_error("MacLeod-Boynton coordinates need l+m > 0");
  return {c.l / lum, c.s / lum};
}

/// White point and per-axis scale that place a stimulus set on the unit circle.
template <typename Scalar = double>
struct ChromaticityAxes {
  Eigen::Matrix<Scalar, 2, 1> white{Scalar(0.5), Scalar(0.5)};
  Eigen::Matrix<Scalar, 2, 1> scale{Scalar(1), Scalar(1)};
};

template <typename Scalar = double>
struct ChromaticityAngle {
  Scalar angle{0};  // degrees, [0,360)
  bool zero_radius{false};
};

/// Axis scales are the largest absolute white-relative deviation reached by
/// `stimuli` along each MacLeod-Boynton axis.
template <typename Scalar>
ChromaticityAxes<Scalar> fit_chromaticity_axes(std::span<const Lms<Scalar>> stimuli,
                                               const Lms<Scalar>& white) {
  ChromaticityAxes<Scalar> axes;
  axes.white = macleod_boynton(white);
  Eigen::Matrix<Scalar, 2, 1> span = Eigen::Matrix<Scalar, 2, 1>::Zero();
  for (const auto& c : stimuli)
    span = span.cwiseMax((macleod_boynton(c) - axes.white).cwiseAbs());
  for (int i = 0; i < 2; ++i) axes.scale(i) = span(i) > 0 ? span(i) : Scalar(1);
  return axes;
}

template <typename Scalar>
ChromaticityAngle<Scalar> lms_to_chromaticity_angle(const Lms<Scalar>& c,
                                                    const ChromaticityAxes<Scalar>& axes) {
  const Eigen::Matrix<Scalar, 2, 1> d =
      (macleod_boynton(c) - axes.white).cwiseQuotient(axes.scale);
  if (d.x() == 0 && d.y() == 0) return {Scalar(0), true};
  const Scalar deg = std::atan2(d.y(), d.x()) * Scalar(180) / std::numbers::pi_v<Scalar>;
  return {wrap_degrees(deg), false};
}

/// Unscaled variant: angle relative to `white` with unit axis scales.
template <typename Scalar>
ChromaticityAngle<Scalar> lms_to_chromaticity_angle(const Lms<Scalar>& c, const Lms<Scalar>& white) {
  ChromaticityAxes<Scalar> axes;
  axes.white = macleod_boynton(white);
  return lms_to_chromaticity_angle(c, axes);
}

} // namespace huemodel

#endif
