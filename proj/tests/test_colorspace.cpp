#include "huemodel/colorspace.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace huemodel;

namespace {

// sRGB inverse EOTF, used only to build linear-light test inputs.
double srgb_encode(double v) {
  return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1 / 2.4) - 0.055;
}

// Rounded linear-RGB -> LMS matrix as documented on linear_rgb_to_lms_matrix.
const double kDocumented[3][3] = {{0.3139978, 0.6395083, 0.0464940},
                                  {0.1553785, 0.7579176, 0.0867039},
                                  {0.0177566, 0.1094680, 0.8727755}};

} // namespace

TEST_CASE("hsl_to_rgb primaries and greys") {
  auto red = hsl_to_rgb(HslColor{0, 1, 0.5});
  CHECK(red.r == doctest::Approx(1));
  CHECK(red.g == doctest::Approx(0));
  CHECK(red.b == doctest::Approx(0));

  auto green = hsl_to_rgb(HslColor{120, 1, 0.5});
  CHECK(green.r == doctest::Approx(0));
  CHECK(green.g == doctest::Approx(1));
  CHECK(green.b == doctest::Approx(0));

  for (double h : {0.0, 77.0, 359.0}) {
    auto grey = hsl_to_rgb(HslColor{h, 0, 0.5});
    CHECK(grey.r == doctest::Approx(0.5));
    CHECK(grey.g == doctest::Approx(0.5));
    CHECK(grey.b == doctest::Approx(0.5));
  }
  auto black = hsl_to_rgb(HslColor{200, 1, 0});
  auto white = hsl_to_rgb(HslColor{200, 1, 1});
  CHECK(black.r + black.g + black.b == doctest::Approx(0));
  CHECK(white.r + white.g + white.b == doctest::Approx(3));
}

TEST_CASE("hue wraps modulo 360") {
  CHECK(wrap_degrees(360.0) == 0.0);
  CHECK(wrap_degrees(-90.0) == doctest::Approx(270));
  auto a = hsl_to_rgb(HslColor{420, 1, 0.5});
  auto b = hsl_to_rgb(HslColor{60, 1, 0.5});
  CHECK(a.r == doctest::Approx(b.r));
  CHECK(a.g == doctest::Approx(b.g));
}

TEST_CASE("hsl -> rgb -> hsl recovers hue for s > 0") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> hue(0, 360), sat(0.05, 1), light(0.05, 0.95);
  for (int i = 0; i < 20000; ++i) {
    HslColor c{hue(rng), sat(rng), light(rng)};
    HslColor back = rgb_to_hsl(hsl_to_rgb(c));
    double dh = std::abs(back.hue - c.hue);
    dh = std::min(dh, 360 - dh);
    REQUIRE(dh < 1e-9);
    CHECK(back.saturation == doctest::Approx(c.saturation).epsilon(1e-9));
    CHECK(back.lightness == doctest::Approx(c.lightness).epsilon(1e-12));
  }
}

TEST_CASE("rgb_to_lms white, black and the documented matrix") {
  auto w = rgb_to_lms(RgbColor{1, 1, 1});
  CHECK(std::abs(w.l - 1) < 1e-6);
  CHECK(std::abs(w.m - 1) < 1e-6);
  CHECK(std::abs(w.s - 1) < 1e-6);

  auto k = rgb_to_lms(RgbColor{0, 0, 0});
  CHECK(k.l == 0.0);
  CHECK(k.m == 0.0);
  CHECK(k.s == 0.0);

  auto red = rgb_to_lms(RgbColor{1, 0, 0});
  CHECK(red.l > red.m);
  CHECK(std::abs(red.l - 0.3139978) < 1e-6);
  CHECK(std::abs(red.m - 0.1553785) < 1e-6);
  CHECK(std::abs(red.s - 0.0177566) < 1e-6);

  // every in-gamut colour against the rounded documented matrix
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    RgbColor c{u(rng), u(rng), u(rng)};
    const double lin[3] = {srgb_decode(c.r), srgb_decode(c.g), srgb_decode(c.b)};
    auto lms = rgb_to_lms(c);
    const double got[3] = {lms.l, lms.m, lms.s};
    for (int r = 0; r < 3; ++r) {
      double expect = 0;
      for (int j = 0; j < 3; ++j) expect += kDocumented[r][j] * lin[j];
      REQUIRE(std::abs(got[r] - expect) < 1e-6);
      REQUIRE(got[r] >= 0);
    }
  }
}

TEST_CASE("rgb_to_lms is linear in linear light") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 500; ++i) {
    const double lin[3] = {u(rng), u(rng), u(rng)};
    const double a = u(rng);
    auto base = rgb_to_lms(RgbColor{srgb_encode(lin[0]), srgb_encode(lin[1]), srgb_encode(lin[2])});
    auto scaled =
        rgb_to_lms(RgbColor{srgb_encode(a * lin[0]), srgb_encode(a * lin[1]), srgb_encode(a * lin[2])});
    CHECK(scaled.l == doctest::Approx(a * base.l).epsilon(1e-9));
    CHECK(scaled.m == doctest::Approx(a * base.m).epsilon(1e-9));
    CHECK(scaled.s == doctest::Approx(a * base.s).epsilon(1e-9));
  }
}

TEST_CASE("srgb_decode uses the piecewise curve") {
  CHECK(srgb_decode(0.04) == doctest::Approx(0.04 / 12.92));
  CHECK(srgb_decode(0.5) == doctest::Approx(std::pow(0.555 / 1.055, 2.4)));
  CHECK(srgb_decode(1.0) == doctest::Approx(1.0));
}

namespace {

std::vector<LmsColor> sweep_stimuli() {
  std::vector<LmsColor> s;
  for (int i = 0; i < 60; ++i) s.push_back(rgb_to_lms(hsl_to_rgb(HslColor{6.0 * i, 1, 0.5})));
  return s;
}

} // namespace

TEST_CASE("chromaticity angle of the white point is flagged") {
  const LmsColor white{1, 1, 1};
  auto a = lms_to_chromaticity_angle(white, white);
  CHECK(a.zero_radius);
  CHECK(a.angle == 0.0);
}

TEST_CASE("chromaticity angle needs l+m > 0") {
  CHECK_THROWS_AS(lms_to_chromaticity_angle(LmsColor{0, 0, 1}, LmsColor{1, 1, 1}), std::domain_error);
  CHECK_THROWS_AS(lms_to_chromaticity_angle(LmsColor{1, 1, 1}, LmsColor{0, 0, 0}), std::domain_error);
}

TEST_CASE("colours symmetric about white are 180 degrees apart") {
  const LmsColor white{1, 1, 1};
  ChromaticityAxes<double> axes;
  axes.white = macleod_boynton(white);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int i = 0; i < 200; ++i) {
    const double dx = u(rng), dy = u(rng);
    // l/(l+m) = 0.5 + dx, s/(l+m) = 0.5 + dy with l+m = 1
    LmsColor a{0.5 + dx, 0.5 - dx, 0.5 + dy};
    LmsColor b{0.5 - dx, 0.5 + dx, 0.5 - dy};
    const double d = std::abs(lms_to_chromaticity_angle(a, axes).angle -
                              lms_to_chromaticity_angle(b, axes).angle);
    CHECK(d == doctest::Approx(180).epsilon(1e-9));
  }
}

TEST_CASE("sweep hues land on the scaled circle in hue order") {
  const auto stimuli = sweep_stimuli();
  const auto axes = fit_chromaticity_axes<double>(stimuli, LmsColor{1, 1, 1});
  CHECK(axes.white(0) == doctest::Approx(0.5));
  CHECK(axes.white(1) == doctest::Approx(0.5));

  std::vector<double> angles;
  for (const auto& c : stimuli) angles.push_back(lms_to_chromaticity_angle(c, axes).angle);

  // HSL red sits just below the +L/(L+M) axis (numpy reference with the same
  // constants: 355.63334096 deg).
  CHECK(angles[0] == doctest::Approx(355.63334096).epsilon(1e-9));

  // Strictly monotone around the circle: every step turns the same way and
  // the steps add up to exactly one revolution.
  double total = 0;
  for (int i = 0; i < 60; ++i) {
    double step = angles[(i + 1) % 60] - angles[i];
    step = std::remainder(step, 360.0);
    REQUIRE(step < 0);
    total += step;
  }
  CHECK(total == doctest::Approx(-360));

  // maxima of the scaled deviations are exactly one on each axis
  double mx = 0, my = 0;
  for (const auto& c : stimuli) {
    const Eigen::Vector2d d = (macleod_boynton(c) - axes.white).cwiseQuotient(axes.scale);
    mx = std::max(mx, std::abs(d.x()));
    my = std::max(my, std::abs(d.y()));
  }
  CHECK(mx == doctest::Approx(1));
  CHECK(my == doctest::Approx(1));
}
