#include "huemodel/imaging.hpp"
#include "huemodel/png_io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace huemodel;

namespace {

// Direct O(n^2 k^2) convolution with edge replication; independent of the
// separable implementation.
Plane direct_convolve(const Plane& p, const Plane& weights) {
  const int h = static_cast<int>(p.rows()), w = static_cast<int>(p.cols());
  const int size = static_cast<int>(weights.rows()), r = size / 2;
  Plane out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
          const int yy = std::min(std::max(y + i - r, 0), h - 1);
          const int xx = std::min(std::max(x + j - r, 0), w - 1);
          acc += weights(i, j) * p(yy, xx);
        }
      out(y, x) = acc;
    }
  return out;
}

// Brute-force 2-D sample-and-normalise Gaussian.
Plane brute_gaussian(int size, double sigma) {
  const int r = size / 2;
  Plane g(size, size);
  double total = 0;
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      const double d2 = double((i - r) * (i - r) + (j - r) * (j - r));
      g(i, j) = std::exp(-d2 / (2 * sigma * sigma));
      total += g(i, j);
    }
  return g / total;
}

Plane random_plane(std::mt19937_64& rng, int h, int w) {
  std::uniform_real_distribution<double> u(-1, 1);
  Plane p(h, w);
  for (int i = 0; i < p.size(); ++i) p.data()[i] = u(rng);
  return p;
}

} // namespace

TEST_CASE("make_gaussian degenerate sizes") {
  auto one = make_gaussian(1, 0.3);
  CHECK(one.weights.rows() == 1);
  CHECK(one.weights(0, 0) == 1.0);

  auto flat = make_gaussian(3, 1e9);
  for (int i = 0; i < 9; ++i) CHECK(flat.weights.data()[i] == doctest::Approx(1.0 / 9).epsilon(1e-12));

  CHECK_THROWS_AS(make_gaussian(4, 1.0), ArgumentError);
  CHECK_THROWS_AS(make_gaussian(0, 1.0), ArgumentError);
  CHECK_THROWS_AS(make_gaussian(-3, 1.0), ArgumentError);
  CHECK_THROWS_AS(make_gaussian(5, 0.0), ArgumentError);
}

TEST_CASE("make_gaussian matches the brute-force oracle") {
  const auto k = make_gaussian(19, 3.17);
  const Plane oracle = brute_gaussian(19, 3.17);
  CHECK(std::abs(k.weights.sum() - 1.0) < 1e-12);
  CHECK(std::abs(k.weights(9, 9) - oracle(9, 9)) < 1e-15);
  CHECK((k.weights - oracle).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("gaussian weights are symmetric, positive and decay from the centre") {
  for (int size : {5, 19, 39, 77}) {
    const auto k = make_gaussian(size, size / 6.0);
    const Plane& w = k.weights;
    CHECK(std::abs(w.sum() - 1.0) < 1e-12);
    CHECK((w - w.rowwise().reverse()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((w - w.colwise().reverse()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((w - w.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(w.minCoeff() > 0);
    const int r = size / 2;
    for (int i = r; i + 1 < size; ++i) {
      CHECK(w(r, i + 1) < w(r, i));
      CHECK(w(i + 1, i + 1) < w(i, i));
    }
  }
}

TEST_CASE("convolution preserves constants") {
  const Plane p = Plane::Constant(20, 31, 0.37);
  for (int size : {1, 5, 19, 77}) {
    const Plane out = convolve(p, make_gaussian(size, size / 6.0 + 0.1));
    CHECK((out.array() - 0.37).abs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("impulse response is the kernel") {
  Plane p = Plane::Zero(21, 21);
  p(10, 10) = 1.0;
  const auto k = make_gaussian(7, 1.3);
  const Plane out = convolve(p, k);
  CHECK((out.block(7, 7, 7, 7) - k.weights).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(out.sum() - 1.0) < 1e-12);
}

TEST_CASE("separable convolution equals the direct definition") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Plane p = random_plane(rng, 16, 16);
    const auto k = make_gaussian(5, 0.5 + trial * 0.2);
    CHECK((convolve(p, k) - direct_convolve(p, k.weights)).cwiseAbs().maxCoeff() < 1e-10);
  }
  // non-square, kernel larger than the plane
  const Plane p = random_plane(rng, 9, 14);
  const auto k = make_gaussian(19, 3.0);
  CHECK((convolve(p, k) - direct_convolve(p, k.weights)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("convolution is monotone") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  const auto k = make_gaussian(9, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Plane p = random_plane(rng, 24, 24);
    Plane q = p;
    for (int i = 0; i < q.size(); ++i) q.data()[i] += u(rng);
    CHECK((convolve(q, k) - convolve(p, k)).minCoeff() >= -1e-15);
  }
}

TEST_CASE("convolution preserves the mean under periodic extension") {
  // tile the plane three times each way; the centre tile of the replicated
  // convolution then sees periodic padding
  std::mt19937_64 rng(1);
  const Plane p = random_plane(rng, 16, 16);
  Plane tiled(48, 48);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tiled.block(16 * i, 16 * j, 16, 16) = p;
  const Plane out = convolve(tiled, make_gaussian(9, 1.7));
  CHECK(out.block(16, 16, 16, 16).mean() == doctest::Approx(p.mean()).epsilon(1e-12));
}

TEST_CASE("resize_to_standard") {
  std::mt19937_64 rng(2);
  const Plane same = random_plane(rng, 256, 256);
  CHECK(resize_to_standard(same) == same);

  const Plane big = Plane::Constant(512, 512, 0.25);
  const Plane small = resize_to_standard(big);
  CHECK(small.rows() == 256);
  CHECK(small.cols() == 256);
  CHECK((small.array() - 0.25).abs().maxCoeff() < 1e-15);

  Plane ramp(2, 2);
  ramp << 0, 1, 0, 1;
  const Plane up = resize_to_standard(ramp);
  for (int y = 0; y < 256; ++y)
    for (int x = 0; x + 1 < 256; ++x) REQUIRE(up(y, x + 1) >= up(y, x));
  CHECK(up(0, 0) == 0.0);
  CHECK(up(0, 255) == 1.0);

  CHECK_THROWS_AS(resize_to_standard(Plane()), ArgumentError);
}

TEST_CASE("png round trip and grayscale export") {
  const auto dir = std::filesystem::temp_directory_path() / "huemodel_test_imaging";
  std::filesystem::create_directories(dir);

  RgbImage img = RgbImage::filled(8, 5, 0, 0, 0);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 8; ++x) {
      img.r(y, x) = x / 7.0;
      img.g(y, x) = y / 4.0;
      img.b(y, x) = 1.0;
    }
  write_png_rgb(img, dir / "rgb.png");
  const RgbImage back = read_png_rgb(dir / "rgb.png");
  CHECK(back.width() == 8);
  CHECK(back.height() == 5);
  CHECK((back.r - img.r).cwiseAbs().maxCoeff() <= 0.5 / 255 + 1e-12);
  CHECK((back.g - img.g).cwiseAbs().maxCoeff() <= 0.5 / 255 + 1e-12);

  Plane p(3, 4);
  p << -1, 0, 1, 2, 0, 0, 0, 0, 3, 3, 3, 3;
  const GrayScale s = write_png_gray(p, dir / "gray.png");
  CHECK(s.min == -1);
  CHECK(s.max == 3);
  const RgbImage g = read_png_rgb(dir / "gray.png");
  CHECK(g.r(0, 0) == 0.0);
  CHECK(g.r(2, 0) == 1.0);
  std::ifstream side(dir / "gray.png.scale.txt");
  double lo = 0, hi = 0;
  side >> lo >> hi;
  CHECK(lo == -1);
  CHECK(hi == 3);

  const GrayScale zero = write_png_gray(Plane::Zero(4, 4), dir / "zero.png");
  CHECK(zero.min == 0);
  CHECK(zero.max == 0);
  CHECK(read_png_rgb(dir / "zero.png").r.maxCoeff() == 0.0);

  CHECK_THROWS_AS(read_png_rgb(dir / "missing.png"), InputError);
  std::ofstream(dir / "bogus.png") << "not a png";
  CHECK_THROWS_AS(read_png_rgb(dir / "bogus.png"), InputError);
  std::filesystem::remove_all(dir);
}
