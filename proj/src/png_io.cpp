#include "huemodel/png_io.hpp"

#include "huemodel/error.hpp"

#include <fmt/format.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <vector>

namespace huemodel {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what) *what = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

void write_rows(const std::filesystem::path& path, int width, int height, int color_type,
                const std::vector<png_byte>& pixels) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw InputError(fmt::format("cannot open '{}' for writing", path.string()));

  std::string what;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &what, png_error_fn, png_warning_fn);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw InputError("libpng initialisation failed");
  }
  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(pixels.data() + static_cast<size_t>(y) * width * channels);

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw InputError(fmt::format("failed writing '{}': {}", path.string(), what));
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

png_byte to_byte(double v) {
  return static_cast<png_byte>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

} // namespace

RgbImage read_png_rgb(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw InputError(fmt::format("cannot open input image '{}'", path.string()));

  png_byte sig[8] = {};
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw InputError(fmt::format("'{}' is not a PNG file", path.string()));

  std::string what;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &what, png_error_fn, png_warning_fn);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputError("libpng initialisation failed");
  }

  RgbImage img;
  std::vector<png_byte> buf;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputError(fmt::format("cannot decode '{}': {}", path.string(), what));
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  // normalise everything to 8-bit RGB
  const int color_type = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const size_t stride = png_get_rowbytes(png, info);
  buf.resize(stride * height);
  rows.resize(height);
  for (int y = 0; y < height; ++y) rows[y] = buf.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  img.r.resize(height, width);
  img.g.resize(height, width);
  img.b.resize(height, width);
  for (int y = 0; y < height; ++y) {
    const png_byte* row = rows[y];
    for (int x = 0; x < width; ++x) {
      img.r(y, x) = row[3 * x] / 255.0;
      img.g(y, x) = row[3 * x + 1] / 255.0;
      img.b(y, x) = row[3 * x + 2] / 255.0;
    }
  }
  return img;
}

void write_png_rgb(const RgbImage& image, const std::filesystem::path& path) {
  const int w = image.width(), h = image.height();
  std::vector<png_byte> px(static_cast<size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const size_t o = (static_cast<size_t>(y) * w + x) * 3;
      px[o] = to_byte(image.r(y, x));
      px[o + 1] = to_byte(image.g(y, x));
      px[o + 2] = to_byte(image.b(y, x));
    }
  write_rows(path, w, h, PNG_COLOR_TYPE_RGB, px);
}

GrayScale write_png_gray(const Plane& p, const std::filesystem::path& path) {
  GrayScale scale;
  if (p.size() > 0) {
    scale.min = p.minCoeff();
    scale.max = p.maxCoeff();
  }
  const double range = scale.max - scale.min;
  const int w = static_cast<int>(p.cols()), h = static_cast<int>(p.rows());
  std::vector<png_byte> px(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      px[static_cast<size_t>(y) * w + x] = range > 0 ? to_byte((p(y, x) - scale.min) / range) : 0;
  write_rows(path, w, h, PNG_COLOR_TYPE_GRAY, px);

  auto sidecar = path;
  sidecar += ".scale.txt";
  std::ofstream out(sidecar);
  if (!out) throw InputError(fmt::format("cannot write '{}'", sidecar.string()));
  out << fmt::format("{:.17g} {:.17g}\n", scale.min, scale.max);
  return scale;
}

} // namespace huemodel
