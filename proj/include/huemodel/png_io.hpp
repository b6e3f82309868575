#ifndef HUEMODEL_PNG_IO_HPP
#define HUEMODEL_PNG_IO_HPP

#include "huemodel/imaging.hpp"

#include <filesystem>

namespace huemodel {

/// Reads an 8-bit (or 16-bit) PNG of any colour type into RGB planes in [0,1].
/// Throws InputError naming the path when the file is missing or undecodable.
RgbImage read_png_rgb(const std::filesystem::path& path);

void write_png_rgb(const RgbImage& image, const std::filesystem::path& path);

/// Min/max used to map a plane onto 0..255.
struct GrayScale {
  double min{0};
  double max{0};
};

/// Min-max scales `p` to 8-bit grayscale (minimum black, maximum white; a
/// constant plane is written black) and records the scale in a sidecar
/// `<path>.scale.txt` holding "min max".
GrayScale write_png_gray(const Plane& p, const std::filesystem::path& path);

} // namespace huemodel

#endif
