#include "huemodel/model.hpp"

#include "huemodel/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace huemodel {

void Rectifier::validate() const {
  if (!(lower <= saturation && saturation <= 1.0))
    throw ArgumentError(fmt::format("rectifier needs lower <= saturation <= 1 (got {} / {})",
                                    lower, saturation));
  if (!std::isfinite(slope) || !std::isfinite(base))
    throw ArgumentError("rectifier slope and base must be finite");
}

void OpponentWeights::validate() const {
  const std::array<double, 3> w = {weight_l, weight_m, weight_s};
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; }))
    throw ArgumentError(fmt::format("opponent type '{}' has no nonzero cone weight", name));
  for (double v : w)
    if (!(v >= -1.0 && v <= 1.0))
      throw ArgumentError(fmt::format("opponent type '{}' has a cone weight outside [-1,1]", name));
  for (double s : {sigma_l, sigma_m, sigma_s})
    if (!(s > 0)) throw ArgumentError(fmt::format("opponent type '{}' needs positive sigmas", name));
  if (!std::isfinite(gain)) throw ArgumentError("opponent gain must be finite");
}

void HueSelectiveWeights::validate() const {
  if ((weights.array() < 0).any() || !weights.allFinite())
    throw ArgumentError(fmt::format("V4 type '{}' has negative or non-finite weights", name));
  if (std::abs(weights.sum() - 1.0) > 1e-3)
    throw ArgumentError(fmt::format("V4 type '{}' weights sum to {}, not 1", name, weights.sum()));
}

double opponent_gamut_peak(const OpponentWeights& w) {
  double peak = 0;
  for (int corner = 0; corner < 8; ++corner) {
    const RgbColor c{double(corner & 1), double((corner >> 1) & 1), double((corner >> 2) & 1)};
    const LmsColor lms = rgb_to_lms(c);
    peak = std::max(peak, std::abs(w.weight_l * lms.l + w.weight_m * lms.m + w.weight_s * lms.s));
  }
  return peak;
}

std::array<OpponentWeights, 4> default_lgn_weights(double sigma) {
  using namespace plane_names;
  return {{
      {std::string(kLPlusMMinus), 1.0, -1.0, 0.0, sigma, sigma, sigma, 1.0},
      {std::string(kLMinusMPlus), -1.0, 1.0, 0.0, sigma, sigma, sigma, 1.0},
      {std::string(kSPlus), -0.5, -0.5, 1.0, sigma, sigma, sigma, 1.0},
      {std::string(kSMinus), 0.5, 0.5, -1.0, sigma, sigma, sigma, 1.0},
  }};
}

std::array<HueSelectiveWeights, 6> default_v4_weights() {
  //                                 L+M-        L-M+        S+(L+M)-    S-(L+M)+
  return {{
      {"red", 0.0, Eigen::Vector4d(0.85636, 0.00028984, 0.041238, 0.10211)},
      {"yellow", 60.0, Eigen::Vector4d(0.38019, 0.022312, 0.0005716, 0.59692)},
      {"green", 120.0, Eigen::Vector4d(0.031002, 0.31546, 0.012604, 0.64093)},
      {"cyan", 180.0, Eigen::Vector4d(0.00038727, 0.68329, 0.2109, 0.10543)},
      {"blue", 240.0, Eigen::Vector4d(0.014012, 0.29034, 0.69225, 0.0034021)},
      {"magenta", 300.0, Eigen::Vector4d(0.37948, 0.031779, 0.58531, 0.0034362)},
  }};
}

ModelConfig ModelConfig::defaults() {
  ModelConfig c;
  c.lgn = default_lgn_weights(c.plan.lgn.sigma);
  for (auto& t : c.lgn) t.gain = 1.0 / opponent_gamut_peak(t);
  c.v4 = default_v4_weights();
  return c;
}

void ModelConfig::validate() const {
  for (const auto* r : {&lgn_rectifier, &v1_rectifier, &v2_rectifier, &v4_rectifier}) r->validate();
  for (const auto* k : {&plan.lgn, &plan.v1, &plan.v2, &plan.v4}) {
    if (k->size < 1 || k->size % 2 == 0)
      throw ArgumentError(fmt::format("kernel size {} must be odd and >= 1", k->size));
    if (!(k->sigma > 0)) throw ArgumentError("kernel sigma must be positive");
  }
  for (const auto& t : lgn) t.validate();
  for (const auto& t : v4) t.validate();
}

const Plane* LayerActivations::find(std::string_view name) const {
  for (const auto& p : planes)
    if (p.name == name) return &p.plane;
  return nullptr;
}

const Plane& LayerActivations::at(std::string_view name) const {
  if (const Plane* p = find(name)) return *p;
  throw ArgumentError(fmt::format("layer {} has no plane named '{}'", layer, name));
}

const LayerActivations& PipelineResult::layer(std::string_view name) const {
  for (const auto* l : layers())
    if (l->layer == name) return *l;
  throw ArgumentError(fmt::format("unknown layer '{}'", name));
}

ConeImage rgb_to_cones(const RgbImage& rgb) {
  const int h = rgb.height(), w = rgb.width();
  ConeImage cones{Plane(h, w), Plane(h, w), Plane(h, w)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const LmsColor c = rgb_to_lms(RgbColor{rgb.r(y, x), rgb.g(y, x), rgb.b(y, x)});
      cones.l(y, x) = c.l;
      cones.m(y, x) = c.m;
      cones.s(y, x) = c.s;
    }
  return cones;
}

LayerActivations lgn_layer(const ConeImage& cones, std::span<const OpponentWeights> types,
                           int kernel_size, const Rectifier& rect) {
  rect.validate();
  if (cones.l.rows() != cones.m.rows() || cones.l.rows() != cones.s.rows() ||
      cones.l.cols() != cones.m.cols() || cones.l.cols() != cones.s.cols())
    throw ArgumentError("cone planes are not co-registered");

  // blurred cone planes keyed by (cone, sigma); types usually share sigmas
  std::map<std::pair<int, double>, Plane> blurred;
  const std::array<const Plane*, 3> planes = {&cones.l, &cones.m, &cones.s};
  auto smoothed = [&](int cone, double sigma) -> const Plane& {
    auto key = std::make_pair(cone, sigma);
    auto it = blurred.find(key);
    if (it == blurred.end())
      it = blurred.emplace(key, convolve(*planes[cone], make_gaussian(kernel_size, sigma))).first;
    return it->second;
  };

  LayerActivations out{"LGN", {}};
  for (const auto& t : types) {
    t.validate();
    Plane sum = Plane::Zero(cones.l.rows(), cones.l.cols());
    const std::array<std::pair<double, double>, 3> terms = {
        {{t.weight_l, t.sigma_l}, {t.weight_m, t.sigma_m}, {t.weight_s, t.sigma_s}}};
    for (int c = 0; c < 3; ++c)
      if (terms[c].first != 0.0) sum += terms[c].first * smoothed(c, terms[c].second);
    out.planes.push_back({t.name, rectify(rect, Plane(t.gain * sum))});
  }
  return out;
}

LayerActivations gaussian_layer(const LayerActivations& input, const LayerKernel& kernel,
                                const Rectifier& rect, std::string layer_name) {
  rect.validate();
  const GaussianKernel k = make_gaussian(kernel.size, kernel.sigma);
  LayerActivations out{std::move(layer_name), {}};
  for (const auto& p : input.planes) out.planes.push_back({p.name, rectify(rect, convolve(p.plane, k))});
  return out;
}

LayerActivations v4_layer(const LayerActivations& v2, std::span<const HueSelectiveWeights> types,
                          const LayerKernel& kernel, const Rectifier& rect) {
  rect.validate();
  const GaussianKernel k = make_gaussian(kernel.size, kernel.sigma);
  // one convolution per V2 plane; the same kernel feeds every V4 type
  std::array<Plane, 4> smoothed;
  for (std::size_t i = 0; i < 4; ++i) {
    const Plane* p = v2.find(plane_names::kOpponent[i]);
    if (!p) throw ArgumentError(fmt::format("V2 input is missing plane '{}'", plane_names::kOpponent[i]));
    smoothed[i] = convolve(*p, k);
  }
  LayerActivations out{"V4", {}};
  for (const auto& t : types) {
    Plane sum = Plane::Zero(smoothed[0].rows(), smoothed[0].cols());
    for (std::size_t i = 0; i < 4; ++i)
      if (t.weights(i) != 0.0) sum += t.weights(i) * smoothed[i];
    out.planes.push_back({t.name, rectify(rect, sum)});
  }
  return out;
}

double hue_distance(double a, double b) {
  const double d = std::abs(wrap_degrees(a) - wrap_degrees(b));
  return std::min(d, 360.0 - d);
}

HueSelectiveWeights derive_v4_weights(double target, std::span<const double, 4> v2_peaks,
                                      double sigma, std::string name) {
  if (!(sigma > 0)) throw ArgumentError("derive_v4_weights needs sigma > 0");
  std::array<double, 4> d{};
  for (int j = 0; j < 4; ++j) d[j] = hue_distance(target, v2_peaks[j]);
  const double nearest = *std::min_element(d.begin(), d.end());

  HueSelectiveWeights out{std::move(name), wrap_degrees(target), Eigen::Vector4d::Zero()};
  if (std::isinf(sigma)) {
    out.weights.setConstant(0.25);
    return out;
  }
  for (int j = 0; j < 4; ++j)
    out.weights(j) = std::exp(-(d[j] * d[j] - nearest * nearest) / (2 * sigma * sigma));
  out.weights /= out.weights.sum();
  return out;
}

PipelineResult run_pipeline(const RgbImage& image, const ModelConfig& config) {
  config.validate();
  if (image.r.size() == 0) throw InputError("input image is empty");
  const RgbImage resized{resize_to_standard(image.r), resize_to_standard(image.g),
                         resize_to_standard(image.b)};
  PipelineResult r;
  r.cones = rgb_to_cones(resized);
  r.lgn = lgn_layer(r.cones, config.lgn, config.plan.lgn.size, config.lgn_rectifier);
  r.v1 = gaussian_layer(r.lgn, config.plan.v1, config.v1_rectifier, "V1");
  r.v2 = gaussian_layer(r.v1, config.plan.v2, config.v2_rectifier, "V2");
  r.v4 = v4_layer(r.v2, config.v4, config.plan.v4, config.v4_rectifier);
  return r;
}

} // namespace huemodel
