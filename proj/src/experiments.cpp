#include "huemodel/experiments.hpp"

#include "huemodel/error.hpp"
#include "huemodel/parallel.hpp"
#include "huemodel/png_io.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace huemodel {

RgbImage full_field_stimulus(double hue, double saturation, double lightness) {
  const RgbColor c = hsl_to_rgb(HslColor{hue, saturation, lightness});
  return RgbImage::filled(kStandardSize, kStandardSize, c.r, c.g, c.b);
}

double window_mean(const Plane& p, int window) {
  if (window < 1) throw ArgumentError("averaging window must be at least one pixel");
  const int h = static_cast<int>(p.rows()), w = static_cast<int>(p.cols());
  const int wh = std::min(window, h), ww = std::min(window, w);
  return p.block((h - wh) / 2, (w - ww) / 2, wh, ww).mean();
}

const TuningCurve& LayerTuning::at(std::string_view name) const {
  for (const auto& c : curves)
    if (c.name == name) return c;
  throw ArgumentError(fmt::format("layer {} has no tuning curve '{}'", layer, name));
}

const LayerTuning& TuningResult::layer(std::string_view name) const {
  for (const auto& l : layers)
    if (l.layer == name) return l;
  throw ArgumentError(fmt::format("no tuning data for layer '{}'", name));
}

ChromaticityAxes<double> sweep_chromaticity_axes() {
  std::vector<LmsColor> stimuli;
  for (int i = 0; i < kTuningSamples; ++i)
    stimuli.push_back(rgb_to_lms(hsl_to_rgb(HslColor{i * kTuningStep, 1.0, 0.5})));
  return fit_chromaticity_axes<double>(stimuli, LmsColor{1, 1, 1});
}

TuningResult tuning_sweep(const ModelConfig& config, const ExperimentOptions& options) {
  TuningResult t;
  t.axes = sweep_chromaticity_axes();
  for (int i = 0; i < kTuningSamples; ++i) {
    const double hue = i * kTuningStep;
    t.hsl_hues.push_back(hue);
    t.mb_angles.push_back(
        lms_to_chromaticity_angle(rgb_to_lms(hsl_to_rgb(HslColor{hue, 1.0, 0.5})), t.axes).angle);
  }

  // per hue: layer -> plane -> mean
  std::vector<std::vector<std::vector<double>>> means(kTuningSamples);
  std::vector<LayerTuning> shape;
  parallel_for(kTuningSamples, [&](std::size_t i) {
    const PipelineResult r = run_pipeline(full_field_stimulus(t.hsl_hues[i]), config);
    for (const auto* layer : r.layers()) {
      std::vector<double> row;
      for (const auto& p : layer->planes) row.push_back(window_mean(p.plane, options.window));
      means[i].push_back(std::move(row));
    }
    if (i == 0) {
      for (const auto* layer : r.layers()) {
        LayerTuning lt{layer->layer, {}};
        for (const auto& p : layer->planes) lt.curves.push_back({p.name, {}});
        shape.push_back(std::move(lt));
      }
    }
  });

  t.layers = std::move(shape);
  for (std::size_t l = 0; l < t.layers.size(); ++l)
    for (std::size_t c = 0; c < t.layers[l].curves.size(); ++c)
      for (int i = 0; i < kTuningSamples; ++i) t.layers[l].curves[c].responses.push_back(means[i][l][c]);
  return t;
}

void write_tuning_csv(const TuningResult& t, std::string_view layer, const std::filesystem::path& path) {
  const LayerTuning& lt = t.layer(layer);
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << "hsl_hue_deg,mb_angle_deg";
  for (const auto& c : lt.curves) out << ',' << c.name;
  out << '\n';
  for (std::size_t i = 0; i < t.hsl_hues.size(); ++i) {
    out << fmt::format("{:g},{:.17g}", t.hsl_hues[i], t.mb_angles[i]);
    for (const auto& c : lt.curves) out << fmt::format(",{:.17g}", c.responses[i]);
    out << '\n';
  }
  if (!out) throw InputError(fmt::format("failed writing '{}'", path.string()));
}

double half_max_width(std::span<const double> responses, double step_deg) {
  if (responses.empty()) return 0;
  const double half = *std::max_element(responses.begin(), responses.end()) / 2;
  const std::size_t n = responses.size();
  double width = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = responses[k] - half;
    const double b = responses[(k + 1) % n] - half;
    if (a >= 0 && b >= 0)
      width += step_deg;
    else if (a >= 0 || b >= 0)
      width += step_deg * std::max(a, b) / (std::abs(a) + std::abs(b));
  }
  return width;
}

HueCircleStimulus hue_circle_stimulus(double inner_radius, double outer_radius) {
  if (!(inner_radius >= 0 && outer_radius > inner_radius))
    throw ArgumentError("hue circle needs 0 <= inner radius < outer radius");
  HueCircleStimulus s;
  s.inner_radius = inner_radius;
  s.outer_radius = outer_radius;
  s.image = RgbImage::filled(kStandardSize, kStandardSize, 0.5, 0.5, 0.5);
  const double centre = (kStandardSize - 1) / 2.0;
  for (int y = 0; y < kStandardSize; ++y)
    for (int x = 0; x < kStandardSize; ++x) {
      const double dx = x - centre;
      const double dy = centre - y;  // image rows grow downwards
      const double radius = std::hypot(dx, dy);
      if (radius < inner_radius || radius > outer_radius) continue;
      const double hue = wrap_degrees(std::atan2(dy, dx) * 180.0 / std::numbers::pi);
      const RgbColor c = hsl_to_rgb(HslColor{hue, 1.0, 0.5});
      s.image.r(y, x) = c.r;
      s.image.g(y, x) = c.g;
      s.image.b(y, x) = c.b;
    }
  return s;
}

PeakLocation plane_argmax(const Plane& p, const std::string& name) {
  if (p.size() == 0 || p.maxCoeff() == p.minCoeff())
    throw ExperimentError(fmt::format("plane '{}' is constant; its peak is undefined", name));
  PeakLocation loc{name, 0, 0, 0, p(0, 0)};
  for (int y = 0; y < p.rows(); ++y)
    for (int x = 0; x < p.cols(); ++x)
      if (p(y, x) > loc.value) {
        loc.value = p(y, x);
        loc.row = y;
        loc.col = x;
      }
  return loc;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("pearson_r needs two equal-length samples");
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), n), yv(y.data(), n);
  const Eigen::VectorXd xc = xv.array() - xv.mean();
  const Eigen::VectorXd yc = yv.array() - yv.mean();
  const double denom = xc.norm() * yc.norm();
  if (denom == 0) throw ExperimentError("correlation undefined for a constant sample");
  return xc.dot(yc) / denom;
}

double pearson_p_value(double r, std::size_t n) {
  if (n < 3) return 1.0;
  if (std::abs(r) >= 1.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  const double t = r * std::sqrt(dof / (1 - r * r));
  boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

CorrelationReport correlation_from_peaks(std::vector<PeakLocation> peaks) {
  CorrelationReport rep;
  rep.peaks = std::move(peaks);
  std::vector<double> hd, pd;
  for (std::size_t i = 0; i < rep.peaks.size(); ++i)
    for (std::size_t j = i + 1; j < rep.peaks.size(); ++j) {
      const auto& a = rep.peaks[i];
      const auto& b = rep.peaks[j];
      CorrelationPair pair{a.name, b.name, hue_distance(a.hue, b.hue),
                           std::hypot(double(a.row - b.row), double(a.col - b.col))};
      hd.push_back(pair.hue_distance);
      pd.push_back(pair.pixel_distance);
      rep.pairs.push_back(pair);
    }
  rep.r = pearson_r(hd, pd);
  rep.p_value = pearson_p_value(rep.r, hd.size());
  return rep;
}

CorrelationReport correlation_experiment(const ModelConfig& config, const ExperimentOptions& options) {
  const HueCircleStimulus s = hue_circle_stimulus(options.annulus_inner, options.annulus_outer);
  const PipelineResult r = run_pipeline(s.image, config);
  std::vector<PeakLocation> peaks;
  for (std::size_t i = 0; i < r.v4.planes.size(); ++i) {
    PeakLocation loc = plane_argmax(r.v4.planes[i].plane, r.v4.planes[i].name);
    loc.hue = config.v4[i].hue;
    peaks.push_back(loc);
  }
  return correlation_from_peaks(std::move(peaks));
}

void write_correlation_csv(const CorrelationReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << "type_a,type_b,hue_distance_deg,peak_distance_px\n";
  for (const auto& p : r.pairs)
    out << fmt::format("{},{},{:.17g},{:.17g}\n", p.first, p.second, p.hue_distance, p.pixel_distance);
  if (!out) throw InputError(fmt::format("failed writing '{}'", path.string()));
}

double hue_to_target_radians(double hue_deg) {
  if (!(hue_deg > 0 && hue_deg <= 360)) throw ArgumentError("reconstruction hue must lie in (0, 360]");
  return hue_deg * std::numbers::pi / 180.0;
}

namespace {

// uniform on the open interval (0,1) from the top 53 bits
double open_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> v4_window_means(const ModelConfig& config, const RgbImage& image, int window) {
  const PipelineResult r = run_pipeline(image, config);
  std::vector<double> out;
  for (const auto& p : r.v4.planes) out.push_back(window_mean(p.plane, window));
  return out;
}

} // namespace

ReconstructionResult reconstruction_experiment(const ModelConfig& config, double hue_deg, int samples,
                                               std::uint64_t seed, const ExperimentOptions& options) {
  if (samples < 8) throw ArgumentError("reconstruction needs at least 8 samples");
  ReconstructionResult res;
  res.hue_deg = hue_deg;
  res.target_rad = hue_to_target_radians(hue_deg);
  res.seed = seed;

  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> draws(samples);
  for (auto& [s, l] : draws) {
    s = open_unit(rng);
    l = open_unit(rng);
  }

  const auto k = static_cast<Eigen::Index>(config.v4.size());
  res.dataset.predictors.resize(samples, k);
  res.dataset.target = Eigen::VectorXd::Constant(samples, res.target_rad);
  for (const auto& t : config.v4) res.dataset.names.push_back(t.name);
  parallel_for(draws.size(), [&](std::size_t i) {
    const auto means =
        v4_window_means(config, full_field_stimulus(hue_deg, draws[i].first, draws[i].second), options.window);
    for (Eigen::Index j = 0; j < k; ++j) res.dataset.predictors(static_cast<Eigen::Index>(i), j) = means[j];
  });

  res.model = stepwise_fit(res.dataset, options.stepwise);
  res.canonical_responses = v4_window_means(config, full_field_stimulus(hue_deg), options.window);
  res.predicted_rad = predict(res.model, res.canonical_responses);
  res.error_deg = std::abs(res.predicted_rad - res.target_rad) * 180.0 / std::numbers::pi;
  return res;
}

std::vector<LayerMapEntry> emit_layer_maps(std::span<const LayerActivations* const> layers,
                                           const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));

  std::vector<LayerMapEntry> entries;
  nlohmann::json manifest = nlohmann::json::array();
  for (const auto* layer : layers)
    for (const auto& p : layer->planes) {
      LayerMapEntry e{layer->layer, p.name, fmt::format("{}_{}.png", layer->layer, p.name), 0, 0};
      const GrayScale s = write_png_gray(p.plane, dir / e.file);
      e.min = s.min;
      e.max = s.max;
      manifest.push_back({{"layer", e.layer}, {"type", e.type}, {"file", e.file}, {"min", e.min}, {"max", e.max}});
      entries.push_back(std::move(e));
    }
  std::ofstream out(dir / "layer_maps.json");
  if (!out) throw InputError(fmt::format("cannot write '{}'", (dir / "layer_maps.json").string()));
  out << nlohmann::json{{"planes", manifest}}.dump(2) << '\n';
  return entries;
}

} // namespace huemodel
