#ifndef HUEMODEL_EXPERIMENTS_HPP
#define HUEMODEL_EXPERIMENTS_HPP

// Stimulus generators and the three experiments: hue tuning sweeps, the
// hue-distance / peak-displacement correlation, and hue reconstruction from
// V4 responses by stepwise regression.

#include "huemodel/colorspace.hpp"
#include "huemodel/model.hpp"
#include "huemodel/regression.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace huemodel {

struct ExperimentOptions {
  int window{32};             // side of the central averaging window, pixels
  double annulus_inner{60};   // hue-circle stimulus radii, pixels
  double annulus_outer{110};
  StepwiseOptions stepwise;
};

inline constexpr int kTuningSamples = 60;
inline constexpr double kTuningStep = 6.0;

/// Uniform 256x256 image of HSL(hue, saturation, lightness).
RgbImage full_field_stimulus(double hue, double saturation = 1.0, double lightness = 0.5);

/// Mean of the centred window x window block (clipped to the plane).
double window_mean(const Plane& p, int window);

struct TuningCurve {
  std::string name;
  std::vector<double> responses;  // one per sweep hue
};

struct LayerTuning {
  std::string layer;
  std::vector<TuningCurve> curves;

  const TuningCurve& at(std::string_view name) const;
};

struct TuningResult {
  std::vector<double> hsl_hues;       // 0, 6, ..., 354
  std::vector<double> mb_angles;      // chromaticity angle of each stimulus
  ChromaticityAxes<double> axes;      // unit-circle scaling used for mb_angles
  std::vector<LayerTuning> layers;    // LGN, V1, V2, V4

  const LayerTuning& layer(std::string_view name) const;
};

/// MacLeod-Boynton axes fitted to the 60 sweep hues at s=1, l=0.5, white (1,1,1).
ChromaticityAxes<double> sweep_chromaticity_axes();

/// Runs the full pipeline on each of the 60 full-field hues and records the
/// central-window mean of every plane in every layer.
TuningResult tuning_sweep(const ModelConfig& config, const ExperimentOptions& options = {});

/// Columns: hsl_hue_deg, mb_angle_deg, one per neuron type.
void write_tuning_csv(const TuningResult& t, std::string_view layer, const std::filesystem::path& path);

/// Total hue arc (degrees) over which a sampled circular curve is at least
/// half its maximum; crossings are linearly interpolated between samples.
double half_max_width(std::span<const double> responses, double step_deg = kTuningStep);

struct HueCircleStimulus {
  RgbImage image;
  double inner_radius{60};
  double outer_radius{110};
};

/// Annulus whose hue equals the counterclockwise polar angle (red at
/// 3 o'clock), s=1, l=0.5, on a mid-gray background.
HueCircleStimulus hue_circle_stimulus(double inner_radius = 60, double outer_radius = 110);

struct PeakLocation {
  std::string name;
  double hue{0};
  int row{0}, col{0};
  double value{0};
};

struct CorrelationPair {
  std::string first, second;
  double hue_distance{0};
  double pixel_distance{0};
};

struct CorrelationReport {
  std::vector<PeakLocation> peaks;
  std::vector<CorrelationPair> pairs;  // C(6,2) = 15
  double r{0};
  double p_value{1};
};

/// Location of the maximum; ties go to the smallest row-major index.
/// Throws ExperimentError naming the plane if it is constant.
PeakLocation plane_argmax(const Plane& p, const std::string& name);

double pearson_r(std::span<const double> x, std::span<const double> y);
/// Two-sided p-value for H0: rho = 0 using t = r sqrt(n-2) / sqrt(1-r^2).
double pearson_p_value(double r, std::size_t n);

CorrelationReport correlation_from_peaks(std::vector<PeakLocation> peaks);
CorrelationReport correlation_experiment(const ModelConfig& config, const ExperimentOptions& options = {});
void write_correlation_csv(const CorrelationReport& r, const std::filesystem::path& path);

struct ReconstructionResult {
  double hue_deg{360};
  double target_rad{0};
  std::uint64_t seed{0};
  Dataset dataset;
  StepwiseModel model;
  std::vector<double> canonical_responses;  // V4 window means at s=1, l=0.5
  double predicted_rad{0};
  double error_deg{0};
};

/// Hue in (0,360] as radians in (0, 2pi]; 360 maps to 2pi.
double hue_to_target_radians(double hue_deg);

/// Draws `samples` (saturation, lightness) pairs uniformly from (0,1)^2 with a
/// seeded mt19937_64, records the six V4 central-window means for each, and
/// fits stepwise regression against the constant target.
ReconstructionResult reconstruction_experiment(const ModelConfig& config, double hue_deg,
                                               int samples = 500, std::uint64_t seed = 1,
                                               const ExperimentOptions& options = {});

struct LayerMapEntry {
  std::string layer, type, file;
  double min{0}, max{0};
};

/// One grayscale PNG per plane named "<layer>_<type>.png", plus
/// layer_maps.json listing every file with its scale.
std::vector<LayerMapEntry> emit_layer_maps(std::span<const LayerActivations* const> layers,
                                           const std::filesystem::path& dir);

} // namespace huemodel

#endif
