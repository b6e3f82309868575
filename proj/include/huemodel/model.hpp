#ifndef HUEMODEL_MODEL_HPP
#define HUEMODEL_MODEL_HPP

// Feedforward LGN -> V1 -> V2 -> V4 hierarchy of single-opponent and
// hue-selective neuron maps.

#include "huemodel/colorspace.hpp"
#include "huemodel/imaging.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace huemodel {

/// Piecewise-linear response nonlinearity with range [lower, 1].
///
/// Let v = slope * p + base. The output is `lower` when v < lower, v when
/// lower <= v <= saturation, and 1 otherwise. Above saturation the result is
/// 1, not `saturation`, so the function jumps when saturation < 1.
struct Rectifier {
  double slope{1};
  double base{0};
  double lower{0};
  double saturation{1};

  /// Throws ArgumentError unless lower <= saturation <= 1.
  void validate() const;

  template <typename Scalar>
  Scalar operator()(Scalar p) const {
    const Scalar v = Scalar(slope) * p + Scalar(base);
    if (v < Scalar(lower)) return Scalar(lower);
    if (v <= Scalar(saturation)) return v;
    return Scalar(1);
  }
};

template <typename Scalar>
Scalar rectify(const Rectifier& r, Scalar p) {
  return r(p);
}

template <typename Scalar>
PlaneT<Scalar> rectify(const Rectifier& r, const PlaneT<Scalar>& p) {
  return p.unaryExpr([&r](Scalar v) { return r(v); });
}

namespace plane_names {
inline constexpr std::string_view kLPlusMMinus = "L+M-";
inline constexpr std::string_view kLMinusMPlus = "L-M+";
inline constexpr std::string_view kSPlus = "S+(L+M)-";
inline constexpr std::string_view kSMinus = "S-(L+M)+";
inline constexpr std::array<std::string_view, 4> kOpponent = {kLPlusMMinus, kLMinusMPlus, kSPlus,
                                                              kSMinus};
inline constexpr std::array<std::string_view, 6> kHue = {"red",  "yellow", "green",
                                                         "cyan", "blue",   "magenta"};
} // namespace plane_names

/// Cone weights and per-cone Gaussian widths (pixels) of one LGN cell type.
struct OpponentWeights {
  std::string name;
  double weight_l{0}, weight_m{0}, weight_s{0};
  double sigma_l{1}, sigma_m{1}, sigma_s{1};
  /// Multiplies the cone sum before rectification.
  double gain{1};

  void validate() const;
};

/// Largest |a_L L + a_M M + a_S S| over in-gamut sRGB. A linear form on the
/// RGB cube peaks at a vertex, so only the eight cube corners are visited.
double opponent_gamut_peak(const OpponentWeights& w);

/// Weights of one V4 type over the V2 planes in kOpponent order.
struct HueSelectiveWeights {
  std::string name;
  double hue{0};  // nominal preferred hue, degrees
  Eigen::Vector4d weights{Eigen::Vector4d::Zero()};

  void validate() const;
};

struct ConeImage {
  Plane l, m, s;
};

struct NamedPlane {
  std::string name;
  Plane plane;
};

struct LayerActivations {
  std::string layer;
  std::vector<NamedPlane> planes;

  /// Throws ArgumentError when no plane carries `name`.
  const Plane& at(std::string_view name) const;
  const Plane* find(std::string_view name) const;
  std::size_t size() const { return planes.size(); }
};

/// Everything needed to run the hierarchy.
struct ModelConfig {
  Rectifier lgn_rectifier{1, 0, -1, 1};
  Rectifier v1_rectifier{1, 0, 0, 1};
  Rectifier v2_rectifier{1, 0, 0, 1};
  Rectifier v4_rectifier{1, -0.3, 0, 1};
  ReceptiveFieldPlan plan;
  std::array<OpponentWeights, 4> lgn;
  std::array<HueSelectiveWeights, 6> v4;

  /// Table values, per-cone sigmas equal to the LGN layer sigma, and gains
  /// that scale each opponent type onto [-1, 1] over the sRGB gamut.
  static ModelConfig defaults();
  void validate() const;
};

/// Cone weights from the LGN table: L+M- (1,-1,0), L-M+ (-1,1,0),
/// S+(L+M)- (-0.5,-0.5,1), S-(L+M)+ (0.5,0.5,-1).
std::array<OpponentWeights, 4> default_lgn_weights(double sigma);

/// Relative V2 -> V4 weights for red, yellow, green, cyan, blue and magenta.
std::array<HueSelectiveWeights, 6> default_v4_weights();

ConeImage rgb_to_cones(const RgbImage& rgb);

/// R = rect(sum_c a_c (G_{sigma_c} * cone_c)) per opponent type.
LayerActivations lgn_layer(const ConeImage& cones, std::span<const OpponentWeights> types,
                           int kernel_size, const Rectifier& rect);

/// Convolves every plane of `input` with one Gaussian and rectifies it.
LayerActivations gaussian_layer(const LayerActivations& input, const LayerKernel& kernel,
                                const Rectifier& rect, std::string layer_name);

/// R = rect(sum_t a_t (G * V2_t)) per hue-selective type.
LayerActivations v4_layer(const LayerActivations& v2, std::span<const HueSelectiveWeights> types,
                          const LayerKernel& kernel, const Rectifier& rect);

/// Shortest arc between two hue angles, in [0, 180].
double hue_distance(double a, double b);

/// Normal-density weights on hue distance from `target` to each V2 peak,
/// normalised to sum to one. Evaluated relative to the nearest peak so the
/// sigma -> 0 limit stays finite.
HueSelectiveWeights derive_v4_weights(double target, std::span<const double, 4> v2_peaks,
                                      double sigma, std::string name = {});

struct PipelineResult {
  ConeImage cones;
  LayerActivations lgn, v1, v2, v4;

  std::array<const LayerActivations*, 4> layers() const { return {&lgn, &v1, &v2, &v4}; }
  const LayerActivations& layer(std::string_view name) const;
};

/// resize -> LMS -> LGN -> V1 -> V2 -> V4.
PipelineResult run_pipeline(const RgbImage& image, const ModelConfig& config);

} // namespace huemodel

#endif
