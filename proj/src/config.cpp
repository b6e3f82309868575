#include "huemodel/config.hpp"

#include "huemodel/error.hpp"

#include <fmt/format.h>

#include <fstream>

namespace huemodel {
namespace {

using nlohmann::json;

void read_rectifier(const json& j, Rectifier& r) {
  r.slope = j.value("slope", r.slope);
  r.base = j.value("base", r.base);
  r.lower = j.value("lower", r.lower);
  r.saturation = j.value("saturation", r.saturation);
}

json rectifier_json(const Rectifier& r) {
  return {{"slope", r.slope}, {"base", r.base}, {"lower", r.lower}, {"saturation", r.saturation}};
}

void read_kernel(const json& j, LayerKernel& k) {
  k.size = j.value("size", k.size);
  k.sigma = j.value("sigma", k.size / 6.0);
}

} // namespace

ModelConfig model_config_from_json(const json& j) {
  ModelConfig c = ModelConfig::defaults();
  if (!j.is_object()) throw InputError("model config must be a JSON object");

  if (auto it = j.find("rectifiers"); it != j.end()) {
    const std::array<std::pair<const char*, Rectifier*>, 4> layers = {
        {{"LGN", &c.lgn_rectifier}, {"V1", &c.v1_rectifier}, {"V2", &c.v2_rectifier}, {"V4", &c.v4_rectifier}}};
    for (auto [name, r] : layers)
      if (it->contains(name)) read_rectifier(it->at(name), *r);
  }

  if (auto it = j.find("kernels"); it != j.end()) {
    const std::array<std::pair<const char*, LayerKernel*>, 4> layers = {
        {{"LGN", &c.plan.lgn}, {"V1", &c.plan.v1}, {"V2", &c.plan.v2}, {"V4", &c.plan.v4}}};
    for (auto [name, k] : layers)
      if (it->contains(name)) read_kernel(it->at(name), *k);
  }

  c.lgn = default_lgn_weights(c.plan.lgn.sigma);
  if (auto it = j.find("lgn_weights"); it != j.end()) {
    for (auto& t : c.lgn) {
      if (!it->contains(t.name)) continue;
      const json& e = it->at(t.name);
      t.weight_l = e.value("L", t.weight_l);
      t.weight_m = e.value("M", t.weight_m);
      t.weight_s = e.value("S", t.weight_s);
      t.sigma_l = e.value("sigma_L", t.sigma_l);
      t.sigma_m = e.value("sigma_M", t.sigma_m);
      t.sigma_s = e.value("sigma_S", t.sigma_s);
    }
  }
  for (auto& t : c.lgn) {
    t.gain = 1.0 / opponent_gamut_peak(t);
    if (auto it = j.find("lgn_weights"); it != j.end() && it->contains(t.name))
      t.gain = it->at(t.name).value("gain", t.gain);
  }

  if (auto it = j.find("v4_weights"); it != j.end()) {
    for (auto& t : c.v4) {
      if (!it->contains(t.name)) continue;
      const json& e = it->at(t.name);
      t.hue = e.value("hue", t.hue);
      if (e.contains("weights")) {
        const auto w = e.at("weights").get<std::vector<double>>();
        if (w.size() != 4) throw InputError(fmt::format("v4_weights.{} needs 4 weights", t.name));
        t.weights = Eigen::Vector4d(w[0], w[1], w[2], w[3]);
      }
    }
  }
  try {
    c.validate();
  } catch (const ArgumentError& e) {
    throw InputError(fmt::format("invalid model config: {}", e.what()));
  }
  return c;
}

json to_json(const ModelConfig& c) {
  json j;
  j["rectifiers"] = {{"LGN", rectifier_json(c.lgn_rectifier)},
                     {"V1", rectifier_json(c.v1_rectifier)},
                     {"V2", rectifier_json(c.v2_rectifier)},
                     {"V4", rectifier_json(c.v4_rectifier)}};
  auto kernel = [](const LayerKernel& k) { return json{{"size", k.size}, {"sigma", k.sigma}}; };
  j["kernels"] = {{"LGN", kernel(c.plan.lgn)}, {"V1", kernel(c.plan.v1)},
                  {"V2", kernel(c.plan.v2)},   {"V4", kernel(c.plan.v4)}};
  for (const auto& t : c.lgn)
    j["lgn_weights"][t.name] = {{"L", t.weight_l},       {"M", t.weight_m},       {"S", t.weight_s},
                                {"sigma_L", t.sigma_l}, {"sigma_M", t.sigma_m}, {"sigma_S", t.sigma_s},
                                {"gain", t.gain}};
  for (const auto& t : c.v4)
    j["v4_weights"][t.name] = {{"hue", t.hue},
                               {"weights", {t.weights(0), t.weights(1), t.weights(2), t.weights(3)}}};
  return j;
}

ModelConfig load_model_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read config '{}'", path.string()));
  try {
    return model_config_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed config '{}': {}", path.string(), e.what()));
  }
}

} // namespace huemodel
