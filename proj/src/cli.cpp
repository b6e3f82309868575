#include "huemodel/cli.hpp"

#include "huemodel/config.hpp"
#include "huemodel/error.hpp"
#include "huemodel/png_io.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <fstream>
#include <iostream>
#include <memory>

namespace huemodel {

using nlohmann::json;

void apply_config_file(RunConfig& rc, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read config '{}'", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed config '{}': {}", path.string(), e.what()));
  }
  rc.model = model_config_from_json(j);
  if (auto it = j.find("experiment"); it != j.end()) {
    try {
      rc.options.window = it->value("window", rc.options.window);
      rc.options.annulus_inner = it->value("annulus_inner", rc.options.annulus_inner);
      rc.options.annulus_outer = it->value("annulus_outer", rc.options.annulus_outer);
      rc.options.stepwise.p_enter = it->value("p_enter", rc.options.stepwise.p_enter);
      rc.options.stepwise.p_remove = it->value("p_remove", rc.options.stepwise.p_remove);
      rc.hue = it->value("hue", rc.hue);
      rc.samples = it->value("samples", rc.samples);
      rc.seed = it->value("seed", rc.seed);
    } catch (const json::exception& e) {
      throw InputError(fmt::format("malformed experiment section in '{}': {}", path.string(), e.what()));
    }
  }
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read '{}' for hashing", path.string()));
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

void write_run_manifest(const std::filesystem::path& dir, const std::string& command,
                        const std::vector<std::filesystem::path>& files, const json& parameters) {
  json list = json::array();
  for (const auto& f : files) {
    const auto full = dir / f;
    list.push_back({{"path", f.generic_string()},
                    {"bytes", std::filesystem::file_size(full)},
                    {"sha256", sha256_file(full)}});
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw InputError(fmt::format("cannot write '{}'", (dir / "manifest.json").string()));
  out << json{{"command", command}, {"parameters", parameters}, {"files", list}}.dump(2) << '\n';
}

json to_json(const StepwiseModel& m) {
  json selected = json::array();
  for (std::size_t i = 0; i < m.selected.size(); ++i) {
    const int j = m.selected[i];
    selected.push_back({{"index", j},
                        {"name", j < static_cast<int>(m.names.size()) ? m.names[j] : fmt::format("x{}", j)},
                        {"coefficient", m.coefficients(static_cast<Eigen::Index>(i))},
                        {"p_value", m.p_values[i]}});
  }
  json trace = json::array();
  for (const auto& s : m.trace)
    trace.push_back({{"action", s.action == StepwiseStep::Action::Add ? "add" : "remove"},
                     {"predictor", s.predictor},
                     {"p_value", s.p_value}});
  return {{"intercept", m.intercept}, {"rms", m.rms}, {"selected", selected}, {"trace", trace},
          {"predictor_count", m.predictor_count}};
}

json to_json(const ReconstructionResult& r) {
  return {{"hue_deg", r.hue_deg},
          {"target_rad", r.target_rad},
          {"seed", r.seed},
          {"generator", "mt19937_64"},
          {"samples", r.dataset.rows()},
          {"model", to_json(r.model)},
          {"canonical_responses", r.canonical_responses},
          {"predicted_rad", r.predicted_rad},
          {"error_deg", r.error_deg}};
}

json to_json(const CorrelationReport& r) {
  json peaks = json::array();
  for (const auto& p : r.peaks)
    peaks.push_back({{"type", p.name}, {"hue", p.hue}, {"row", p.row}, {"col", p.col}, {"value", p.value}});
  return {{"r", r.r}, {"p_value", r.p_value}, {"pairs", r.pairs.size()}, {"peaks", peaks}};
}

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << j.dump(2) << '\n';
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

json experiment_json(const RunConfig& rc) {
  return {{"window", rc.options.window},
          {"annulus_inner", rc.options.annulus_inner},
          {"annulus_outer", rc.options.annulus_outer},
          {"p_enter", rc.options.stepwise.p_enter},
          {"p_remove", rc.options.stepwise.p_remove}};
}

} // namespace

int cmd_run(const RunConfig& rc, std::ostream& err) {
  return guarded(err, [&] {
    if (rc.input.empty()) throw InputError("run needs --input");
    const RgbImage image = read_png_rgb(rc.input);
    ensure_dir(rc.out);
    const PipelineResult r = run_pipeline(image, rc.model);
    const auto layers = r.layers();
    const auto entries = emit_layer_maps(layers, rc.out);
    std::vector<std::filesystem::path> files;
    for (const auto& e : entries) {
      files.emplace_back(e.file);
      files.emplace_back(e.file + ".scale.txt");
    }
    files.emplace_back("layer_maps.json");
    write_run_manifest(rc.out, "run", files,
                       {{"input", rc.input.filename().string()},
                        {"input_sha256", sha256_file(rc.input)},
                        {"model", to_json(rc.model)}});
    if (rc.verbosity > 0) err << fmt::format("wrote {} layer maps to {}\n", entries.size(), rc.out.string());
  });
}

int cmd_tuning(const RunConfig& rc, std::ostream& err) {
  return guarded(err, [&] {
    ensure_dir(rc.out);
    const TuningResult t = tuning_sweep(rc.model, rc.options);
    std::vector<std::filesystem::path> files;
    for (const auto& l : t.layers) {
      if (!rc.layer.empty() && rc.layer != l.layer) continue;
      const std::string name = fmt::format("tuning_{}.csv", l.layer);
      write_tuning_csv(t, l.layer, rc.out / name);
      files.emplace_back(name);
    }
    if (files.empty()) throw InputError(fmt::format("unknown layer '{}'", rc.layer));
    write_run_manifest(rc.out, "tuning", files,
                       {{"layer", rc.layer.empty() ? "all" : rc.layer},
                        {"mb_white", {t.axes.white(0), t.axes.white(1)}},
                        {"mb_axis_scale", {t.axes.scale(0), t.axes.scale(1)}},
                        {"experiment", experiment_json(rc)},
                        {"model", to_json(rc.model)}});
    if (rc.verbosity > 0) err << fmt::format("wrote {} tuning tables to {}\n", files.size(), rc.out.string());
  });
}

int cmd_correlate(const RunConfig& rc, std::ostream& err) {
  return guarded(err, [&] {
    ensure_dir(rc.out);
    const CorrelationReport rep = correlation_experiment(rc.model, rc.options);
    write_correlation_csv(rep, rc.out / "correlation_pairs.csv");
    write_json(rc.out / "correlation_summary.json", to_json(rep));
    write_run_manifest(rc.out, "correlate", {"correlation_pairs.csv", "correlation_summary.json"},
                       {{"experiment", experiment_json(rc)}, {"model", to_json(rc.model)}});
    if (rc.verbosity > 0) err << fmt::format("r = {:.4f}, p = {:.3g}\n", rep.r, rep.p_value);
  });
}

int cmd_reconstruct(const RunConfig& rc, std::ostream& err) {
  return guarded(err, [&] {
    ensure_dir(rc.out);
    const ReconstructionResult r = reconstruction_experiment(rc.model, rc.hue, rc.samples, rc.seed, rc.options);
    write_dataset_csv(r.dataset, rc.out / "reconstruction_dataset.csv");
    write_json(rc.out / "reconstruction_report.json", to_json(r));
    write_run_manifest(rc.out, "reconstruct", {"reconstruction_dataset.csv", "reconstruction_report.json"},
                       {{"hue", rc.hue},
                        {"samples", rc.samples},
                        {"seed", rc.seed},
                        {"experiment", experiment_json(rc)},
                        {"model", to_json(rc.model)}});
    if (rc.verbosity > 0)
      err << fmt::format("selected {} of {} types, error {:.3g} deg\n", r.model.selected.size(),
                         r.model.predictor_count, r.error_deg);
  });
}

int dispatch(const RunConfig& rc, std::ostream& err) {
  if (rc.command == "run") return cmd_run(rc, err);
  if (rc.command == "tuning") return cmd_tuning(rc, err);
  if (rc.command == "correlate") return cmd_correlate(rc, err);
  if (rc.command == "reconstruct") return cmd_reconstruct(rc, err);
  err << "error: unknown command '" << rc.command << "'\n";
  return 1;
}

} // namespace huemodel
