// huemodel: run the colour hierarchy on an image or reproduce the experiments.
//
//   huemodel run         --input img.png --out dir [--config model.json]
//   huemodel tuning      --out dir [--layer V4]
//   huemodel correlate   --out dir
//   huemodel reconstruct --out dir --hue 270 [--samples 500] [--seed 1]
//
// Values from --config are loaded first; flags given on the command line win.

#include "huemodel/cli.hpp"
#include "huemodel/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical colour-opponent hue model"};
  app.require_subcommand(1);

  std::filesystem::path input, out{"out"}, config;
  std::optional<double> hue;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::string layer;
  int verbosity = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output directory (created if absent)");
    sub->add_option("--config", config, "Model configuration JSON");
    sub->add_flag("-v,--verbose", verbosity, "Report progress on stderr");
  };
  auto* run = app.add_subcommand("run", "Write all layer maps for an input PNG");
  add_common(run);
  run->add_option("--input", input, "Input PNG (8-bit RGB)")->required();

  auto* tuning = app.add_subcommand("tuning", "60-hue tuning sweep, one CSV per layer");
  add_common(tuning);
  tuning->add_option("--layer", layer, "Only this layer (LGN, V1, V2, V4)");

  auto* correlate = app.add_subcommand("correlate", "Hue distance vs V4 peak displacement");
  add_common(correlate);

  auto* reconstruct = app.add_subcommand("reconstruct", "Stepwise hue reconstruction from V4");
  add_common(reconstruct);
  reconstruct->add_option("--hue", hue, "Ground-truth hue in (0, 360]");
  reconstruct->add_option("--samples", samples, "Number of (saturation, lightness) samples");
  reconstruct->add_option("--seed", seed, "PRNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  huemodel::RunConfig rc;
  rc.command = app.get_subcommands().front()->get_name();
  try {
    if (!config.empty()) huemodel::apply_config_file(rc, config);
  } catch (const huemodel::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  rc.input = input;
  rc.out = out;
  rc.config = config;
  rc.layer = layer;
  rc.verbosity = verbosity;
  if (hue) rc.hue = *hue;
  if (samples) rc.samples = *samples;
  if (seed) rc.seed = *seed;
  return huemodel::dispatch(rc, std::cerr);
}
