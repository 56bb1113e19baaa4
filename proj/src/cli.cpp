#include "surfvox/cli.hpp"

#include "surfvox/config.hpp"
#include "surfvox/error.hpp"
#include "surfvox/numeric_text.hpp"
#include "surfvox/pipeline.hpp"
#include "surfvox/scene_io.hpp"
#include "surfvox/synth.hpp"
#include "surfvox/training.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace surfvox {

namespace fs = std::filesystem;

namespace {

struct ReconstructArgs {
  std::string scene;
  std::string config;
  std::string out;
  std::string occ;
  int threads = 0;
};

struct SynthArgs {
  std::string shape = "sphere";
  int views = 8;
  std::string out;
  std::uint64_t seed = 1;
  int image_size = 256;
  double voxel_size = 0.03125;
  std::optional<double> elevation;
};

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string scene;
  double eps = 0.0;
};

struct FitArgs {
  std::string scenes;
  std::string out;
  std::string config;
  int epochs = 0;
  double lr = 0.0;
  std::uint64_t seed = 0;
  double min_iou = 0.25;
};

PipelineConfig config_from(const std::string& path) {
  return path.empty() ? PipelineConfig{} : load_config(path);
}

int run_reconstruct(const ReconstructArgs& a, std::ostream& out) {
  PipelineConfig config = config_from(a.config);
  if (a.threads > 0) config.threads = a.threads;
  const SceneManifest scene = load_manifest(a.scene);
  const Reconstruction rec = reconstruct(scene, config);
  write_file(a.out, rec.ply);
  if (!a.occ.empty()) {
    const double vs = resolve_voxel_size(scene, config);
    save_occgrid(a.occ, make_grid(voxel_extent(scene.bbox, vs), occupied_voxels(rec.surfaces, rec.lattice)));
  }
  out << rec.report.text();
  out << "ply=" << a.out << '\n';
  return 0;
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  SceneSpec spec;
  spec.shape.kind = parse_shape_kind(a.shape);
  spec.shape.texture_seed = a.seed;
  spec.rig.views = a.views;
  spec.rig.image_size = a.image_size;
  spec.voxel_size = a.voxel_size;
  if (a.elevation) spec.rig.elevation_deg = *a.elevation;
  const SyntheticScene scene = generate_scene(spec);
  const fs::path manifest = write_scene(scene, a.out);
  out << "manifest=" << manifest.string() << '\n';
  out << "views=" << scene.views.size() << '\n';
  out << "grid=" << scene.grid_dims[0] << ' ' << scene.grid_dims[1] << ' ' << scene.grid_dims[2] << '\n';
  out << "gt_voxels=" << scene.gt_occ.size() << '\n';
  return 0;
}

int run_eval(const EvalArgs& a, std::ostream& out) {
  fs::path manifest_path = a.scene;
  if (manifest_path.empty()) manifest_path = fs::path(a.gt).parent_path() / "scene.txt";
  if (!fs::is_regular_file(manifest_path)) {
    throw Error(ErrorCode::IoError, "scene geometry not found: " + manifest_path.string() + " (use --scene)");
  }
  const SceneManifest scene = load_manifest(manifest_path);
  const double vs = scene.voxel_size.value_or(kDefaultVoxelSize);
  const auto predicted = load_ply(a.pred);
  const auto grid = load_occgrid(a.gt);
  const auto truth = grid_points(grid, scene.bbox.min, vs);
  const double eps = a.eps > 0.0 ? a.eps : 2.0 * vs;
  const EvalReport r = evaluate(predicted, truth, eps);
  out << "accuracy=" << (r.accuracy_defined ? format_double(r.accuracy) : std::string("undefined")) << '\n';
  if (r.accuracy_defined) out << "accuracy_voxels=" << format_double(r.accuracy / vs) << '\n';
  out << "completeness=" << format_double(r.completeness) << '\n';
  out << "predicted_count=" << r.predicted_count << '\n';
  out << "gt_count=" << r.gt_count << '\n';
  out << "eps=" << format_double(eps) << '\n';
  return 0;
}

std::vector<PairSample> gather_samples(const FitArgs& a, std::ostream& out) {
  const PipelineConfig config = config_from(a.config);
  std::vector<PairSample> all;
  for (const auto& manifest : find_scene_manifests(a.scenes)) {
    const TrainingScene scene = load_training_scene(manifest);
    auto samples = collect_pair_samples(scene, config);
    out << "scene=" << manifest.string() << " pairs=" << samples.size() << '\n';
    all.insert(all.end(), samples.begin(), samples.end());
  }
  if (all.empty()) throw Error(ErrorCode::EmptyInput, "no training pairs found");
  return all;
}

int run_fit_weights(const FitArgs& a, std::ostream& out) {
  const auto pairs = gather_samples(a, out);
  const auto samples = weight_samples(pairs);
  WeightFitOptions options;
  options.seed = a.seed;
  if (a.epochs > 0) options.epochs = a.epochs;
  if (a.lr > 0.0) options.learning_rate = a.lr;
  const WeightFitResult fit = fit_weightnet_detailed(samples, options);
  save_weightnet(a.out, fit.net);
  out << "samples=" << samples.size() << '\n';
  out << "loss_initial=" << format_double(fit.loss_history.front()) << '\n';
  out << "loss_final=" << format_double(weightnet_loss(fit.net, samples)) << '\n';
  out << "model=" << a.out << '\n';
  return 0;
}

int run_fit_gate(const FitArgs& a, std::ostream& out) {
  const auto pairs = gather_samples(a, out);
  const auto samples = gate_samples(pairs, a.min_iou);
  const int epochs = a.epochs > 0 ? a.epochs : 2000;
  const double lr = a.lr > 0.0 ? a.lr : 1.0;
  const GateModel gate = fit_gate(samples, epochs, lr);
  save_gate(a.out, gate);
  std::size_t similar = 0;
  for (const auto& s : samples) similar += s.similar ? 1 : 0;
  out << "samples=" << samples.size() << '\n';
  out << "similar=" << similar << '\n';
  out << "slope=" << format_double(gate.slope) << '\n';
  out << "intercept=" << format_double(gate.intercept) << '\n';
  out << "model=" << a.out << '\n';
  return 0;
}

void add_fit_options(CLI::App* cmd, FitArgs& a) {
  cmd->add_option("--scenes", a.scenes, "Directory of synthetic scenes")->required();
  cmd->add_option("--out", a.out, "Output model file")->required();
  cmd->add_option("--config", a.config, "Pipeline config file");
  cmd->add_option("--epochs", a.epochs, "Training epochs");
  cmd->add_option("--lr", a.lr, "Learning rate");
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"surfvox: volumetric multi-view stereo"};
  app.name("surfvox");
  app.require_subcommand(1);

  ReconstructArgs rec;
  auto* cmd_rec = app.add_subcommand("reconstruct", "Reconstruct a voxel surface from a scene");
  cmd_rec->add_option("--scene", rec.scene, "Scene manifest")->required();
  cmd_rec->add_option("--config", rec.config, "Pipeline config file (defaults if omitted)");
  cmd_rec->add_option("--out", rec.out, "Output PLY")->required();
  cmd_rec->add_option("--threads", rec.threads, "Override the configured thread count");
  cmd_rec->add_option("--occ", rec.occ, "Also write an occupancy grid");

  SynthArgs syn;
  auto* cmd_syn = app.add_subcommand("synth", "Render a synthetic scene with ground truth");
  cmd_syn->add_option("--shape", syn.shape, "sphere or box");
  cmd_syn->add_option("--views", syn.views, "Number of ring cameras");
  cmd_syn->add_option("--out", syn.out, "Output directory")->required();
  cmd_syn->add_option("--seed", syn.seed, "Texture seed");
  cmd_syn->add_option("--image-size", syn.image_size, "Image width and height");
  cmd_syn->add_option("--voxel-size", syn.voxel_size, "Voxel size");
  cmd_syn->add_option("--elevation", syn.elevation, "Ring elevation in degrees");

  EvalArgs ev;
  auto* cmd_eval = app.add_subcommand("eval", "Score a reconstruction against ground truth");
  cmd_eval->add_option("--pred", ev.pred, "Predicted PLY")->required();
  cmd_eval->add_option("--gt", ev.gt, "Ground-truth occupancy grid")->required();
  cmd_eval->add_option("--eps", ev.eps, "Completeness tolerance (default 2 voxels)");
  cmd_eval->add_option("--scene", ev.scene, "Scene manifest (default: scene.txt next to --gt)");

  FitArgs fw;
  auto* cmd_fw = app.add_subcommand("fit-weights", "Fit the view-pair weight network");
  add_fit_options(cmd_fw, fw);
  cmd_fw->add_option("--seed", fw.seed, "Shuffle and init seed");

  FitArgs fg;
  auto* cmd_fg = app.add_subcommand("fit-gate", "Fit the cube rejection gate");
  add_fit_options(cmd_fg, fg);
  cmd_fg->add_option("--min-iou", fg.min_iou, "IoU at which a pair counts as similar");

  std::vector<const char*> argv;
  argv.push_back("surfvox");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*cmd_rec) return run_reconstruct(rec, out);
    if (*cmd_syn) return run_synth(syn, out);
    if (*cmd_eval) return run_eval(ev, out);
    if (*cmd_fw) return run_fit_weights(fw, out);
    if (*cmd_fg) return run_fit_gate(fg, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << app.help();
  return 1;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace surfvox
