#include "acf_cli/commands.hpp"

#include "acf/error.hpp"
#include "acf/io.hpp"
#include "acf/losses.hpp"
#include "acf_cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace acf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string axis_method;
  std::string out_dir = ".";
  std::vector<std::string> inputs;
  std::vector<std::string> truth;
};

RunConfig load_config(const Options& o) {
  RunConfig c;
  if (!o.config_path.empty()) {
    if (!fs::exists(o.config_path)) throw MissingInput("config file not found: " + o.config_path);
    c = config_from_json(io::read_json(o.config_path));
  }
  if (o.seed) c.seed = *o.seed;
  if (!o.axis_method.empty()) c.estimator.axis_method = axis_method_from_string(o.axis_method);
  if (o.jobs < 1) throw Error(ErrorCode::InvalidSpec, "--jobs must be at least 1");
  return c;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::string indexed(const std::string& prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu", i);
  return prefix + buf + ".json";
}

// Expands directories to their `prefix*.json` entries in name order.
std::vector<fs::path> collect_inputs(const std::vector<std::string>& args, const std::string& prefix) {
  std::vector<fs::path> files;
  for (const auto& a : args) {
    const fs::path p(a);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind(prefix, 0) == 0 && entry.path().extension() == ".json") {
          found.push_back(entry.path());
        }
      }
      if (found.empty()) throw MissingInput("no " + prefix + "*.json files in " + a);
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw MissingInput("input not found: " + a);
    }
  }
  if (files.empty()) throw MissingInput("no input files given");
  return files;
}

// pred_0003.json -> est_0003.json; other names get the prefix prepended.
std::string output_name(const fs::path& input, const std::string& from, const std::string& to) {
  std::string name = input.filename().string();
  if (name.rfind(from, 0) == 0) return to + name.substr(from.size());
  return to + name;
}

// Runs fn(0..n-1) on up to `jobs` threads. The first failure by index is
// rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

json failures_json(const std::vector<StageFailure>& failures) {
  json a = json::array();
  for (const auto& f : failures) {
    a.push_back({{"index", f.index}, {"stage", f.stage}, {"error", std::string(to_string(f.code))},
                 {"message", f.message}});
  }
  return a;
}

json header(const char* kind) { return {{"format_version", kFormatVersion}, {"kind", kind}}; }

void ensure_dir(const fs::path& dir) { fs::create_directories(dir); }

int cmd_synth(const Options& o, std::ostream& out) {
  const RunConfig c = load_config(o);
  const fs::path dir(o.out_dir);
  ensure_dir(dir);
  parallel_for(static_cast<std::size_t>(c.n_scenes), o.jobs, [&](std::size_t i) {
    const std::string id = indexed("scene_", i).substr(0, 10);
    const SceneSpec spec = random_scene_spec(derive_seed(c.seed, i, 0), c.scene, id);
    const Scene scene = generate_scene(spec);
    const PredictionBundle bundle =
        emulate_predictions(scene, c.noise, derive_seed(c.seed, i, 1), c.emulation);
    io::write_json_atomic(dir / indexed("scene_", i), io::to_json(scene));
    io::write_json_atomic(dir / indexed("pred_", i), io::to_json(bundle));
  });
  json manifest = header("synth_manifest");
  manifest["config"] = to_json(c);
  manifest["scenes"] = json::array();
  for (int i = 0; i < c.n_scenes; ++i) {
    manifest["scenes"].push_back({{"scene", indexed("scene_", i)}, {"predictions", indexed("pred_", i)}});
  }
  io::write_json_atomic(dir / "synth_manifest.json", manifest);
  out << "wrote " << c.n_scenes << " scenes to " << dir.string() << "\n";
  return kOk;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  RunConfig c = load_config(o);
  if (o.seed) c.estimator.ransac.rng_seed = *o.seed;
  const auto files = collect_inputs(o.inputs, "pred_");
  const fs::path dir(o.out_dir);
  ensure_dir(dir);
  std::vector<json> rows(files.size());
  parallel_for(files.size(), o.jobs, [&](std::size_t i) {
    const PredictionBundle bundle = io::bundle_from_json(io::read_json(files[i]));
    const SceneEstimates est = estimate_scene(bundle, c.estimator);
    const std::string name = output_name(files[i], "pred_", "est_");
    io::write_json_atomic(dir / name, io::to_json(est));
    rows[i] = {{"scene_id", est.scene_id}, {"output", name}, {"rois", bundle.rois.size()},
               {"parts", est.parts.size()}, {"failures", failures_json(est.failures)}};
  });
  std::size_t failures = 0;
  for (const auto& r : rows) failures += r["failures"].size();
  json report = header("estimate_report");
  report["axis_method"] = std::string(to_string(c.estimator.axis_method));
  report["scenes"] = rows;
  report["failure_count"] = failures;
  io::write_json_atomic(dir / "estimate_report.json", report);
  out << "estimated " << files.size() << " scenes, " << failures << " failures\n";
  return kOk;
}

int cmd_associate(const Options& o, std::ostream& out) {
  const RunConfig c = load_config(o);
  const auto files = collect_inputs(o.inputs, "est_");
  const fs::path dir(o.out_dir);
  ensure_dir(dir);
  std::vector<json> rows(files.size());
  parallel_for(files.size(), o.jobs, [&](std::size_t i) {
    const SceneEstimates est = io::estimates_from_json(io::read_json(files[i]));
    const SceneAssociation assoc = associate_scene(est, c.min_pair_score);
    const std::string name = output_name(files[i], "est_", "assoc_");
    io::write_json_atomic(dir / name, io::to_json(assoc));
    rows[i] = {{"scene_id", est.scene_id}, {"output", name}, {"objects", assoc.objects.size()}};
  });
  json report = header("associate_report");
  report["scenes"] = rows;
  io::write_json_atomic(dir / "associate_report.json", report);
  out << "associated " << files.size() << " scenes\n";
  return kOk;
}

int cmd_manip(const Options& o, std::ostream& out) {
  const RunConfig c = load_config(o);
  const auto files = collect_inputs(o.inputs, "assoc_");
  const fs::path dir(o.out_dir);
  ensure_dir(dir);
  std::vector<json> rows(files.size());
  parallel_for(files.size(), o.jobs, [&](std::size_t i) {
    const SceneAssociation assoc = io::association_from_json(io::read_json(files[i]));
    const ManipulationPlan plan = plan_manipulation(assoc, c.manipulation);
    const std::string name = output_name(files[i], "assoc_", "manip_");
    io::write_json_atomic(dir / name, io::to_json(plan));
    rows[i] = {{"scene_id", plan.scene_id},
               {"output", name},
               {"grasps", plan.grasps.size()},
               {"pour", plan.pour.has_value()},
               {"stir", plan.stir.has_value()},
               {"failures", failures_json(plan.failures)}};
  });
  std::size_t failures = 0;
  for (const auto& r : rows) failures += r["failures"].size();
  json report = header("manip_report");
  report["scenes"] = rows;
  report["failure_count"] = failures;
  io::write_json_atomic(dir / "manip_report.json", report);
  out << "planned " << files.size() << " scenes, " << failures << " failures\n";
  return kOk;
}

// Ground truth comes from prediction bundles (one entry per emitted ROI) or
// from scene files (every part).
void append_truth(const json& j, std::vector<GroundTruthPart>& truth) {
  const std::string kind = j.value("kind", "");
  if (kind == "predictions") {
    const PredictionBundle b = io::bundle_from_json(j);
    for (const auto& r : b.rois) truth.push_back({b.scene_id, r.part_class, r.truth.acf});
  } else if (kind == "scene") {
    const Scene s = io::scene_from_json(j);
    for (const auto& p : s.parts) truth.push_back({s.spec.scene_id, p.part_class, p.acf});
  } else {
    throw Error(ErrorCode::SchemaViolation, "truth file must be a scene or predictions document");
  }
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const RunConfig c = load_config(o);
  const auto est_files = collect_inputs(o.inputs, "est_");
  if (o.truth.empty()) throw MissingInput("evaluate needs --truth");
  const auto truth_files = collect_inputs(o.truth, "pred_");
  const fs::path dir(o.out_dir);
  ensure_dir(dir);

  std::vector<ScoredPart> predictions;
  std::size_t failures = 0;
  for (const auto& f : est_files) {
    const SceneEstimates est = io::estimates_from_json(io::read_json(f));
    failures += est.failures.size();
    for (const auto& p : est.parts) predictions.push_back({est.scene_id, p.part_class, p.acf, p.score});
  }
  std::vector<GroundTruthPart> truth;
  for (const auto& f : truth_files) append_truth(io::read_json(f), truth);

  const EvalReport report = match_and_score(predictions, truth, c.evaluation.thresholds);
  std::vector<CurveSample> curve;
  for (double cm : c.evaluation.curve_translations_cm) {
    auto part = map_curve(predictions, truth, c.evaluation.curve_angles_deg, cm / 100.0);
    curve.insert(curve.end(), part.begin(), part.end());
  }
  json j = io::to_json(report);
  j["scenes"] = est_files.size();
  j["predictions"] = predictions.size();
  j["ground_truth"] = truth.size();
  j["estimator_failures"] = failures;
  io::write_json_atomic(dir / "eval_report.json", j);
  io::write_text_atomic(dir / "eval_curve.csv", curve_csv(curve));
  out << "mAP at " << report.spec.max_angle_deg << " deg | " << report.spec.max_translation_m * 100.0
      << " cm: " << report.mean_ap << "\n";
  for (const auto& cls : report.classes) {
    out << "  " << std::left << std::setw(10) << to_string(cls.part_class) << " AP " << cls.ap
        << " (" << cls.true_positives << "/" << cls.num_ground_truth << ")\n";
  }
  return kOk;
}

struct LossRow {
  std::string name;
  double value = 0.0;
  bool zero_at_truth = false;
  double gradient_error = 0.0;
};

template <typename Loss, typename Grad>
double gradient_residual(std::vector<double> x, Loss&& loss, Grad&& grad, double h,
                         const LossCheckConfig& cfg, std::uint64_t stream) {
  std::mt19937_64 rng(derive_seed(cfg.probe_seed, stream, 2));
  std::exponential_distribution<double> extra(1.0);
  std::bernoulli_distribution sign(0.5);
  for (double& v : x) v += (sign(rng) ? 1.0 : -1.0) * cfg.probe_sigma * (1.0 + extra(rng));
  const auto numeric = numeric_gradient([&](std::span<const double> v) { return loss(v); }, x, h);
  return gradient_relative_error(grad(x), numeric);
}

std::vector<LossRow> check_roi(const RoiPrediction& roi, const LossCheckConfig& cfg,
                               std::uint64_t stream) {
  const RoiTargets targets = exact_targets(roi);
  AxisGroundTruth gt;
  gt.n_star = roi.truth.acf.axis();
  gt.endpoint_offsets_star = targets.endpoint_offsets;
  gt.keypoint_offsets_star = targets.keypoint_offsets;
  const MaskWeights& mask = roi.mask;
  const Vec3 n = gt.n_star;
  const double h = cfg.h;
  std::vector<LossRow> rows;

  rows.push_back({"keypoint", loss_keypoint(roi.keypoint_offsets, targets.keypoint_offsets, mask), true,
                  gradient_residual(
                      flatten(roi.keypoint_offsets),
                      [&](std::span<const double> x) { return loss_keypoint(unflatten_offsets(x), targets.keypoint_offsets, mask); },
                      [&](std::span<const double> x) { return flatten(loss_keypoint_gradient(unflatten_offsets(x), targets.keypoint_offsets, mask)); },
                      h, cfg, stream)});
  rows.push_back({"endpoint", loss_endpoint(roi.endpoint_offsets, targets.endpoint_offsets, mask), true,
                  gradient_residual(
                      flatten(roi.endpoint_offsets),
                      [&](std::span<const double> x) { return loss_endpoint(unflatten_endpoint_offsets(x), targets.endpoint_offsets, mask); },
                      [&](std::span<const double> x) { return flatten(loss_endpoint_gradient(unflatten_endpoint_offsets(x), targets.endpoint_offsets, mask)); },
                      h, cfg, stream)});
  rows.push_back({"axis", loss_axis(roi.endpoint_offsets, gt, mask), true,
                  gradient_residual(
                      flatten(roi.endpoint_offsets),
                      [&](std::span<const double> x) { return loss_axis(unflatten_endpoint_offsets(x), gt, mask); },
                      [&](std::span<const double> x) { return flatten(loss_axis_gradient(unflatten_endpoint_offsets(x), gt, mask)); },
                      h, cfg, stream)});
  rows.push_back({"direction", loss_direction(roi.endpoint_offsets, gt, mask), false,
                  gradient_residual(
                      flatten(roi.endpoint_offsets),
                      [&](std::span<const double> x) { return loss_direction(unflatten_endpoint_offsets(x), gt, mask); },
                      [&](std::span<const double> x) { return flatten(loss_direction_gradient(unflatten_endpoint_offsets(x), gt, mask)); },
                      h, cfg, stream)});
  const Vec2 target = roi.paf_target_star;
  rows.push_back({"paf", loss_paf({roi.paf, target}, mask), true,
                  gradient_residual(
                      flatten(std::span<const Vec2>(roi.paf)),
                      [&](std::span<const double> x) { return loss_paf({unflatten_vec2(x), target}, mask); },
                      [&](std::span<const double> x) { return flatten(std::span<const Vec2>(loss_paf_gradient({unflatten_vec2(x), target}, mask))); },
                      h, cfg, stream)});
  rows.push_back({"vector", loss_vector(roi.axis_vectors, n, mask), true,
                  gradient_residual(
                      flatten(std::span<const Vec3>(roi.axis_vectors)),
                      [&](std::span<const double> x) { return loss_vector(unflatten_vec3(x), n, mask); },
                      [&](std::span<const double> x) { return flatten(std::span<const Vec3>(loss_vector_gradient(unflatten_vec3(x), n, mask))); },
                      h, cfg, stream)});
  rows.push_back({"inner", loss_inner(roi.scatter_offsets, n, mask, cfg.inner_mode), false,
                  gradient_residual(
                      flatten(roi.scatter_offsets),
                      [&](std::span<const double> x) { return loss_inner(unflatten_offsets(x), n, mask, cfg.inner_mode); },
                      [&](std::span<const double> x) { return flatten(loss_inner_gradient(unflatten_offsets(x), n, mask, cfg.inner_mode)); },
                      h, cfg, stream)});
  rows.push_back({"label", loss_label(roi.labels, mask), false,
                  gradient_residual(
                      roi.labels.logits,
                      [&](std::span<const double> x) {
                        LabelPrediction p{std::vector<double>(x.begin(), x.end()), roi.labels.labels_star};
                        return loss_label(p, mask);
                      },
                      [&](std::span<const double> x) {
                        LabelPrediction p{std::vector<double>(x.begin(), x.end()), roi.labels.labels_star};
                        return loss_label_gradient(p, mask);
                      },
                      h, cfg, stream)});
  return rows;
}

int cmd_losscheck(const Options& o, std::ostream& out) {
  const RunConfig c = load_config(o);
  const auto files = collect_inputs(o.inputs, "pred_");
  const fs::path dir(o.out_dir);
  ensure_dir(dir);
  std::vector<json> scenes(files.size());
  std::vector<std::map<std::string, std::pair<double, double>>> worst(files.size());
  parallel_for(files.size(), o.jobs, [&](std::size_t i) {
    const PredictionBundle b = io::bundle_from_json(io::read_json(files[i]));
    json rois = json::array();
    for (std::size_t r = 0; r < b.rois.size(); ++r) {
      json losses = json::object();
      for (const LossRow& row : check_roi(b.rois[r], c.losscheck, (static_cast<std::uint64_t>(i) << 20) + r)) {
        losses[row.name] = {{"value", row.value}, {"zero_at_truth", row.zero_at_truth},
                            {"gradient_relative_error", row.gradient_error}};
        auto& w = worst[i][row.name];
        w.first = std::max(w.first, row.zero_at_truth ? std::abs(row.value) : 0.0);
        w.second = std::max(w.second, row.gradient_error);
      }
      rois.push_back({{"roi", r}, {"part_class", std::string(to_string(b.rois[r].part_class))},
                      {"losses", losses}});
    }
    scenes[i] = {{"scene_id", b.scene_id}, {"rois", rois}};
  });

  std::map<std::string, std::pair<double, double>> total;
  for (const auto& w : worst) {
    for (const auto& [name, v] : w) {
      auto& t = total[name];
      t.first = std::max(t.first, v.first);
      t.second = std::max(t.second, v.second);
    }
  }
  json summary = json::object();
  out << std::left << std::setw(12) << "loss" << std::setw(20) << "max|zero-at-truth|"
      << "max grad rel err\n";
  for (const auto& [name, v] : total) {
    summary[name] = {{"max_abs_zero_at_truth", v.first}, {"max_gradient_relative_error", v.second}};
    out << std::left << std::setw(12) << name << std::setw(20) << v.first << v.second << "\n";
  }
  json report = header("losscheck");
  report["h"] = c.losscheck.h;
  report["summary"] = summary;
  report["scenes"] = scenes;
  io::write_json_atomic(dir / "losscheck.json", report);
  return kOk;
}

bool is_config_error(ErrorCode code) {
  return code == ErrorCode::SchemaViolation || code == ErrorCode::InvalidSpec ||
         code == ErrorCode::InvalidArgument;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Affordance coordinate frame pipeline", "acf"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub, bool with_inputs) {
    sub->add_option("--config", o.config_path, "Run configuration JSON");
    sub->add_option("--jobs", o.jobs, "Scene-level worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out_dir, "Output directory");
    if (with_inputs) sub->add_option("--in,inputs", o.inputs, "Input files or directories")->required();
  };
  auto* synth = app.add_subcommand("synth", "Generate scenes and emulated predictions");
  common(synth, false);
  synth->add_option("--seed", seed, "Base RNG seed");
  auto* estimate = app.add_subcommand("estimate", "Estimate ACFs from predictions");
  common(estimate, true);
  estimate->add_option("--seed", seed, "RANSAC seed");
  estimate->add_option("--axis-method", o.axis_method, "Axis estimator")
      ->check(CLI::IsMember({"endpoints", "vector", "scatterline"}));
  auto* associate = app.add_subcommand("associate", "Group estimated parts into objects");
  common(associate, true);
  auto* manip = app.add_subcommand("manip", "Compose grasps and trajectories");
  common(manip, true);
  auto* evaluate = app.add_subcommand("evaluate", "Score estimates against ground truth");
  common(evaluate, true);
  evaluate->add_option("--truth", o.truth, "Prediction or scene files with ground truth")->required();
  auto* losscheck = app.add_subcommand("losscheck", "Loss values and gradient checks");
  common(losscheck, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }
  for (auto* sub : {synth, estimate}) {
    if (sub->parsed() && sub->count("--seed")) o.seed = seed;
  }

  try {
    if (synth->parsed()) return cmd_synth(o, out);
    if (estimate->parsed()) return cmd_estimate(o, out);
    if (associate->parsed()) return cmd_associate(o, out);
    if (manip->parsed()) return cmd_manip(o, out);
    if (evaluate->parsed()) return cmd_evaluate(o, out);
    if (losscheck->parsed()) return cmd_losscheck(o, out);
  } catch (const MissingInput& e) {
    err << "error: " << e.what() << "\n";
    return kMissingInput;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return is_config_error(e.code()) ? kInvalidConfig : kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kInvalidConfig;
}

}  // namespace acf::cli
