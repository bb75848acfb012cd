// Copyright 2026 The fvdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// fvdet command line: projection, anchors, training, detection, evaluation,
// synthetic scenes and benchmarks over KITTI-style directories.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fvdet/eval/report.hpp"
#include "fvdet/fvproj/map_io.hpp"
#include "fvdet/kittio/benchmark.hpp"
#include "fvdet/kittio/dataset.hpp"
#include "fvdet/kittio/detector.hpp"
#include "fvdet/kittio/pipeline.hpp"
#include "fvdet/kittio/velodyne.hpp"
#include "fvdet/nnet/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace fvdet;
using namespace fvdet::kittio;

namespace
{

struct Globals
{
  std::uint64_t seed = 0;
  int threads = 1;
  std::optional<std::string> config;
};

PipelineConfig load_pipeline_config(const Globals & g)
{
  const auto path = resolve_config_path(g.config);
  return path ? load_config(*path) : PipelineConfig{};
}

void require_file(const fs::path & p)
{
  if (!fs::exists(p)) {
    throw std::runtime_error(p.string() + ": no such file or directory");
  }
}

void ensure_dir(const fs::path & p)
{
  if (!p.empty()) fs::create_directories(p);
}

std::string sample_name(int sample)
{
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", sample);
  return buf;
}

void print_progress(const char * stage, int step, int steps, const nnet::LossTrace & trace)
{
  if ((step + 1) % 100 == 0 || step + 1 == steps) {
    std::cerr << stage << " step " << step + 1 << "/" << steps << " loss " << trace.total.back()
              << "\n";
  }
}

// project: velodyne .bin -> map tensor file (+ PPM).
struct ProjectArgs
{
  std::string input;
  std::string output;
  std::string ppm;
  bool base = false;
};

void run_project(const Globals & g, const ProjectArgs & a)
{
  const auto cfg = load_pipeline_config(g);
  require_file(a.input);
  const PointCloud cloud = read_velodyne(a.input);
  fvproj::FrontViewMap map = a.base ? fvproj::build_front_view_map(cloud, cfg.projection, g.threads).map
                                    : network_map(cloud, cfg.projection, g.threads);
  fvproj::write_map_tensor(map, a.output);
  if (!a.ppm.empty()) fvproj::write_ppm(fvproj::render_map(map), a.ppm);
  std::cout << map.height() << "x" << map.width() << " map, " << map.occupied_count()
            << " occupied cells\n";
}

// anchors: labels of a dataset -> anchors file.
struct AnchorArgs
{
  std::string data;
  std::string output;
};

void run_anchors(const Globals & g, const AnchorArgs & a)
{
  const auto cfg = load_pipeline_config(g);
  require_file(a.data);
  const auto frames = load_frames(a.data);
  const auto priors = compute_anchors(frames, cfg, g.seed);
  proposal::write_anchors(priors, a.output);
  std::cout << priors.size() << " anchors written to " << a.output << "\n";
}

std::string meta_json(const Globals & g, const char * kind, int steps)
{
  return nlohmann::json{{"kind", kind}, {"seed", g.seed}, {"steps", steps}}.dump();
}

struct TrainArgs
{
  std::string data;
  std::string anchors;
  std::string model;
  std::string trace;
  std::optional<int> steps;
};

void run_train_pgnet(const Globals & g, const TrainArgs & a)
{
  auto cfg = load_pipeline_config(g);
  if (a.steps) cfg.train_pgnet.steps = *a.steps;
  require_file(a.data);
  const auto frames = load_frames(a.data);
  std::vector<proposal::AnchorPrior> priors;
  if (a.anchors.empty()) {
    priors = compute_anchors(frames, cfg, g.seed);
  } else {
    require_file(a.anchors);
    priors = proposal::read_anchors(a.anchors);
  }
  const int steps = cfg.train_pgnet.steps;
  auto r = train_pgnet(frames, priors, cfg, g.seed, g.threads,
                       [&](int s, const nnet::LossTrace & t) { print_progress("pgnet", s, steps, t); });
  ensure_dir(a.model);
  nnet::save_checkpoint(r.net.params(), model_pgnet_path(a.model), meta_json(g, "pgnet", steps));
  proposal::write_anchors(priors, model_anchors_path(a.model));
  eval::write_text(config_to_json(cfg), model_config_path(a.model));
  if (!a.trace.empty()) r.trace.write_csv(a.trace);
}

void run_train_penet(const Globals & g, const TrainArgs & a)
{
  auto cfg = load_pipeline_config(g);
  if (a.steps) cfg.train_penet.steps = *a.steps;
  require_file(a.data);
  const auto frames = load_frames(a.data);
  const int steps = cfg.train_penet.steps;
  auto r = train_penet(frames, cfg, g.seed, g.threads,
                       [&](int s, const nnet::LossTrace & t) { print_progress("penet", s, steps, t); });
  ensure_dir(a.model);
  nnet::save_checkpoint(r.net.params(), model_penet_path(a.model), meta_json(g, "penet", steps));
  if (!a.trace.empty()) r.trace.write_csv(a.trace);
}

// detect: dataset (or one .bin) + model directory -> KITTI result files.
struct DetectArgs
{
  std::string model;
  std::string data;
  std::string input;
  int sample = 0;
  std::string output;
  std::string bev;
};

void run_detect(const Globals & g, const DetectArgs & a)
{
  const auto cfg = load_pipeline_config(g);
  require_file(model_pgnet_path(a.model));
  require_file(model_penet_path(a.model));
  require_file(model_anchors_path(a.model));
  Detector proto(cfg, load_pgnet(model_pgnet_path(a.model), cfg),
                 load_penet(model_penet_path(a.model), cfg),
                 proposal::read_anchors(model_anchors_path(a.model)));

  std::vector<Frame> frames;
  if (!a.input.empty()) {
    require_file(a.input);
    frames.push_back({a.sample, read_velodyne(a.input), {}});
  } else {
    require_file(a.data);
    for (int s : list_samples(a.data)) {
      Frame f;
      f.sample = s;
      f.cloud = read_velodyne(velodyne_path(a.data, s));
      frames.push_back(std::move(f));
    }
  }
  ensure_dir(a.output);
  if (!a.bev.empty()) ensure_dir(a.bev);

  // Samples are independent; each worker owns a detector copy.
  const std::size_t workers =
    std::clamp<std::size_t>(static_cast<std::size_t>(std::max(g.threads, 1)), 1, frames.size());
  std::vector<std::size_t> counts(frames.size(), 0);
  auto work = [&](std::size_t w) {
    Detector det = proto;
    for (std::size_t i = w; i < frames.size(); i += workers) {
      const auto dets = det.detect(frames[i].cloud, frames[i].sample);
      counts[i] = dets.size();
      const std::string name = sample_name(frames[i].sample);
      write_detections(dets, fs::path(a.output) / (name + ".txt"));
      if (!a.bev.empty()) {
        std::vector<BevBox> boxes;
        for (const auto & d : dets) boxes.push_back({d.box, {255, 64, 64}});
        render_bev(frames[i].cloud, boxes, fs::path(a.bev) / (name + ".ppm"), cfg.bev);
      }
    }
  };
  if (workers <= 1) {
    if (!frames.empty()) work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto & t : pool) t.join();
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::cout << sample_name(frames[i].sample) << ": " << counts[i] << " detections\n";
  }
}

// eval: result directory + ground-truth dataset -> JSON report.
struct EvalArgs
{
  std::string gt;
  std::string det;
  std::string output;
  std::vector<std::string> buckets{"easy", "moderate", "hard"};
};

void run_eval(const Globals & g, const EvalArgs & a)
{
  const auto cfg = load_pipeline_config(g);
  require_file(a.gt);
  require_file(a.det);
  std::vector<eval::Bucket> buckets;
  for (const auto & b : a.buckets) {
    const auto parsed = eval::parse_bucket(b);
    if (!parsed) throw std::runtime_error("unknown bucket '" + b + "'");
    buckets.push_back(*parsed);
  }
  std::vector<eval::Detection> dets;
  std::vector<eval::GroundTruth> gts;
  std::vector<int> samples;
  for (const auto & e : fs::directory_iterator(a.gt / fs::path("label_2"))) {
    if (e.path().extension() == ".txt") samples.push_back(std::stoi(e.path().stem().string()));
  }
  std::sort(samples.begin(), samples.end());
  for (int s : samples) {
    const auto calib_file = calib_path(a.gt, s);
    const Calibration calib =
      fs::exists(calib_file) ? read_calibration(calib_file) : Calibration::identity();
    auto g1 = to_ground_truth(read_labels(label_path(a.gt, s), calib), s);
    gts.insert(gts.end(), g1.begin(), g1.end());
    const fs::path det_file = fs::path(a.det) / (sample_name(s) + ".txt");
    if (fs::exists(det_file)) {
      auto d1 = read_detections(det_file, s, calib);
      dets.insert(dets.end(), d1.begin(), d1.end());
    }
  }
  const auto report = pipeline_report(dets, gts, cfg, buckets);
  const std::string json = eval::report_json(report, cfg.ap_mode);
  if (a.output.empty()) {
    std::cout << json;
  } else {
    eval::write_text(json, a.output);
    std::cout << eval::report_table(report);
  }
}

// synth: SceneSpec (from the config or a spec file) -> KITTI-style dataset.
struct SynthArgs
{
  std::string output;
  std::string spec;
  int count = 8;
  bool bev = false;
};

void run_synth(const Globals & g, const SynthArgs & a)
{
  auto cfg = load_pipeline_config(g);
  if (!a.spec.empty()) {
    require_file(a.spec);
    cfg.synth = scene_spec_from_json(read_text_file(a.spec));
  }
  const auto frames = synth_frames(cfg, a.count, g.seed);
  for (const auto & f : frames) {
    save_frame(a.output, f);
    if (a.bev) {
      ensure_dir(fs::path(a.output) / "bev");
      std::vector<BevBox> boxes;
      for (const auto & o : f.objects) boxes.push_back({o.box, {0, 255, 0}});
      render_bev(f.cloud, boxes, fs::path(a.output) / "bev" / (sample_name(f.sample) + ".ppm"),
                 cfg.bev);
    }
  }
  std::cout << frames.size() << " scenes written to " << a.output << "\n";
}

// bench: non-network stages on a synthetic cloud.
struct BenchArgs
{
  std::size_t points = 120000;
  int reps = 30;
  std::string model;
  std::string output;
};

void run_bench(const Globals & g, const BenchArgs & a)
{
  auto cfg = load_pipeline_config(g);
  std::vector<proposal::AnchorPrior> priors;
  nnet::PGNet net;
  if (!a.model.empty()) {
    require_file(model_pgnet_path(a.model));
    require_file(model_anchors_path(a.model));
    net = load_pgnet(model_pgnet_path(a.model), cfg);
    priors = proposal::read_anchors(model_anchors_path(a.model));
  } else {
    priors = compute_anchors(synth_frames(cfg, 8, g.seed), cfg, g.seed);
    net = nnet::PGNet(cfg.pgnet);
    Rng rng(Rng::derive(g.seed, 0x96e7));
    net.init(rng);
  }
  const PointCloud cloud = bench_cloud(cfg, a.points, g.seed);
  const auto heads = net.forward(
    nnet::map_to_input(network_map(cloud, cfg.projection), cfg.projection.max_radius,
                       cfg.proposal.height_scale));
  const auto report = benchmark(cloud, heads, priors, cfg, a.reps);
  std::cout << report.to_text();
  if (!a.output.empty()) eval::write_text(report.to_json(), a.output);
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"fvdet: front-view LiDAR 3D object detection"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")
    ->capture_default_str()
    ->check(CLI::PositiveNumber);
  app.add_option("--config", g.config,
                 std::string("JSON config; defaults to $") + kConfigEnv + " when set");

  ProjectArgs pa;
  auto * project = app.add_subcommand("project", "Velodyne .bin to a front-view map file");
  project->add_option("--input", pa.input, "Velodyne .bin")->required();
  project->add_option("--output", pa.output, "Map tensor file")->required();
  project->add_option("--ppm", pa.ppm, "Also render the map as PPM");
  project->add_flag("--base", pa.base, "Write the base grid instead of the upscaled map");

  AnchorArgs aa;
  auto * anchors = app.add_subcommand("anchors", "Cluster anchor priors from labels");
  anchors->add_option("--data", aa.data, "KITTI-style dataset root")->required();
  anchors->add_option("--output", aa.output, "Anchors file")->required();

  TrainArgs tp;
  auto * train_pg = app.add_subcommand("train-pgnet", "Train the proposal network");
  train_pg->add_option("--data", tp.data, "Dataset root")->required();
  train_pg->add_option("--anchors", tp.anchors, "Anchors file (clustered when omitted)");
  train_pg->add_option("--model", tp.model, "Model directory")->required();
  train_pg->add_option("--trace", tp.trace, "Loss trace CSV");
  train_pg->add_option("--steps", tp.steps, "Override the configured step count")
    ->check(CLI::NonNegativeNumber);

  TrainArgs te;
  auto * train_pe = app.add_subcommand("train-penet", "Train the box estimation network");
  train_pe->add_option("--data", te.data, "Dataset root")->required();
  train_pe->add_option("--model", te.model, "Model directory")->required();
  train_pe->add_option("--trace", te.trace, "Loss trace CSV");
  train_pe->add_option("--steps", te.steps, "Override the configured step count")
    ->check(CLI::NonNegativeNumber);

  DetectArgs da;
  auto * detect = app.add_subcommand("detect", "Detect 3D boxes, KITTI result files out");
  detect->add_option("--model", da.model, "Model directory")->required();
  auto * data_opt = detect->add_option("--data", da.data, "Dataset root (all samples)");
  auto * input_opt = detect->add_option("--input", da.input, "Single velodyne .bin");
  data_opt->excludes(input_opt);
  detect->add_option("--sample", da.sample, "Sample id for --input")->capture_default_str();
  detect->add_option("--output", da.output, "Result directory")->required();
  detect->add_option("--bev", da.bev, "Directory for BEV renders of the detections");

  EvalArgs ea;
  auto * evaluate = app.add_subcommand("eval", "Evaluate result files against labels");
  evaluate->add_option("--gt", ea.gt, "Ground-truth dataset root")->required();
  evaluate->add_option("--det", ea.det, "Result directory")->required();
  evaluate->add_option("--output", ea.output, "JSON report (stdout when omitted)");
  evaluate->add_option("--buckets", ea.buckets, "easy, moderate, hard, all")
    ->delimiter(',')
    ->capture_default_str();

  SynthArgs sa;
  auto * synth = app.add_subcommand("synth", "Generate synthetic scenes");
  synth->add_option("--output", sa.output, "Dataset root")->required();
  synth->add_option("--spec", sa.spec, "SceneSpec JSON (config synth section when omitted)");
  synth->add_option("--count", sa.count, "Number of scenes")
    ->capture_default_str()
    ->check(CLI::NonNegativeNumber);
  synth->add_flag("--bev", sa.bev, "Also render BEV images");

  BenchArgs ba;
  auto * bench = app.add_subcommand("bench", "Time projection, decode, NMS and extrusion");
  bench->add_option("--points", ba.points, "Cloud size")->capture_default_str();
  bench->add_option("--reps", ba.reps, "Timed repetitions")
    ->capture_default_str()
    ->check(CLI::PositiveNumber);
  bench->add_option("--model", ba.model, "Model directory (random weights when omitted)");
  bench->add_option("--output", ba.output, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  CLI::App * active = app.get_subcommands().front();
  try {
    if (active == project) run_project(g, pa);
    else if (active == anchors) run_anchors(g, aa);
    else if (active == train_pg) run_train_pgnet(g, tp);
    else if (active == train_pe) run_train_penet(g, te);
    else if (active == detect) {
      if (da.data.empty() && da.input.empty()) {
        throw std::runtime_error("detect needs --data or --input");
      }
      run_detect(g, da);
    } else if (active == evaluate) run_eval(g, ea);
    else if (active == synth) run_synth(g, sa);
    else if (active == bench) run_bench(g, ba);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return 1;
  }
  return 0;
}
