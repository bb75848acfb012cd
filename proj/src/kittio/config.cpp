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


#include "fvdet/kittio/config.hpp"

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace fvdet::kittio
{

using nlohmann::json;

namespace
{

constexpr double kDeg = kPi / 180.0;

/// Reads the object's keys through `handlers`; unknown keys are fatal.
template <class Fn>
void for_keys(const json & j, const std::string & where, Fn fn)
{
  if (!j.is_object()) {
    throw std::runtime_error("config: '" + where + "' must be an object");
  }
  for (const auto & [k, v] : j.items()) {
    if (!fn(k, v)) {
      throw std::runtime_error("config: unknown key '" + where + "." + k + "'");
    }
  }
}

json adam_json(const nnet::AdamConfig & a)
{
  return {{"learning_rate", a.learning_rate}, {"beta1", a.beta1}, {"beta2", a.beta2},
          {"epsilon", a.epsilon}, {"clip_norm", a.clip_norm}};
}

json training_json(const StageTraining & t)
{
  return {{"steps", t.steps}, {"batch_size", t.batch_size}, {"adam", adam_json(t.optimizer)}};
}

void read_training(const json & j, const std::string & where, StageTraining & t)
{
  for_keys(j, where, [&](const std::string & k, const json & v) {
    if (k == "steps") t.steps = v.get<int>();
    else if (k == "batch_size") t.batch_size = v.get<int>();
    else if (k == "adam") {
      for_keys(v, where + ".adam", [&](const std::string & a, const json & x) {
        if (a == "learning_rate") t.optimizer.learning_rate = x.get<double>();
        else if (a == "beta1") t.optimizer.beta1 = x.get<double>();
        else if (a == "beta2") t.optimizer.beta2 = x.get<double>();
        else if (a == "epsilon") t.optimizer.epsilon = x.get<double>();
        else if (a == "clip_norm") t.optimizer.clip_norm = x.get<double>();
        else return false;
        return true;
      });
    } else return false;
    return true;
  });
}

}  // namespace

std::string config_to_json(const PipelineConfig & c)
{
  const auto & p = c.projection;
  json templates = json::array();
  for (const auto & t : c.size_templates) {
    templates.push_back({{"class", std::string(class_name(t.cls))}, {"h", t.h}, {"w", t.w},
                         {"l", t.l}});
  }
  const json j = {
    {"projection",
     {{"delta_theta_deg", p.delta_theta / kDeg},
      {"delta_phi_deg", p.delta_phi / kDeg},
      {"theta_min_deg", p.theta_min / kDeg},
      {"phi_min_deg", p.phi_min / kDeg},
      {"height", p.height},
      {"width", p.width},
      {"upscaled_height", p.upscaled_height},
      {"upscaled_width", p.upscaled_width},
      {"max_radius", p.max_radius},
      {"fov_limit_deg", p.fov_limit ? json(*p.fov_limit / kDeg) : json(nullptr)}}},
    {"proposal",
     {{"anchor_count", c.proposal.anchor_count},
      {"anchor_scales", c.proposal.anchor_scales},
      {"ignore_iou", c.proposal.ignore_iou},
      {"nms_iou", c.proposal.nms_iou},
      {"score_threshold", c.proposal.score_threshold},
      {"max_candidates", c.proposal.max_candidates},
      {"height_scale", c.proposal.height_scale},
      {"lambda_coord", c.proposal.loss.coord},
      {"lambda_conf", c.proposal.loss.conf},
      {"lambda_cls", c.proposal.loss.cls},
      {"lambda_reg", c.proposal.loss.reg},
      {"huber_delta", c.proposal.loss.huber_delta}}},
    {"pgnet",
     {{"stem_channels", c.pgnet.stem_channels},
      {"widths", c.pgnet.widths},
      {"units", c.pgnet.units},
      {"head_strides", c.pgnet.head_strides},
      {"priors_per_head", c.pgnet.priors_per_head},
      {"num_classes", c.pgnet.num_classes},
      {"leaky_slope", c.pgnet.slope},
      {"conf_bias_init", c.pgnet.conf_bias_init}}},
    {"penet",
     {{"point_mlp", c.penet.point_mlp},
      {"fc", c.penet.fc},
      {"tnet_mlp", c.penet.tnet_mlp},
      {"heading_bins", c.penet.heading_bins},
      {"leaky_slope", c.penet.slope},
      {"size_templates", templates}}},
    {"stage2",
     {{"lambda_center1", c.stage2.center1},
      {"lambda_center2", c.stage2.center2},
      {"lambda_size_cls", c.stage2.size_cls},
      {"lambda_size_reg", c.stage2.size_reg},
      {"lambda_heading_cls", c.stage2.heading_cls},
      {"lambda_heading_reg", c.stage2.heading_reg},
      {"lambda_corner", c.stage2.corner},
      {"huber_delta", c.stage2.huber_delta}}},
    {"fragment", {{"radial_margin", c.margins.radial}, {"box_scale", c.margins.box_scale}}},
    {"augment",
     {{"flip_probability", c.augment.flip_probability},
      {"max_rotation_deg", c.augment.max_rotation / kDeg},
      {"center_jitter", c.augment.center_jitter},
      {"size_scale_min", c.augment.size_scale_min},
      {"size_scale_max", c.augment.size_scale_max}}},
    {"points", {{"num_points", c.points.num_points}, {"min_points", c.points.min_points}}},
    {"train_pgnet", training_json(c.train_pgnet)},
    {"train_penet", training_json(c.train_penet)},
    {"eval",
     {{"ap_mode", c.ap_mode == eval::ApMode::k11Point ? "11-point" : "40-point"},
      {"iou_car", c.iou_car},
      {"iou_person", c.iou_person}}},
    {"synth", json::parse(scene_spec_to_json(c.synth))},
    {"bev",
     {{"meters_per_pixel", c.bev.meters_per_pixel},
      {"x_min", c.bev.x_min},
      {"x_max", c.bev.x_max},
      {"y_min", c.bev.y_min},
      {"y_max", c.bev.y_max}}}};
  return j.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string & text)
{
  PipelineConfig c;
  try {
    const json root = json::parse(text);
    for_keys(root, "", [&](const std::string & section, const json & v) {
      if (section == "projection") {
        auto & p = c.projection;
        for_keys(v, section, [&](const std::string & k, const json & x) {
          if (k == "delta_theta_deg") p.delta_theta = x.get<double>() * kDeg;
          else if (k == "delta_phi_deg") p.delta_phi = x.get<double>() * kDeg;
          else if (k == "theta_min_deg") p.theta_min = x.get<double>() * kDeg;
          else if (k == "phi_min_deg") p.phi_min = x.get<double>() * kDeg;
          else if (k == "height") p.height = x.get<int>();
          else if (k == "width") p.width = x.get<int>();
          else if (k == "upscaled_height") p.upscaled_height = x.get<int>();
          else if (k == "upscaled_width") p.upscaled_width = x.get<int>();
          else if (k == "max_radius") p.max_radius = x.get<double>();
          else if (k == "fov_limit_deg") {
            if (x.is_null()) p.fov_limit.reset();
            else p.fov_limit = x.get<double>() * kDeg;
          } else return false;
          return true;
        });
      } else if (section == "proposal") {
        auto & p = c.proposal;
        for_keys(v, section, [&](const std::string & k, const json & x) {
          if (k == "anchor_count") p.anchor_count = x.get<int>();
          else if (k == "anchor_scales") p.anchor_scales = x.get<int>();
          else if (k == "ignore_iou") p.ignore_iou = x.get<double>();
          else if (k == "nms_iou") p.nms_iou = x.get<double>();
          else if (k == "score_threshold") p.score_threshold = x.get<double>();
          else if (k == "max_candidates") p.max_candidates = x.get<int>();
          else if (k == "height_scale") p.height_scale = x.get<double>();
          else if (k == "lambda_coord") p.loss.coord = x.get<double>();
          else if (k == "lambda_conf") p.loss.conf = x.get<double>();
          else if (k == "lambda_cls") p.loss.cls = x.get<double>();
          else if (k == "lambda_reg") p.loss.reg = x.get<double>();
          else if (k == "huber_delta") p.loss.huber_delta = x.get<double>();
          else return false;
          return true;
        });
      } else if (section == "pgnet") {
        auto & p = c.pgnet;
        for_keys(v, section, [&](const std::string & k, const json & x) {
          if (k == "stem_channels") p.stem_channels = x.get<int>();
          else if (k == "widths") p.widths = x.get<std::vector<int>>();
          else if (k == "units") p.units = x.get<std::vector<int>>();
          else if (k == "head_strides") p.head_strides = x.get<std::vector<int>>();
          else if (k == "priors_per_head") p.priors_per_head = x.get<std::vector<int>>();
          else if (k == "num_classes") p.num_classes = x.get<int>();
          else if (k == "leaky_slope") p.slope = x.get<double>();
          else if (k == "conf_bias_init") p.conf_bias_init = x.get<double>();
          else return false;
          return true;
        });
      } else if (section == "penet") {
        auto & p = c.penet;
        for_keys(v, section, [&](const std::string & k, const json & x) {
          if (k == "point_mlp") p.point_mlp = x.get<std::vector<int>>();
          else if (k == "fc") p.fc = x.get<std::vector<int>>();
          else if (k == "tnet_mlp") p.tnet_mlp = x.get<std::vector<int>>();
          else if (k == "heading_bins") p.heading_bins = x.get<int>();
          else if (k == "leaky_slope") p.slope = x.get<double>();
          else if (k == "size_templates") {
            c.size_templates.clear();
            for (const auto & t : x) {
              const auto cls = parse_class(t.at("class").get<std::string>());
              if (!cls) throw std::runtime_error("config: unknown template class");
              c.size_templates.push_back(
                {*cls, t.at("h").get<double>(), t.at("w").get<double>(), t.at("l").get<double>()});
            }
          } else return false;
          return true;
        });
      } else if (section == "stage2") {
        auto & s = c.stage2;
        for_keys(v, section, [&](const std::string & k, const json & x) {
          if (k == "lambda_center1") s.center1 = x.get<double>();
          else if (k == "lambda_center2") s.center2 = x.get<double>();
          else if (k == "lambda_size_cls") s.size_cls = x.get<double>();
          else if (k == "lambda_size_reg") s.size_reg = x.get<double>();
          else if (k == "lambda_heading_cls") s.heading_cls = x.get<double>();
          else if (k == "lambda_heading_reg") s.heading_reg = x.get<double>();
          else if (k == "lambda_corner") s.corner = x.get<double>();
          else if (k == "huber_delta") s.huber_delta = x.get<double>();
          else return false;
          return true;
        });
      } else if (section == "fragment") {
        for_keys(v, section, [&](const std::string & k, const json & x) {
          if (k == "radial_margin") c.margins.radial = x.get<double>();
          else if (k == "box_scale") c.margins.box_scale = x.get<double>();
          else return false;
          return true;
        });
      } else if (section == "augment") {
        auto & a = c.augment;
        for_keys(v, section, [&](const std::string & k, const json & x) {
          if (k == "flip_probability") a.flip_probability = x.get<double>();
          else if (k == "max_rotation_deg") a.max_rotation = x.get<double>() * kDeg;
          else if (k == "center_jitter") a.center_jitter = x.get<double>();
          else if (k == "size_scale_min") a.size_scale_min = x.get<double>();
          else if (k == "size_scale_max") a.size_scale_max = x.get<double>();
          else return false;
          return true;
        });
      } else if (section == "points") {
        for_keys(v, section, [&](const std::string & k, const json & x) {
          if (k == "num_points") c.points.num_points = x.get<int>();
          else if (k == "min_points") c.points.min_points = x.get<int>();
          else return false;
          return true;
        });
      } else if (section == "train_pgnet") {
        read_training(v, section, c.train_pgnet);
      } else if (section == "train_penet") {
        read_training(v, section, c.train_penet);
      } else if (section == "eval") {
        for_keys(v, section, [&](const std::string & k, const json & x) {
          if (k == "ap_mode") {
            const auto m = x.get<std::string>();
            if (m == "11-point") c.ap_mode = eval::ApMode::k11Point;
            else if (m == "40-point") c.ap_mode = eval::ApMode::k40Point;
            else throw std::runtime_error("config: eval.ap_mode must be 11-point or 40-point");
          } else if (k == "iou_car") c.iou_car = x.get<double>();
          else if (k == "iou_person") c.iou_person = x.get<double>();
          else return false;
          return true;
        });
      } else if (section == "synth") {
        c.synth = scene_spec_from_json(v.dump());
      } else if (section == "bev") {
        for_keys(v, section, [&](const std::string & k, const json & x) {
          if (k == "meters_per_pixel") c.bev.meters_per_pixel = x.get<double>();
          else if (k == "x_min") c.bev.x_min = x.get<double>();
          else if (k == "x_max") c.bev.x_max = x.get<double>();
          else if (k == "y_min") c.bev.y_min = x.get<double>();
          else if (k == "y_max") c.bev.y_max = x.get<double>();
          else return false;
          return true;
        });
      } else {
        return false;
      }
      return true;
    });
  } catch (const json::exception & e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  c.projection.validate();
  c.pgnet.validate();
  c.penet.size_templates = static_cast<int>(c.size_templates.size());
  c.penet.validate();
  return c;
}

std::string read_text_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path.string() + ": cannot open");
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PipelineConfig load_config(const std::filesystem::path & path)
{
  try {
    return config_from_json(read_text_file(path));
  } catch (const std::runtime_error & e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::string> & flag)
{
  if (flag && !flag->empty()) return std::filesystem::path(*flag);
  if (const char * env = std::getenv(kConfigEnv); env && *env) {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

}  // namespace fvdet::kittio
