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


#include "fvdet/eval/report.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace fvdet::eval
{

using nlohmann::json;

const ReportEntry * Report::find(ClassId cls, Bucket bucket, IouKind kind) const
{
  for (const auto & e : entries) {
    if (e.cls == cls && e.bucket == bucket && e.kind == kind) return &e;
  }
  return nullptr;
}

std::optional<double> Report::ap(ClassId cls, Bucket bucket, IouKind kind) const
{
  const ReportEntry * e = find(cls, bucket, kind);
  return e ? e->curve.ap : std::nullopt;
}

Report build_report(const std::vector<Detection> & dets, const std::vector<GroundTruth> & gts,
                    const ReportOptions & options)
{
  Report r;
  for (ClassId cls : options.classes) {
    for (IouKind kind : options.kinds) {
      for (Bucket bucket : options.buckets) {
        EvalOptions eo;
        eo.kind = kind;
        eo.bucket = bucket;
        eo.iou_threshold = options.iou_threshold;
        eo.mode = options.mode;
        ReportEntry e;
        e.cls = cls;
        e.bucket = bucket;
        e.kind = kind;
        e.iou_threshold = options.iou_threshold.value_or(default_iou_threshold(cls));
        e.curve = evaluate(dets, gts, cls, eo);
        r.entries.push_back(std::move(e));
      }
    }
  }
  return r;
}

std::string report_json(const Report & report, ApMode mode)
{
  json results = json::array();
  for (const auto & e : report.entries) {
    json pr = json::array();
    for (const auto & p : e.curve.points) pr.push_back({p.recall, p.precision});
    results.push_back({{"class", std::string(class_name(e.cls))},
                       {"bucket", std::string(bucket_name(e.bucket))},
                       {"iou_kind", std::string(iou_kind_name(e.kind))},
                       {"iou_threshold", e.iou_threshold},
                       {"ap", e.curve.ap ? json(*e.curve.ap) : json(nullptr)},
                       {"num_gt", e.curve.num_gt},
                       {"tp", e.curve.true_positives},
                       {"fp", e.curve.false_positives},
                       {"pr", pr}});
  }
  const json doc = {{"ap_mode", mode == ApMode::k11Point ? "11-point" : "40-point"},
                    {"results", results}};
  return doc.dump(2) + "\n";
}

Report parse_report_json(const std::string & text)
{
  Report r;
  try {
    const json doc = json::parse(text);
    for (const auto & j : doc.at("results")) {
      ReportEntry e;
      const auto cls = parse_class(j.at("class").get<std::string>());
      const auto bucket = parse_bucket(j.at("bucket").get<std::string>());
      const auto kind = parse_iou_kind(j.at("iou_kind").get<std::string>());
      if (!cls || !bucket || !kind) {
        throw std::runtime_error("unknown class, bucket or overlap kind");
      }
      e.cls = *cls;
      e.bucket = *bucket;
      e.kind = *kind;
      e.iou_threshold = j.at("iou_threshold").get<double>();
      if (!j.at("ap").is_null()) e.curve.ap = j.at("ap").get<double>();
      e.curve.num_gt = j.at("num_gt").get<std::size_t>();
      e.curve.true_positives = j.at("tp").get<std::size_t>();
      e.curve.false_positives = j.at("fp").get<std::size_t>();
      for (const auto & p : j.at("pr")) {
        e.curve.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      }
      r.entries.push_back(std::move(e));
    }
  } catch (const json::exception & ex) {
    throw std::runtime_error(std::string("malformed report: ") + ex.what());
  }
  return r;
}

std::string report_table(const Report & report)
{
  std::vector<ClassId> classes;
  std::vector<IouKind> kinds;
  std::vector<Bucket> buckets;
  auto add_unique = [](auto & v, auto x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  };
  for (const auto & e : report.entries) {
    add_unique(classes, e.cls);
    add_unique(kinds, e.kind);
    add_unique(buckets, e.bucket);
  }
  std::ostringstream s;
  char buf[64];
  s << "AP (%)  ";
  for (ClassId c : classes) {
    std::snprintf(buf, sizeof(buf), "| %-*s", static_cast<int>(11 * buckets.size() - 1),
                  std::string(class_name(c)).c_str());
    s << buf;
  }
  s << "\n        ";
  for (std::size_t i = 0; i < classes.size(); ++i) {
    s << "|";
    for (Bucket b : buckets) {
      std::snprintf(buf, sizeof(buf), " %10.10s", std::string(bucket_name(b)).c_str());
      s << buf;
    }
  }
  s << "\n";
  for (IouKind k : kinds) {
    std::snprintf(buf, sizeof(buf), "%-8s", std::string(iou_kind_name(k)).c_str());
    s << buf;
    for (ClassId c : classes) {
      s << "|";
      for (Bucket b : buckets) {
        const auto ap = report.ap(c, b, k);
        if (ap) {
          std::snprintf(buf, sizeof(buf), " %10.2f", 100.0 * *ap);
        } else {
          std::snprintf(buf, sizeof(buf), " %10s", "-");
        }
        s << buf;
      }
    }
    s << "\n";
  }
  return s.str();
}

void write_text(const std::string & text, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open for writing");
  }
  out << text;
}

}  // namespace fvdet::eval
