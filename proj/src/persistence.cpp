// Copyright 2026 The priormap Authors
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

#include "priormap/persistence.hpp"

#include "priormap/error.hpp"

#include <json.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <unistd.h>

namespace priormap::io
{
namespace
{
using json = nlohmann::ordered_json;

constexpr std::string_view kMapFormat = "priormap.map";
constexpr std::string_view kVariantsFormat = "priormap.variants";
constexpr std::string_view kDetectionsFormat = "priormap.detections";
constexpr std::string_view kQueriesFormat = "priormap.queries";
constexpr std::string_view kAssignmentFormat = "priormap.assignment";
constexpr std::string_view kEvaluationFormat = "priormap.evaluation";
constexpr std::string_view kReportFormat = "priormap.report";

json parse(std::string_view text)
{
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::out_of_range & e) {
    raise(ErrorCode::kNonFinite, e.what());
  } catch (const json::exception & e) {
    raise(ErrorCode::kSyntax, e.what());
  }
}

std::string dump(const json & doc) { return doc.dump(2) + "\n"; }

void require_object(const json & obj, std::string_view ctx)
{
  if (!obj.is_object()) {
    raise(ErrorCode::kSyntax, std::string(ctx) + " must be an object");
  }
}

void allow_keys(const json & obj, std::initializer_list<std::string_view> allowed,
                std::string_view ctx)
{
  require_object(obj, ctx);
  for (const auto & item : obj.items()) {
    bool known = false;
    for (const auto k : allowed) {
      known = known || item.key() == k;
    }
    if (!known) {
      raise(ErrorCode::kVersion, "unknown field '" + item.key() + "' in " + std::string(ctx));
    }
  }
}

const json & field(const json & obj, const char * key, std::string_view ctx)
{
  require_object(obj, ctx);
  const auto it = obj.find(key);
  if (it == obj.end()) {
    raise(ErrorCode::kSyntax, "missing field '" + std::string(key) + "' in " + std::string(ctx));
  }
  return *it;
}

double as_double(const json & v, std::string_view ctx)
{
  if (v.is_null()) {
    raise(ErrorCode::kNonFinite, "non-finite number in " + std::string(ctx));
  }
  if (!v.is_number()) {
    raise(ErrorCode::kSyntax, "expected a number in " + std::string(ctx));
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    raise(ErrorCode::kNonFinite, "non-finite number in " + std::string(ctx));
  }
  return d;
}

std::uint64_t as_u64(const json & v, std::string_view ctx)
{
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    raise(ErrorCode::kSyntax, "expected a non-negative integer in " + std::string(ctx));
  }
  return v.get<std::uint64_t>();
}

bool as_bool(const json & v, std::string_view ctx)
{
  if (!v.is_boolean()) {
    raise(ErrorCode::kSyntax, "expected a boolean in " + std::string(ctx));
  }
  return v.get<bool>();
}

std::string as_string(const json & v, std::string_view ctx)
{
  if (!v.is_string()) {
    raise(ErrorCode::kSyntax, "expected a string in " + std::string(ctx));
  }
  return v.get<std::string>();
}

const json & as_array(const json & v, std::string_view ctx)
{
  if (!v.is_array()) {
    raise(ErrorCode::kSyntax, "expected an array in " + std::string(ctx));
  }
  return v;
}

void check_header(const json & doc, std::string_view format)
{
  require_object(doc, "document");
  const auto it = doc.find("format");
  if (it == doc.end() || !it->is_string() || it->get<std::string>() != format) {
    raise(ErrorCode::kVersion, "not a " + std::string(format) + " document");
  }
  const auto v = doc.find("version");
  if (v == doc.end() || !v->is_number_integer() || v->get<int>() != kFormatVersion) {
    raise(ErrorCode::kVersion, "unsupported " + std::string(format) + " version");
  }
}

json extent_json(const PatchExtent & e) { return json{{"width_m", e.width_m}, {"height_m", e.height_m}}; }

PatchExtent extent_from(const json & j)
{
  allow_keys(j, {"width_m", "height_m"}, "extent");
  PatchExtent e{as_double(field(j, "width_m", "extent"), "extent"),
                as_double(field(j, "height_m", "extent"), "extent")};
  if (!(e.width_m > 0.0) || !(e.height_m > 0.0)) {
    raise(ErrorCode::kSyntax, "extent sides must be positive");
  }
  return e;
}

json points_json(const Polyline & pts)
{
  json arr = json::array();
  for (const auto & p : pts) {
    arr.push_back(json::array({p.x, p.y}));
  }
  return arr;
}

Polyline points_from(const json & j, std::string_view ctx)
{
  Polyline pts;
  for (const auto & pj : as_array(j, ctx)) {
    if (!pj.is_array() || pj.size() != 2) {
      raise(ErrorCode::kSyntax, "points must be [x, y] pairs in " + std::string(ctx));
    }
    pts.push_back({as_double(pj[0], ctx), as_double(pj[1], ctx)});
  }
  return pts;
}

json element_json(const MapElement & e)
{
  return json{{"id", e.id},
              {"class", std::string(to_string(e.cls))},
              {"closed", e.closed},
              {"points", points_json(e.points)}};
}

MapElement element_from(const json & j, std::size_t ppe, std::initializer_list<std::string_view> keys)
{
  allow_keys(j, keys, "element");
  MapElement e;
  e.id = as_string(field(j, "id", "element"), "element id");
  const std::string ctx = "element '" + e.id + "'";
  const std::string tag = as_string(field(j, "class", ctx), ctx);
  const auto cls = class_from_string(tag);
  if (!cls) {
    raise(ErrorCode::kClassTag, "unknown class tag '" + tag + "' in " + ctx);
  }
  e.cls = *cls;
  e.closed = as_bool(field(j, "closed", ctx), ctx);
  e.points = points_from(field(j, "points", ctx), ctx);
  if (e.points.size() != ppe) {
    raise(ErrorCode::kCanonicalForm, ctx + " has " + std::to_string(e.points.size()) +
                                       " points, expected " + std::to_string(ppe));
  }
  if (e.closed && e.points.front() != e.points.back()) {
    raise(ErrorCode::kCanonicalForm, ctx + " is closed but its ends differ");
  }
  return e;
}

json map_body(const VectorMap & map)
{
  json elems = json::array();
  for (const auto & e : map.elements) {
    elems.push_back(element_json(e));
  }
  return json{{"extent", extent_json(map.extent)}, {"elements", std::move(elems)}};
}

VectorMap map_body_from(const json & j, std::size_t ppe, std::string_view ctx,
                        std::initializer_list<std::string_view> keys)
{
  allow_keys(j, keys, ctx);
  VectorMap map;
  map.extent = extent_from(field(j, "extent", ctx));
  for (const auto & ej : as_array(field(j, "elements", ctx), ctx)) {
    map.elements.push_back(element_from(ej, ppe, {"id", "class", "closed", "points"}));
  }
  validate(map);
  return map;
}

std::size_t ppe_from(const json & doc)
{
  const auto ppe = as_u64(field(doc, "points_per_element", "document"), "points_per_element");
  if (ppe < 2) {
    raise(ErrorCode::kSyntax, "points_per_element must be >= 2");
  }
  return static_cast<std::size_t>(ppe);
}

std::size_t ppe_of(const VectorMap & map, std::size_t fallback)
{
  return map.elements.empty() ? fallback : map.elements.front().points.size();
}

json params_json(const ScenarioParams & p)
{
  return json{{"sigma_shift", p.sigma_shift},
              {"sigma_point", p.sigma_point},
              {"delete_frac", p.delete_frac},
              {"add_frac", p.add_frac},
              {"mix_p", p.mix_p},
              {"warp_amp_h", p.warp_amp_h},
              {"warp_amp_v", p.warp_amp_v},
              {"warp_inclination", p.warp_inclination},
              {"grid_spacing", p.grid_spacing},
              {"grid_sigma", p.grid_sigma},
              {"crossing_width_m", p.crossing_width_m},
              {"crossing_height_m", p.crossing_height_m},
              {"exact_delete", p.exact_delete}};
}

json scenario_json(const ScenarioSpec & s)
{
  return json{{"kind", std::string(to_string(s.kind))}, {"params", params_json(s.params)}};
}

ScenarioSpec scenario_from(const json & j)
{
  allow_keys(j, {"kind", "params"}, "scenario");
  ScenarioSpec s;
  const std::string kind = as_string(field(j, "kind", "scenario"), "scenario kind");
  const auto k = scenario_from_string(kind);
  if (!k) {
    raise(ErrorCode::kSyntax, "unknown scenario '" + kind + "'");
  }
  s.kind = *k;
  const json & pj = field(j, "params", "scenario");
  require_object(pj, "scenario params");
  for (const auto & item : pj.items()) {
    if (item.key() == "exact_delete") {
      s.params.exact_delete = as_bool(item.value(), "exact_delete");
      continue;
    }
    try {
      s.set_param(item.key(), as_double(item.value(), item.key()));
    } catch (const Error &) {
      raise(ErrorCode::kVersion, "unknown scenario parameter '" + item.key() + "'");
    }
  }
  try {
    s.validate();
  } catch (const Error & e) {
    raise(ErrorCode::kIntegrity, e.what());
  }
  return s;
}

std::string shortest(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json ap_json(const ApReport & r)
{
  json metrics = json::object();
  for (const auto & [k, v] : flatten(r)) {
    metrics[k] = v;
  }
  json counts = json::object();
  json vacuous = json::object();
  for (const auto cls : kAllClasses) {
    const std::size_t c = class_index(cls);
    json per = json::array();
    for (std::size_t t = 0; t < kNumThresholds; ++t) {
      const auto & m = r.counts[c][t];
      per.push_back(json::array({m.tp, m.fp, m.fn}));
    }
    counts[std::string(to_string(cls))] = std::move(per);
    vacuous[std::string(to_string(cls))] = r.vacuous[c];
  }
  json thresholds = json::array();
  for (const double t : r.thresholds) {
    thresholds.push_back(t);
  }
  return json{{"thresholds", std::move(thresholds)},
              {"metrics", std::move(metrics)},
              {"counts", std::move(counts)},
              {"vacuous", std::move(vacuous)}};
}

ApReport ap_from(const json & j)
{
  allow_keys(j, {"thresholds", "metrics", "counts", "vacuous"}, "ap report");
  ApReport r;
  const json & tj = as_array(field(j, "thresholds", "ap report"), "thresholds");
  if (tj.size() != kNumThresholds) {
    raise(ErrorCode::kSyntax, "expected three thresholds");
  }
  for (std::size_t t = 0; t < kNumThresholds; ++t) {
    r.thresholds[t] = as_double(tj[t], "thresholds");
  }

  // flatten() fixes the key set and order: per class, thresholds then class mean; then map.
  const json & mj = field(j, "metrics", "ap report");
  require_object(mj, "metrics");
  const auto keys = flatten(r);
  if (mj.size() != keys.size()) {
    raise(ErrorCode::kVersion, "unexpected metric keys");
  }
  std::size_t k = 0;
  const auto next = [&]() { return as_double(field(mj, keys[k++].first.c_str(), "metrics"), "metric"); };
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t t = 0; t < kNumThresholds; ++t) {
      r.ap[c][t] = next();
    }
    r.class_ap[c] = next();
  }
  r.map = next();

  const json & cj = field(j, "counts", "ap report");
  const json & vj = field(j, "vacuous", "ap report");
  allow_keys(cj, {"divider", "ped_crossing", "boundary"}, "counts");
  allow_keys(vj, {"divider", "ped_crossing", "boundary"}, "vacuous");
  for (const auto cls : kAllClasses) {
    const std::size_t c = class_index(cls);
    const std::string name(to_string(cls));
    const json & per = as_array(field(cj, name.c_str(), "counts"), "counts");
    if (per.size() != kNumThresholds) {
      raise(ErrorCode::kSyntax, "expected one count triple per threshold");
    }
    for (std::size_t t = 0; t < kNumThresholds; ++t) {
      const json & tr = as_array(per[t], "counts");
      if (tr.size() != 3) {
        raise(ErrorCode::kSyntax, "counts must be [tp, fp, fn]");
      }
      r.counts[c][t] = {as_u64(tr[0], "tp"), as_u64(tr[1], "fp"), as_u64(tr[2], "fn")};
    }
    r.vacuous[c] = as_bool(field(vj, name.c_str(), "vacuous"), "vacuous");
  }
  return r;
}

std::string estimator_name(EstimatorMode m) { return std::string(to_string(m)); }
}  // namespace

std::string read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    raise(ErrorCode::kIo, "failed reading '" + path.string() + "'");
  }
  return ss.str();
}

void write_file_atomic(const std::filesystem::path & path, std::string_view contents)
{
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      raise(ErrorCode::kIo, "cannot open '" + tmp.string() + "' for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      raise(ErrorCode::kIo, "failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    raise(ErrorCode::kIo, "cannot move output into '" + path.string() + "'");
  }
}

std::string map_to_json(const VectorMap & map, std::size_t points_per_element)
{
  json doc{{"format", kMapFormat}, {"version", kFormatVersion},
           {"points_per_element", points_per_element}};
  const json body = map_body(map);
  for (const auto & item : body.items()) {
    doc[item.key()] = item.value();
  }
  return dump(doc);
}

VectorMap map_from_json(std::string_view text)
{
  const json doc = parse(text);
  check_header(doc, kMapFormat);
  allow_keys(doc, {"format", "version", "points_per_element", "extent", "elements"}, "map file");
  return map_body_from(doc, ppe_from(doc), "map file",
                       {"format", "version", "points_per_element", "extent", "elements"});
}

void save_map(const VectorMap & map, const std::filesystem::path & path)
{
  write_file_atomic(path, map_to_json(map, ppe_of(map, kCanonicalPoints)));
}

VectorMap load_map(const std::filesystem::path & path) { return map_from_json(read_file(path)); }

std::string variants_to_json(const VariantSet & set)
{
  json variants = json::array();
  for (std::size_t i = 0; i < set.variants.size(); ++i) {
    const auto & v = set.variants[i];
    json corr = json::array();
    for (const auto & c : v.correspondences) {
      corr.push_back(json{{"perturbed_id", c.perturbed_id},
                          {"source_id", c.source_id ? json(*c.source_id) : json(nullptr)}});
    }
    variants.push_back(json{{"index", i},
                            {"seed", v.seed},
                            {"unperturbed", v.unperturbed},
                            {"map", map_body(v.map)},
                            {"correspondences", std::move(corr)}});
  }
  json doc{{"format", kVariantsFormat},
           {"version", kFormatVersion},
           {"points_per_element", ppe_of(set.source, kCanonicalPoints)},
           {"source", json{{"name", set.source_name}, {"map", map_body(set.source)}}},
           {"scenario", scenario_json(set.scenario)},
           {"seed", set.seed},
           {"variant_count", set.variants.size()},
           {"variants", std::move(variants)}};
  return dump(doc);
}

VariantSet variants_from_json(std::string_view text)
{
  const json doc = parse(text);
  check_header(doc, kVariantsFormat);
  allow_keys(doc, {"format", "version", "points_per_element", "source", "scenario", "seed",
                   "variant_count", "variants"},
             "variant file");
  const std::size_t ppe = ppe_from(doc);
  VariantSet set;
  const json & src = field(doc, "source", "variant file");
  allow_keys(src, {"name", "map"}, "source");
  set.source_name = as_string(field(src, "name", "source"), "source name");
  set.source = map_body_from(field(src, "map", "source"), ppe, "source map", {"extent", "elements"});
  set.scenario = scenario_from(field(doc, "scenario", "variant file"));
  set.seed = as_u64(field(doc, "seed", "variant file"), "seed");
  const auto count = as_u64(field(doc, "variant_count", "variant file"), "variant_count");
  const json & vs = as_array(field(doc, "variants", "variant file"), "variants");
  if (vs.size() != count) {
    raise(ErrorCode::kIntegrity, "variant_count says " + std::to_string(count) + " but file has " +
                                   std::to_string(vs.size()) + " variants");
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const json & vj = vs[i];
    allow_keys(vj, {"index", "seed", "unperturbed", "map", "correspondences"}, "variant");
    if (as_u64(field(vj, "index", "variant"), "index") != i) {
      raise(ErrorCode::kIntegrity, "variant " + std::to_string(i) + " is out of order");
    }
    PerturbedMap pm;
    pm.scenario = set.scenario;
    pm.seed = as_u64(field(vj, "seed", "variant"), "variant seed");
    pm.unperturbed = as_bool(field(vj, "unperturbed", "variant"), "unperturbed");
    pm.map = map_body_from(field(vj, "map", "variant"), ppe, "variant map", {"extent", "elements"});
    for (const auto & cj : as_array(field(vj, "correspondences", "variant"), "correspondences")) {
      allow_keys(cj, {"perturbed_id", "source_id"}, "correspondence");
      Correspondence c;
      c.perturbed_id = as_string(field(cj, "perturbed_id", "correspondence"), "perturbed_id");
      const json & sj = field(cj, "source_id", "correspondence");
      if (!sj.is_null()) {
        c.source_id = as_string(sj, "source_id");
      }
      pm.correspondences.push_back(std::move(c));
    }
    validate_correspondences(pm, &set.source);
    set.variants.push_back(std::move(pm));
  }
  return set;
}

void save_variants(const VariantSet & set, const std::filesystem::path & path)
{
  write_file_atomic(path, variants_to_json(set));
}

VariantSet load_variants(const std::filesystem::path & path)
{
  return variants_from_json(read_file(path));
}

std::string detections_to_json(const DetectionResult & result, const PatchExtent & extent)
{
  json dets = json::array();
  std::size_t ppe = kCanonicalPoints;
  for (const auto & d : result.detections) {
    json e = element_json(d.element);
    e["confidence"] = d.confidence;
    dets.push_back(std::move(e));
    ppe = d.element.points.size();
  }
  json doc{{"format", kDetectionsFormat},
           {"version", kFormatVersion},
           {"points_per_element", ppe},
           {"extent", extent_json(extent)},
           {"detections", std::move(dets)}};
  return dump(doc);
}

DetectionResult detections_from_json(std::string_view text, PatchExtent * extent)
{
  const json doc = parse(text);
  check_header(doc, kDetectionsFormat);
  allow_keys(doc, {"format", "version", "points_per_element", "extent", "detections"},
             "detection file");
  const std::size_t ppe = ppe_from(doc);
  const PatchExtent ext = extent_from(field(doc, "extent", "detection file"));
  if (extent != nullptr) {
    *extent = ext;
  }
  DetectionResult out;
  for (const auto & dj : as_array(field(doc, "detections", "detection file"), "detections")) {
    Detection d;
    d.element = element_from(dj, ppe, {"id", "class", "closed", "points", "confidence"});
    d.confidence = as_double(field(dj, "confidence", "detection"), "confidence");
    out.detections.push_back(std::move(d));
  }
  return out;
}

void save_detections(const DetectionResult & result, const PatchExtent & extent,
                     const std::filesystem::path & path)
{
  write_file_atomic(path, detections_to_json(result, extent));
}

DetectionResult load_detections(const std::filesystem::path & path, PatchExtent * extent)
{
  return detections_from_json(read_file(path), extent);
}

namespace
{
void put_f64le(std::string & out, double v)
{
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) {
    out.push_back(static_cast<char>(bits & 0xFFu));
    bits >>= 8;
  }
}

double get_f64le(const char * p)
{
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) {
    bits = (bits << 8) | static_cast<unsigned char>(p[b]);
  }
  return std::bit_cast<double>(bits);
}
}  // namespace

std::string query_set_to_bytes(const ExQuerySet & set)
{
  json prov = json::array();
  for (const auto & s : set.provenance) {
    if (s.kind == QuerySlot::Kind::kEx) {
      prov.push_back(json{{"kind", "ex"}, {"id", s.element_id}});
    } else {
      prov.push_back(json{{"kind", "learned"}, {"pool_index", s.pool_index}});
    }
  }
  json header{{"format", kQueriesFormat}, {"version", kFormatVersion},
              {"groups", set.groups},     {"points", set.points},
              {"width", set.width},       {"n_ex", set.n_ex},
              {"dtype", "float64le"},     {"provenance", std::move(prov)}};
  std::string out = header.dump() + "\n";
  out.reserve(out.size() + set.values.size() * 8);
  for (const double v : set.values) {
    put_f64le(out, v);
  }
  return out;
}

ExQuerySet query_set_from_bytes(std::string_view bytes)
{
  const auto nl = bytes.find('\n');
  if (nl == std::string_view::npos) {
    raise(ErrorCode::kSyntax, "query file has no header line");
  }
  const json header = parse(bytes.substr(0, nl));
  check_header(header, kQueriesFormat);
  allow_keys(header, {"format", "version", "groups", "points", "width", "n_ex", "dtype",
                      "provenance"},
             "query header");
  if (as_string(field(header, "dtype", "query header"), "dtype") != "float64le") {
    raise(ErrorCode::kVersion, "unsupported query dtype");
  }
  ExQuerySet set;
  set.groups = as_u64(field(header, "groups", "query header"), "groups");
  set.points = as_u64(field(header, "points", "query header"), "points");
  set.width = as_u64(field(header, "width", "query header"), "width");
  set.n_ex = as_u64(field(header, "n_ex", "query header"), "n_ex");
  const json & prov = as_array(field(header, "provenance", "query header"), "provenance");
  if (prov.size() != set.groups || set.n_ex > set.groups) {
    raise(ErrorCode::kIntegrity, "provenance does not cover every query group");
  }
  for (std::size_t g = 0; g < prov.size(); ++g) {
    const json & pj = prov[g];
    const std::string kind = as_string(field(pj, "kind", "provenance"), "provenance kind");
    QuerySlot slot;
    if (kind == "ex") {
      allow_keys(pj, {"kind", "id"}, "provenance");
      slot.kind = QuerySlot::Kind::kEx;
      slot.element_id = as_string(field(pj, "id", "provenance"), "id");
    } else if (kind == "learned") {
      allow_keys(pj, {"kind", "pool_index"}, "provenance");
      slot.kind = QuerySlot::Kind::kLearned;
      slot.pool_index = as_u64(field(pj, "pool_index", "provenance"), "pool_index");
    } else {
      raise(ErrorCode::kSyntax, "unknown provenance kind '" + kind + "'");
    }
    if ((slot.kind == QuerySlot::Kind::kEx) != (g < set.n_ex)) {
      raise(ErrorCode::kIntegrity, "EX groups must precede learned groups");
    }
    set.provenance.push_back(std::move(slot));
  }
  const std::size_t count = set.groups * set.points * set.width;
  const std::string_view payload = bytes.substr(nl + 1);
  if (payload.size() != count * 8) {
    raise(ErrorCode::kSyntax, "query payload holds " + std::to_string(payload.size()) +
                                " bytes, expected " + std::to_string(count * 8));
  }
  set.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    set.values[i] = get_f64le(payload.data() + i * 8);
    if (!std::isfinite(set.values[i])) {
      raise(ErrorCode::kNonFinite, "non-finite query value at index " + std::to_string(i));
    }
  }
  return set;
}

void save_query_set(const ExQuerySet & set, const std::filesystem::path & path)
{
  write_file_atomic(path, query_set_to_bytes(set));
}

ExQuerySet load_query_set(const std::filesystem::path & path)
{
  return query_set_from_bytes(read_file(path));
}

std::vector<AssignmentRow> assignment_rows(const Assignment & assignment, const VectorMap & gt)
{
  std::vector<AssignmentRow> rows;
  rows.reserve(assignment.slots.size());
  for (std::size_t s = 0; s < assignment.slots.size(); ++s) {
    const auto & a = assignment.slots[s];
    AssignmentRow row{s, std::nullopt, a.pinned, a.cost};
    if (a.gt_index) {
      row.gt_id = gt.elements.at(*a.gt_index).id;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string assignment_to_table(std::span<const AssignmentRow> rows)
{
  std::string out = "# " + std::string(kAssignmentFormat) + " " + std::to_string(kFormatVersion) +
                    "\nslot\tgt_id\tpinned\tcost\n";
  for (const auto & r : rows) {
    out += std::to_string(r.slot) + "\t" + (r.gt_id ? *r.gt_id : "background") + "\t" +
           (r.pinned ? "1" : "0") + "\t" + shortest(r.cost) + "\n";
  }
  return out;
}

std::vector<AssignmentRow> assignment_from_table(std::string_view text)
{
  const std::string expected_head = "# " + std::string(kAssignmentFormat) + " " +
                                    std::to_string(kFormatVersion) + "\nslot\tgt_id\tpinned\tcost\n";
  if (text.substr(0, expected_head.size()) != expected_head) {
    raise(ErrorCode::kVersion, "not a " + std::string(kAssignmentFormat) + " table");
  }
  std::vector<AssignmentRow> rows;
  std::string_view rest = text.substr(expected_head.size());
  std::size_t line_no = 3;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    if (nl == std::string_view::npos) {
      raise(ErrorCode::kSyntax, "line " + std::to_string(line_no) + " is not terminated");
    }
    const std::string_view line = rest.substr(0, nl);
    rest = rest.substr(nl + 1);
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
      if (tab == std::string_view::npos) {
        break;
      }
      start = tab + 1;
    }
    const std::string where = "line " + std::to_string(line_no);
    if (cols.size() != 4) {
      raise(ErrorCode::kSyntax, where + " needs 4 columns");
    }
    AssignmentRow r;
    const auto slot_res = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), r.slot);
    if (slot_res.ec != std::errc{} || slot_res.ptr != cols[0].data() + cols[0].size() ||
        r.slot != rows.size()) {
      raise(ErrorCode::kSyntax, where + " has a bad slot index");
    }
    if (cols[1].empty()) {
      raise(ErrorCode::kSyntax, where + " has an empty gt_id");
    }
    if (cols[1] != "background") {
      r.gt_id = std::string(cols[1]);
    }
    if (cols[2] != "0" && cols[2] != "1") {
      raise(ErrorCode::kSyntax, where + " has a bad pinned flag");
    }
    r.pinned = cols[2] == "1";
    const auto cost_res = std::from_chars(cols[3].data(), cols[3].data() + cols[3].size(), r.cost);
    if (cost_res.ec != std::errc{} || cost_res.ptr != cols[3].data() + cols[3].size()) {
      raise(ErrorCode::kSyntax, where + " has a bad cost");
    }
    if (!std::isfinite(r.cost)) {
      raise(ErrorCode::kNonFinite, where + " has a non-finite cost");
    }
    rows.push_back(std::move(r));
    ++line_no;
  }
  return rows;
}

std::string evaluation_to_json(const ApReport & report)
{
  json doc{{"format", kEvaluationFormat}, {"version", kFormatVersion}, {"ap", ap_json(report)}};
  return dump(doc);
}

ApReport evaluation_from_json(std::string_view text)
{
  const json doc = parse(text);
  check_header(doc, kEvaluationFormat);
  allow_keys(doc, {"format", "version", "ap"}, "evaluation file");
  return ap_from(field(doc, "ap", "evaluation file"));
}

std::string report_to_json(const PipelineReport & report, bool include_timing)
{
  json runs = json::array();
  for (const auto & run : report.runs) {
    json samples = json::array();
    for (const auto & s : run.samples) {
      samples.push_back(json::array({s.ex_elements, s.with_source, s.pinned, s.solver_rows,
                                     s.solver_cols, s.unperturbed, s.early_exit}));
    }
    const std::size_t n = run.samples.size();
    const std::size_t with_source = run.total_with_source();
    json summary{
      {"pinned", run.total_pinned()},
      {"with_source", with_source},
      {"pin_rate", with_source == 0 ? 0.0
                                    : static_cast<double>(run.total_pinned()) /
                                        static_cast<double>(with_source)},
      {"early_exits", run.early_exits()},
      {"unperturbed", run.unperturbed()},
      {"unperturbed_fraction",
       n == 0 ? 0.0 : static_cast<double>(run.unperturbed()) / static_cast<double>(n)}};
    json rj{{"seed", run.seed}, {"ap", ap_json(run.ap)}, {"matching", std::move(summary)},
            {"samples", std::move(samples)}};
    if (include_timing) {
      rj["wall_ms"] = run.wall_ms;
    }
    runs.push_back(std::move(rj));
  }
  json aggregate = json::array();
  for (const auto & m : report.aggregate) {
    aggregate.push_back(json{{"key", m.key}, {"mean", m.mean}, {"std", m.std}});
  }
  const auto & o = report.options;
  json doc{{"format", kReportFormat},
           {"version", kFormatVersion},
           {"scenario", scenario_json(report.scenario)},
           {"estimator", json{{"mode", estimator_name(report.estimator.mode)},
                              {"sigma_pred", report.estimator.sigma_pred}}},
           {"options", json{{"slots", o.slots},
                            {"pin_threshold", o.pin_threshold},
                            {"change", o.change == ChangePolicy::kOracle ? "oracle" : "none"},
                            {"tau", o.tau},
                            {"variant_seed", o.variant_seed}}},
           {"corpus_size", report.corpus_size},
           {"sample_columns", json::array({"ex_elements", "with_source", "pinned", "solver_rows",
                                           "solver_cols", "unperturbed", "early_exit"})},
           {"runs", std::move(runs)},
           {"aggregate", std::move(aggregate)}};
  return dump(doc);
}

PipelineReport report_from_json(std::string_view text)
{
  const json doc = parse(text);
  check_header(doc, kReportFormat);
  allow_keys(doc, {"format", "version", "scenario", "estimator", "options", "corpus_size",
                   "sample_columns", "runs", "aggregate"},
             "report file");
  PipelineReport r;
  r.scenario = scenario_from(field(doc, "scenario", "report file"));
  const json & ej = field(doc, "estimator", "report file");
  allow_keys(ej, {"mode", "sigma_pred"}, "estimator");
  r.estimator = MockEstimatorSpec::parse(as_string(field(ej, "mode", "estimator"), "mode"));
  r.estimator.sigma_pred = as_double(field(ej, "sigma_pred", "estimator"), "sigma_pred");
  const json & oj = field(doc, "options", "report file");
  allow_keys(oj, {"slots", "pin_threshold", "change", "tau", "variant_seed"}, "options");
  r.options.slots = as_u64(field(oj, "slots", "options"), "slots");
  r.options.pin_threshold = as_double(field(oj, "pin_threshold", "options"), "pin_threshold");
  const std::string change = as_string(field(oj, "change", "options"), "change");
  if (change != "none" && change != "oracle") {
    raise(ErrorCode::kSyntax, "unknown change policy '" + change + "'");
  }
  r.options.change = change == "oracle" ? ChangePolicy::kOracle : ChangePolicy::kNone;
  r.options.tau = as_double(field(oj, "tau", "options"), "tau");
  r.options.variant_seed = as_u64(field(oj, "variant_seed", "options"), "variant_seed");
  r.corpus_size = as_u64(field(doc, "corpus_size", "report file"), "corpus_size");

  for (const auto & rj : as_array(field(doc, "runs", "report file"), "runs")) {
    allow_keys(rj, {"seed", "ap", "matching", "samples", "wall_ms"}, "run");
    RunReport run;
    run.seed = as_u64(field(rj, "seed", "run"), "seed");
    run.ap = ap_from(field(rj, "ap", "run"));
    for (const auto & sj : as_array(field(rj, "samples", "run"), "samples")) {
      if (!sj.is_array() || sj.size() != 7) {
        raise(ErrorCode::kSyntax, "sample rows need 7 columns");
      }
      run.samples.push_back({as_u64(sj[0], "sample"), as_u64(sj[1], "sample"),
                             as_u64(sj[2], "sample"), as_u64(sj[3], "sample"),
                             as_u64(sj[4], "sample"), as_bool(sj[5], "sample"),
                             as_bool(sj[6], "sample")});
    }
    if (rj.contains("wall_ms")) {
      run.wall_ms = as_double(rj["wall_ms"], "wall_ms");
    }
    if (run.samples.size() != r.corpus_size) {
      raise(ErrorCode::kIntegrity, "run sample count differs from corpus size");
    }
    const json & mj = field(rj, "matching", "run");
    allow_keys(mj, {"pinned", "with_source", "pin_rate", "early_exits", "unperturbed",
                    "unperturbed_fraction"},
               "matching");
    if (as_u64(field(mj, "pinned", "matching"), "pinned") != run.total_pinned() ||
        as_u64(field(mj, "early_exits", "matching"), "early_exits") != run.early_exits()) {
      raise(ErrorCode::kIntegrity, "run summary disagrees with its samples");
    }
    r.runs.push_back(std::move(run));
  }
  for (const auto & aj : as_array(field(doc, "aggregate", "report file"), "aggregate")) {
    allow_keys(aj, {"key", "mean", "std"}, "aggregate");
    r.aggregate.push_back({as_string(field(aj, "key", "aggregate"), "key"),
                           as_double(field(aj, "mean", "aggregate"), "mean"),
                           as_double(field(aj, "std", "aggregate"), "std")});
  }
  return r;
}
}  // namespace priormap::io
