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

#include "priormap/render.hpp"

#include "priormap/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace priormap
{
namespace
{
constexpr double kMarginPx = 20.0;
constexpr double kTitlePx = 18.0;

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  return s == "-0.00" ? "0.00" : s;
}

std::string escape(std::string_view text)
{
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char * stroke_of(ElementClass cls)
{
  switch (cls) {
    case ElementClass::kDivider: return "#00ff00";
    case ElementClass::kPedCrossing: return "#1f4fff";
    case ElementClass::kBoundary: return "#008000";
  }
  return "#000000";
}
}  // namespace

SvgPanel panel_from_map(const VectorMap & map, std::string title)
{
  SvgPanel p;
  p.title = std::move(title);
  p.extent = map.extent;
  p.elements = map.elements;
  return p;
}

SvgPanel panel_from_variant(const PerturbedMap & variant, std::string title, bool annotate)
{
  SvgPanel p = panel_from_map(variant.map, std::move(title));
  if (annotate) {
    for (const auto & e : variant.map.elements) {
      const auto * c = variant.correspondence_of(e.id);
      p.labels.push_back(c != nullptr && c->source_id ? *c->source_id : std::string("new"));
    }
  }
  return p;
}

SvgPanel panel_from_detections(const DetectionResult & result, const PatchExtent & extent,
                               std::string title, double min_confidence)
{
  SvgPanel p;
  p.title = std::move(title);
  p.extent = extent;
  for (const auto & d : result.detections) {
    if (d.confidence < min_confidence) {
      continue;
    }
    p.elements.push_back(d.element);
    p.opacity.push_back(std::clamp(d.confidence, 0.0, 1.0));
  }
  return p;
}

std::string render_svg(std::span<const SvgPanel> panels, double px_per_m)
{
  if (!(px_per_m > 0.0) || !std::isfinite(px_per_m)) {
    raise(ErrorCode::kInvalidArgument, "px_per_m must be positive");
  }
  double doc_w = 2.0 * kMarginPx;
  double doc_h = kMarginPx;
  for (const auto & p : panels) {
    doc_w = std::max(doc_w, p.extent.width_m * px_per_m + 2.0 * kMarginPx);
    doc_h += kTitlePx + p.extent.height_m * px_per_m + kMarginPx;
  }

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(doc_w) + "\" height=\"" +
         num(doc_h) + "\" viewBox=\"0 0 " + num(doc_w) + " " + num(doc_h) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(doc_w) + "\" height=\"" + num(doc_h) +
         "\" fill=\"#ffffff\"/>\n";

  double top = kMarginPx;
  for (const auto & p : panels) {
    const PatchExtent & ext = p.extent;
    const double frame_top = top + kTitlePx;
    const auto sx = [&](const Point & q) { return kMarginPx + (q.y - ext.y_min()) * px_per_m; };
    const auto sy = [&](const Point & q) { return frame_top + (ext.x_max() - q.x) * px_per_m; };

    out += "<g>\n";
    out += "<text x=\"" + num(kMarginPx) + "\" y=\"" + num(top + kTitlePx - 5.0) +
           "\" font-family=\"monospace\" font-size=\"12\">" + escape(p.title) + "</text>\n";
    out += "<rect x=\"" + num(kMarginPx) + "\" y=\"" + num(frame_top) + "\" width=\"" +
           num(ext.width_m * px_per_m) + "\" height=\"" + num(ext.height_m * px_per_m) +
           "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    for (std::size_t i = 0; i < p.elements.size(); ++i) {
      const MapElement & e = p.elements[i];
      if (e.points.empty()) {
        continue;
      }
      std::string pts;
      for (const auto & q : e.points) {
        if (!pts.empty()) {
          pts += ' ';
        }
        pts += num(sx(q)) + "," + num(sy(q));
      }
      const std::string stroke = stroke_of(e.cls);
      const std::string op = i < p.opacity.size() ? " opacity=\"" + num(p.opacity[i]) + "\"" : "";
      if (e.closed) {
        out += "<polygon points=\"" + pts + "\" fill=\"" + stroke + "\" fill-opacity=\"0.25\" stroke=\"" +
               stroke + "\" stroke-width=\"1.5\"" + op + "/>\n";
      } else {
        out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + stroke +
               "\" stroke-width=\"2\"" + op + "/>\n";
      }
      if (i < p.labels.size() && !p.labels[i].empty()) {
        const Point & q = e.points[e.points.size() / 2];
        out += "<text x=\"" + num(sx(q) + 2.0) + "\" y=\"" + num(sy(q) - 2.0) +
               "\" font-family=\"monospace\" font-size=\"9\" fill=\"#333333\">" +
               escape(p.labels[i]) + "</text>\n";
      }
    }
    out += "</g>\n";
    top = frame_top + ext.height_m * px_per_m + kMarginPx;
  }
  out += "</svg>\n";
  return out;
}
}  // namespace priormap
