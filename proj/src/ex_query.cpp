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

#include "priormap/ex_query.hpp"

#include "priormap/error.hpp"
#include "priormap/rng.hpp"

#include <algorithm>

namespace priormap
{
std::vector<QueryVector> encode_element(const MapElement & element, std::size_t width)
{
  if (width < kEncodedDims) {
    raise(ErrorCode::kInvalidArgument,
          "query width " + std::to_string(width) + " cannot hold coordinates and class");
  }
  std::vector<QueryVector> out;
  out.reserve(element.points.size());
  for (const auto & p : element.points) {
    QueryVector q(width, 0.0);
    q[0] = p.x;
    q[1] = p.y;
    q[2 + class_index(element.cls)] = 1.0;
    out.push_back(std::move(q));
  }
  return out;
}

DecodedElement decode_element(std::span<const QueryVector> queries)
{
  if (queries.empty()) {
    raise(ErrorCode::kInvalidArgument, "no queries to decode");
  }
  DecodedElement out;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto & q = queries[i];
    if (q.size() < kEncodedDims) {
      raise(ErrorCode::kInvalidArgument, "query narrower than the encoding");
    }
    std::size_t hot = kNumClasses;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      if (q[2 + c] == 1.0) {
        hot = hot == kNumClasses ? c : kNumClasses + 1;
      } else if (q[2 + c] != 0.0) {
        hot = kNumClasses + 1;
      }
    }
    if (hot >= kNumClasses) {
      raise(ErrorCode::kCorruptInput, "query " + std::to_string(i) + " has no valid class one-hot");
    }
    const auto cls = kAllClasses[hot];
    if (i > 0 && cls != out.cls) {
      raise(ErrorCode::kCorruptInput, "queries of one element disagree on class");
    }
    out.cls = cls;
    out.points.push_back({q[0], q[1]});
  }
  return out;
}

LearnedQueryPool LearnedQueryPool::stub(std::size_t groups, std::size_t points, std::size_t width,
                                        std::uint64_t seed)
{
  if (groups == 0 || points == 0 || width <= kEncodedDims) {
    raise(ErrorCode::kInvalidArgument,
          "learned pool needs positive sizes and width > " + std::to_string(kEncodedDims));
  }
  LearnedQueryPool pool;
  pool.groups_ = groups;
  pool.points_ = points;
  pool.width_ = width;
  pool.values_.resize(groups * points * width);
  Rng rng(seed);
  for (auto & v : pool.values_) {
    do {
      v = rng.uniform(-0.1, 0.1);
    } while (!(v > -0.1 && v < 0.1));
  }
  // A pool vector must never look like a zero-padded EX query.
  for (std::size_t q = 0; q < groups * points; ++q) {
    double * row = pool.values_.data() + q * width;
    if (std::all_of(row + kEncodedDims, row + width, [](double x) { return x == 0.0; })) {
      row[kEncodedDims] = 0.05;
    }
  }
  return pool;
}

ExQuerySet assemble_query_set(std::span<const MapElement> elements, const LearnedQueryPool & pool,
                              std::size_t groups, std::size_t points, std::size_t width)
{
  if (elements.size() > groups) {
    raise(ErrorCode::kOverflow, std::to_string(elements.size() - groups) +
                                  " map elements exceed the " + std::to_string(groups) +
                                  " available query groups");
  }
  const std::size_t n_learned = groups - elements.size();
  if (n_learned > 0 &&
      (pool.groups() < n_learned || pool.points() != points || pool.width() != width)) {
    raise(ErrorCode::kInvalidArgument, "learned pool is too small or has the wrong shape");
  }

  ExQuerySet set;
  set.groups = groups;
  set.points = points;
  set.width = width;
  set.n_ex = elements.size();
  set.values.reserve(groups * points * width);
  set.provenance.reserve(groups);
  for (const auto & e : elements) {
    if (e.points.size() != points) {
      raise(ErrorCode::kCanonicalForm, "element '" + e.id + "' has " +
                                         std::to_string(e.points.size()) + " points, expected " +
                                         std::to_string(points));
    }
    for (const auto & q : encode_element(e, width)) {
      set.values.insert(set.values.end(), q.begin(), q.end());
    }
    set.provenance.push_back({QuerySlot::Kind::kEx, e.id, 0});
  }
  for (std::size_t g = 0; g < n_learned; ++g) {
    for (std::size_t i = 0; i < points; ++i) {
      const auto q = pool.query(g, i);
      set.values.insert(set.values.end(), q.begin(), q.end());
    }
    set.provenance.push_back({QuerySlot::Kind::kLearned, {}, g});
  }
  return set;
}
}  // namespace priormap
