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


#include "priormap/attribution.hpp"
#include "priormap/bench.hpp"
#include "priormap/error.hpp"
#include "priormap/ex_query.hpp"
#include "priormap/metrics.hpp"
#include "priormap/persistence.hpp"
#include "priormap/perturb.hpp"
#include "priormap/render.hpp"
#include "priormap/simulation.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace priormap;

namespace
{
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;

int exit_code_for(ErrorCode code)
{
  switch (code) {
    case ErrorCode::kInvalidArgument: return kExitUsage;
    case ErrorCode::kIo: return kExitIo;
    case ErrorCode::kDegenerateGeometry:
    case ErrorCode::kNonFinite:
    case ErrorCode::kOverflow:
    case ErrorCode::kCorruptInput:
    case ErrorCode::kSyntax:
    case ErrorCode::kVersion:
    case ErrorCode::kClassTag:
    case ErrorCode::kCanonicalForm:
    case ErrorCode::kDuplicateId:
    case ErrorCode::kIntegrity: return kExitData;
  }
  return kExitFailure;
}

[[noreturn]] void usage_error(const std::string & msg) { raise(ErrorCode::kInvalidArgument, msg); }

fs::path output_path(const std::string & flag, const char * default_name)
{
  if (!flag.empty()) {
    return flag;
  }
  const char * dir = std::getenv("PRIORMAP_OUT_DIR");
  return (dir != nullptr && *dir != '\0') ? fs::path(dir) / default_name : fs::path(default_name);
}

std::vector<std::string> split(const std::string & text, char sep)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) {
      return out;
    }
    start = pos + 1;
  }
}

double parse_double(const std::string & text, const std::string & what)
{
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    usage_error("invalid " + what + " '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string & text, const std::string & what)
{
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    usage_error("invalid " + what + " '" + text + "'");
  }
  return v;
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string & text, const std::string & what, F parse_one)
{
  std::vector<T> out;
  for (const auto & item : split(text, ',')) {
    out.push_back(static_cast<T>(parse_one(item, what)));
  }
  return out;
}

ScenarioSpec scenario_spec(const std::string & tag, const std::vector<std::string> & params)
{
  const auto kind = scenario_from_string(tag);
  if (!kind) {
    usage_error("unknown scenario '" + tag + "' (expected s1, s2a, s2b, s3a or s3b)");
  }
  ScenarioSpec spec;
  spec.kind = *kind;
  for (const auto & kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      usage_error("--param expects key=value, got '" + kv + "'");
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (key == "exact_delete" && (value == "true" || value == "false")) {
      spec.set_param(key, value == "true" ? 1.0 : 0.0);
      continue;
    }
    spec.set_param(key, parse_double(value, "value for " + key));
  }
  spec.validate();
  return spec;
}

const PerturbedMap & pick_variant(const io::VariantSet & set, std::size_t index)
{
  if (index >= set.variants.size()) {
    usage_error("--index " + std::to_string(index) + " is out of range (file has " +
                std::to_string(set.variants.size()) + " variants)");
  }
  return set.variants[index];
}

void add_param_flag(CLI::App * cmd, std::vector<std::string> & params)
{
  cmd->add_option("--param", params,
                  "Scenario parameter override key=value. Defaults: sigma_shift=1, sigma_point=5, "
                  "delete_frac=0.5, add_frac=0.5, mix_p=0.5, warp_amp_h=1, warp_amp_v=1, "
                  "warp_inclination=3, grid_spacing=10, grid_sigma=1, crossing_width_m=4, "
                  "crossing_height_m=3, exact_delete=false");
}

void print_table(const ApReport & r) { std::fputs(to_table(r).c_str(), stdout); }
}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"priormap: existing-map perturbation, query encoding, matching and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "priormap 1.0.0");

  std::function<void()> action;

  // synth
  std::uint64_t synth_seed = 0;
  std::size_t synth_index = 0;
  double synth_margin = 0.0;
  std::string synth_out;
  auto * synth = app.add_subcommand("synth", "Generate a synthetic ground-truth map");
  synth->add_option("--seed", synth_seed, "Corpus seed")->capture_default_str();
  synth->add_option("--index", synth_index, "Sample index within the corpus")->capture_default_str();
  synth->add_option("--margin", synth_margin, "Keep geometry this far (m) inside the patch")
    ->capture_default_str();
  synth->add_option("--out", synth_out, "Map file (default map.json under $PRIORMAP_OUT_DIR)");
  synth->callback([&] {
    action = [&] {
      if (!(synth_margin >= 0.0 && synth_margin < 10.0)) {
        usage_error("--margin must lie in [0, 10)");
      }
      SynthSpec spec;
      spec.margin_m = synth_margin;
      Rng rng(derive_seed(synth_seed, synth_index));
      const VectorMap map = synth_map(spec, rng);
      const fs::path out = output_path(synth_out, "map.json");
      io::save_map(map, out);
      fmt::print("wrote {} elements to {}\n", map.elements.size(), out.string());
    };
  });

  // perturb
  std::string perturb_map;
  std::string perturb_scenario = "s2a";
  std::size_t perturb_variants = 1;
  std::uint64_t perturb_seed = 0;
  std::vector<std::string> perturb_params;
  std::string perturb_out;
  auto * perturb_cmd = app.add_subcommand("perturb", "Write perturbed variants of a map");
  perturb_cmd->add_option("--map", perturb_map, "Source map file")->required();
  perturb_cmd->add_option("--scenario", perturb_scenario, "s1 | s2a | s2b | s3a | s3b")
    ->capture_default_str();
  perturb_cmd->add_option("--variants", perturb_variants, "Number of variants (s1 always writes 1)")
    ->capture_default_str();
  perturb_cmd->add_option("--seed", perturb_seed, "Variant seed")->capture_default_str();
  add_param_flag(perturb_cmd, perturb_params);
  perturb_cmd->add_option("--out", perturb_out, "Variant-set file (default variants.json)");
  perturb_cmd->callback([&] {
    action = [&] {
      const ScenarioSpec spec = scenario_spec(perturb_scenario, perturb_params);
      if (perturb_variants == 0) {
        usage_error("--variants must be at least 1");
      }
      const VectorMap source = io::load_map(perturb_map);
      if (spec.kind == ScenarioKind::kS1 && perturb_variants > 1) {
        fmt::print(stderr, "warning: scenario s1 is deterministic; writing 1 variant instead of {}\n",
                   perturb_variants);
      }
      io::VariantSet set;
      set.source_name = fs::path(perturb_map).filename().string();
      set.source = source;
      set.scenario = spec;
      set.seed = perturb_seed;
      set.variants = generate_variants(source, spec, perturb_variants, perturb_seed);
      const fs::path out = output_path(perturb_out, "variants.json");
      io::save_variants(set, out);
      fmt::print("wrote {} variant(s) to {}\n", set.variants.size(), out.string());
    };
  });

  // encode
  std::string encode_map;
  std::string encode_variants;
  std::size_t encode_index = 0;
  std::size_t encode_groups = kDefaultMaxElements;
  std::size_t encode_width = kDefaultQueryWidth;
  std::uint64_t encode_pool_seed = 0;
  std::string encode_out;
  auto * encode = app.add_subcommand("encode", "Encode existing-map elements as a query set");
  auto * encode_map_opt = encode->add_option("--map", encode_map, "Map file to encode");
  auto * encode_var_opt = encode->add_option("--variants", encode_variants, "Variant-set file");
  encode_map_opt->excludes(encode_var_opt);
  encode->add_option("--index", encode_index, "Variant index")->capture_default_str();
  encode->add_option("--groups", encode_groups, "Total element groups N")->capture_default_str();
  encode->add_option("--width", encode_width, "Query width H")->capture_default_str();
  encode->add_option("--pool-seed", encode_pool_seed, "Seed of the stand-in learned queries")
    ->capture_default_str();
  encode->add_option("--out", encode_out, "Query-set file (default queries.bin)");
  encode->callback([&] {
    action = [&] {
      if (encode_map.empty() == encode_variants.empty()) {
        usage_error("encode needs exactly one of --map or --variants");
      }
      if (encode_width <= kEncodedDims) {
        usage_error("--width must exceed " + std::to_string(kEncodedDims));
      }
      VectorMap map;
      if (!encode_map.empty()) {
        map = io::load_map(encode_map);
      } else {
        const auto set = io::load_variants(encode_variants);
        map = pick_variant(set, encode_index).map;
      }
      const std::size_t points = map.elements.empty() ? kCanonicalPoints : map.elements[0].points.size();
      const auto pool = LearnedQueryPool::stub(encode_groups, points, encode_width, encode_pool_seed);
      const auto qs = assemble_query_set(map.elements, pool, encode_groups, points, encode_width);
      const fs::path out = output_path(encode_out, "queries.bin");
      io::save_query_set(qs, out);
      fmt::print("wrote {} x {} x {} queries ({} from the map) to {}\n", qs.groups, qs.points,
                 qs.width, qs.n_ex, out.string());
    };
  });

  // match
  std::string match_gt;
  std::string match_variants;
  std::size_t match_index = 0;
  std::string match_pred;
  double match_threshold = kPinThreshold;
  bool match_no_pin = false;
  bool match_mean_of_norms = false;
  std::string match_out;
  auto * match = app.add_subcommand("match", "Pre-attribute and match predictions to ground truth");
  match->add_option("--gt", match_gt, "Ground-truth map file")->required();
  match->add_option("--variants", match_variants, "Variant-set file with the existing map")
    ->required();
  match->add_option("--index", match_index, "Variant index")->capture_default_str();
  match->add_option("--pred", match_pred,
                    "Detection file; detection k fills slot k (default: the existing map itself)");
  match->add_option("--threshold", match_threshold, "Pin threshold in metres")->capture_default_str();
  match->add_flag("--no-preattribution", match_no_pin, "Solve every slot with the full solver");
  match->add_flag("--mean-of-norms", match_mean_of_norms,
                  "Score pins by the mean of per-point offset norms");
  match->add_option("--out", match_out, "Assignment table (default assignment.tsv)");
  match->callback([&] {
    action = [&] {
      if (!(match_threshold >= 0.0)) {
        usage_error("--threshold must be non-negative");
      }
      const VectorMap gt = io::load_map(match_gt);
      const auto set = io::load_variants(match_variants);
      const PerturbedMap & ex = pick_variant(set, match_index);
      std::vector<std::optional<MapElement>> preds;
      if (match_pred.empty()) {
        for (const auto & e : ex.map.elements) {
          preds.emplace_back(e);
        }
      } else {
        for (const auto & d : io::load_detections(match_pred).detections) {
          preds.emplace_back(d.element);
        }
      }
      const std::size_t slots = std::max({preds.size(), ex.map.elements.size(), gt.elements.size()});
      preds.resize(slots);
      PartialAssignment partial;
      if (match_no_pin) {
        for (std::size_t s = 0; s < slots; ++s) {
          partial.free_slots.push_back(s);
        }
        for (std::size_t g = 0; g < gt.elements.size(); ++g) {
          partial.free_gts.push_back(g);
        }
      } else {
        partial = pre_attribute(ex, gt, match_threshold, slots,
                                match_mean_of_norms ? ScoreMode::kMeanOfNorms : ScoreMode::kMeanThenNorm);
      }
      const Assignment a = match_with_preattribution(preds, gt, partial);
      const auto rows = io::assignment_rows(a, gt);
      const fs::path out = output_path(match_out, "assignment.tsv");
      io::write_file_atomic(out, io::assignment_to_table(rows));
      fmt::print("{} slots, {} pinned, solver {}x{}, total cost {:.6g}; wrote {}\n", slots,
                 partial.pinned.size(), a.solver_rows, a.solver_cols, a.total_cost(), out.string());
    };
  });

  // eval
  std::string eval_gt;
  std::string eval_pred;
  std::string eval_variants;
  std::size_t eval_index = 0;
  std::string eval_estimator;
  std::uint64_t eval_seed = 0;
  std::string eval_save_pred;
  std::string eval_out;
  auto * eval = app.add_subcommand("eval", "Chamfer-based average precision of detections");
  eval->add_option("--gt", eval_gt, "Ground-truth map file")->required();
  auto * ep = eval->add_option("--pred", eval_pred, "Detection file");
  auto * ev = eval->add_option("--variants", eval_variants,
                               "Variant-set file; with --estimator, predict from the existing map");
  ep->excludes(ev);
  eval->add_option("--index", eval_index, "Variant index")->capture_default_str();
  eval->add_option("--estimator", eval_estimator,
                   "mode[:sigma] with mode copy_ex | oracle_blend | noisy_gt (sigma default 0.5)");
  eval->add_option("--seed", eval_seed, "Estimator noise seed")->capture_default_str();
  eval->add_option("--save-pred", eval_save_pred, "Also write the mock detections here");
  eval->add_option("--out", eval_out, "Evaluation file (default evaluation.json)");
  eval->callback([&] {
    action = [&] {
      if (eval_pred.empty() == eval_variants.empty()) {
        usage_error("eval needs exactly one of --pred or --variants");
      }
      if (!eval_variants.empty() && eval_estimator.empty()) {
        usage_error("--variants needs --estimator");
      }
      std::optional<MockEstimatorSpec> est;
      if (!eval_estimator.empty()) {
        est = MockEstimatorSpec::parse(eval_estimator);
      }
      const VectorMap gt = io::load_map(eval_gt);
      DetectionResult preds;
      if (!eval_pred.empty()) {
        preds = io::load_detections(eval_pred);
      } else {
        const auto set = io::load_variants(eval_variants);
        Rng rng(eval_seed);
        preds = mock_estimate(gt, pick_variant(set, eval_index), *est, rng).result;
      }
      if (!eval_save_pred.empty()) {
        io::save_detections(preds, gt.extent, eval_save_pred);
      }
      const ApReport r = evaluate(preds, gt);
      const fs::path out = output_path(eval_out, "evaluation.json");
      io::write_file_atomic(out, io::evaluation_to_json(r));
      print_table(r);
    };
  });

  // pipeline
  std::size_t pipe_corpus = 200;
  std::uint64_t pipe_corpus_seed = 0;
  std::string pipe_scenario = "s2a";
  std::vector<std::string> pipe_params;
  std::string pipe_estimator = "noisy_gt:0.5";
  std::string pipe_seeds = "0,1,2";
  std::size_t pipe_slots = 50;
  double pipe_threshold = kPinThreshold;
  std::string pipe_change = "none";
  double pipe_tau = 0.5;
  std::uint64_t pipe_variant_seed = 0;
  bool pipe_timing = false;
  std::string pipe_out;
  auto * pipeline = app.add_subcommand("pipeline", "Run the mock detection pipeline over a corpus");
  pipeline->add_option("--corpus-size", pipe_corpus, "Synthetic maps in the corpus")
    ->capture_default_str();
  pipeline->add_option("--corpus-seed", pipe_corpus_seed, "Corpus seed")->capture_default_str();
  pipeline->add_option("--scenario", pipe_scenario, "s1 | s2a | s2b | s3a | s3b")
    ->capture_default_str();
  add_param_flag(pipeline, pipe_params);
  pipeline->add_option("--estimator", pipe_estimator,
                       "mode[:sigma] with mode copy_ex | oracle_blend | noisy_gt")
    ->capture_default_str();
  pipeline->add_option("--seeds", pipe_seeds, "Comma-separated run seeds")->capture_default_str();
  pipeline->add_option("--slots", pipe_slots, "Minimum prediction slots per sample")
    ->capture_default_str();
  pipeline->add_option("--threshold", pipe_threshold, "Pin threshold in metres")
    ->capture_default_str();
  pipeline->add_option("--change", pipe_change, "Change score: none | oracle")->capture_default_str();
  pipeline->add_option("--tau", pipe_tau, "Substitute the existing map when change < tau")
    ->capture_default_str();
  pipeline->add_option("--variant-seed", pipe_variant_seed, "Seed of the existing-map variants")
    ->capture_default_str();
  pipeline->add_flag("--timing", pipe_timing, "Store per-run wall time in the report");
  pipeline->add_option("--out", pipe_out, "Report file (default report.json)");
  pipeline->callback([&] {
    action = [&] {
      const ScenarioSpec spec = scenario_spec(pipe_scenario, pipe_params);
      const MockEstimatorSpec est = MockEstimatorSpec::parse(pipe_estimator);
      const auto seeds = parse_list<std::uint64_t>(pipe_seeds, "seed", parse_u64);
      if (pipe_corpus == 0) {
        usage_error("--corpus-size must be at least 1");
      }
      if (pipe_change != "none" && pipe_change != "oracle") {
        usage_error("unknown --change '" + pipe_change + "' (expected none or oracle)");
      }
      if (!(pipe_tau >= 0.0 && pipe_tau <= 1.0)) {
        usage_error("--tau must lie in [0, 1]");
      }
      PipelineOptions opts;
      opts.slots = pipe_slots;
      opts.pin_threshold = pipe_threshold;
      opts.change = pipe_change == "oracle" ? ChangePolicy::kOracle : ChangePolicy::kNone;
      opts.tau = pipe_tau;
      opts.variant_seed = pipe_variant_seed;
      const auto corpus = synth_corpus(SynthSpec{}, pipe_corpus, pipe_corpus_seed);
      const PipelineReport report = run_pipeline(corpus, spec, est, seeds, opts);
      const fs::path out = output_path(pipe_out, "report.json");
      io::write_file_atomic(out, io::report_to_json(report, pipe_timing));
      for (const auto & m : report.aggregate) {
        fmt::print("{} {:.4f} +- {:.4f}\n", m.key, m.mean, m.std);
      }
      std::size_t early = 0;
      std::size_t unperturbed = 0;
      for (const auto & run : report.runs) {
        early += run.early_exits();
        unperturbed += run.unperturbed();
      }
      const double denom = static_cast<double>(report.runs.size() * report.corpus_size);
      fmt::print("unperturbed_fraction {:.4f}\nearly_exit_fraction {:.4f}\n",
                 static_cast<double>(unperturbed) / denom, static_cast<double>(early) / denom);
      fmt::print("wrote {}\n", out.string());
    };
  });

  // render
  std::string render_map;
  std::string render_variants;
  std::string render_pred;
  std::string render_pred_extent_map;
  std::optional<std::size_t> render_index;
  bool render_annotate = false;
  double render_min_conf = 0.0;
  double render_scale = 10.0;
  std::string render_out;
  auto * render = app.add_subcommand("render", "Draw a map, variants or detections as SVG");
  auto * rm = render->add_option("--map", render_map, "Map file");
  auto * rv = render->add_option("--variants", render_variants, "Variant-set file");
  auto * rp = render->add_option("--pred", render_pred, "Detection file");
  rm->excludes(rv)->excludes(rp);
  rv->excludes(rp);
  render->add_option("--index", render_index, "Draw only this variant (default: source and all)");
  render->add_flag("--annotate", render_annotate, "Label variant elements with their source ids");
  render->add_option("--min-confidence", render_min_conf, "Hide weaker detections")
    ->capture_default_str();
  render->add_option("--scale", render_scale, "Pixels per metre")->capture_default_str();
  render->add_option("--out", render_out, "SVG file (default render.svg)");
  render->callback([&] {
    action = [&] {
      const int given = int(!render_map.empty()) + int(!render_variants.empty()) + int(!render_pred.empty());
      if (given != 1) {
        usage_error("render needs exactly one of --map, --variants or --pred");
      }
      if (!(render_scale > 0.0)) {
        usage_error("--scale must be positive");
      }
      std::vector<SvgPanel> panels;
      if (!render_map.empty()) {
        panels.push_back(panel_from_map(io::load_map(render_map), fs::path(render_map).filename().string()));
      } else if (!render_variants.empty()) {
        const auto set = io::load_variants(render_variants);
        const auto title = [&](std::size_t i) {
          return fmt::format("{} variant {} ({})", set.source_name, i, to_string(set.scenario.kind));
        };
        if (render_index) {
          panels.push_back(panel_from_variant(pick_variant(set, *render_index), title(*render_index),
                                              render_annotate));
        } else {
          panels.push_back(panel_from_map(set.source, set.source_name + " source"));
          for (std::size_t i = 0; i < set.variants.size(); ++i) {
            panels.push_back(panel_from_variant(set.variants[i], title(i), render_annotate));
          }
        }
      } else {
        PatchExtent extent;
        const auto det = io::load_detections(render_pred, &extent);
        panels.push_back(panel_from_detections(det, extent, fs::path(render_pred).filename().string(),
                                               render_min_conf));
      }
      const fs::path out = output_path(render_out, "render.svg");
      io::write_file_atomic(out, render_svg(panels, render_scale));
      fmt::print("wrote {} panel(s) to {}\n", panels.size(), out.string());
    };
  });

  // bench
  std::string bench_sizes = "10,25,50,100,200";
  std::string bench_pins = "0.0,0.25,0.5,0.75";
  std::size_t bench_repeats = 9;
  std::uint64_t bench_seed = 0;
  std::string bench_family = "rank_one";
  std::string bench_out;
  auto * bench = app.add_subcommand("bench", "Time the solver with and without pre-attribution");
  bench->add_option("--sizes", bench_sizes, "Comma-separated slot counts N")->capture_default_str();
  bench->add_option("--pin-fracs", bench_pins, "Comma-separated pinned fractions")
    ->capture_default_str();
  bench->add_option("--repeats", bench_repeats, "Timed repetitions per cell (median reported)")
    ->capture_default_str();
  bench->add_option("--seed", bench_seed, "Instance seed")->capture_default_str();
  bench->add_option("--family", bench_family, "Solver cost family: rank_one | uniform")
    ->capture_default_str();
  bench->add_option("--out", bench_out, "Table file (default bench.tsv)");
  bench->callback([&] {
    action = [&] {
      BenchConfig cfg;
      cfg.sizes = parse_list<std::size_t>(bench_sizes, "size", parse_u64);
      cfg.pin_fracs = parse_list<double>(bench_pins, "pin fraction", parse_double);
      for (const double p : cfg.pin_fracs) {
        if (!(p >= 0.0 && p <= 1.0)) {
          usage_error("pin fractions must lie in [0, 1]");
        }
      }
      cfg.repeats = bench_repeats;
      cfg.seed = bench_seed;
      const auto family = cost_family_from_string(bench_family);
      if (!family) {
        usage_error("unknown --family '" + bench_family + "'");
      }
      cfg.family = *family;
      const auto rows = run_bench(cfg);
      const std::string table = bench_to_table(rows);
      const fs::path out = output_path(bench_out, "bench.tsv");
      io::write_file_atomic(out, table);
      std::fputs(table.c_str(), stdout);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    fmt::print(stderr, "error: {}\n", e.what());
    const auto subs = app.get_subcommands();
    std::fputs((subs.empty() ? app.help() : subs.back()->help()).c_str(), stderr);
    return kExitUsage;
  }
  try {
    action();
  } catch (const Error & e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception & e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFailure;
  }
  return kExitOk;
}
