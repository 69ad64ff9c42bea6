#include "ricb/cli.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ricb/bank.hpp"
#include "ricb/error.hpp"
#include "ricb/evalharness.hpp"
#include "ricb/search.hpp"
#include "ricb/service.hpp"
#include "ricb/synthetic.hpp"

namespace ricb::cli {

namespace {

const std::vector<std::string> kMetricNames = {"l1", "l2", "cosine", "manhattan", "euclidean"};

struct OadOptions {
  std::string kind = "none";
  std::string gt_path;
  double sigma = 5.0;
  double gross = 0.0;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd, const std::vector<std::string>& kinds, const std::string& default_kind,
           bool with_noise) {
    kind = default_kind;
    cmd->add_option("--oad", kind, "Orientation estimator")
        ->check(CLI::IsMember(kinds))
        ->capture_default_str();
    if (with_noise) {
      cmd->add_option("--gt", gt_path, "Ground-truth CSV (id,angle_deg) for --oad oracle");
      cmd->add_option("--oad-sigma", sigma, "Oracle Gaussian noise, degrees")
          ->check(CLI::NonNegativeNumber)
          ->capture_default_str();
      cmd->add_option("--oad-gross", gross, "Oracle gross-error probability")
          ->check(CLI::Range(0.0, 1.0))
          ->capture_default_str();
    }
  }

  EstimatorConfig config(std::uint64_t s) const {
    EstimatorConfig cfg;
    cfg.kind = parse_estimator_kind(kind);
    cfg.noise_sigma_deg = sigma;
    cfg.gross_error_rate = gross;
    cfg.seed = s;
    return cfg;
  }

  std::optional<GroundTruthTable> truth() const {
    if (kind != "oracle") return std::nullopt;
    if (gt_path.empty()) {
      throw Error(ErrorCode::MissingGroundTruth, "--oad oracle needs --gt CSV");
    }
    return GroundTruthTable::load_csv(gt_path);
  }
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::vector<LabeledImage> bank_images(const FeatureBank& bank, std::size_t limit) {
  std::size_t n = limit == 0 ? bank.size() : std::min(limit, bank.size());
  std::vector<LabeledImage> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RecordMeta& m = bank.meta(i);
    if (m.source_path.empty()) {
      throw Error(ErrorCode::FileNotFound, "record " + m.id + " has no source image");
    }
    out.push_back({m.id, m.label, m.source_path, decode_image(m.source_path)});
  }
  return out;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Rotation-invariant image retrieval: indexing, querying, evaluation and serving"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // index
  auto* index = app.add_subcommand("index", "Build a feature bank from a category-directory dataset");
  std::string index_dataset, index_out;
  OadOptions index_oad;
  DescriptorConfig index_desc;
  std::uint64_t index_seed = 0;
  index->add_option("--dataset", index_dataset, "Dataset root (one subdirectory per label)")->required();
  index->add_option("--out", index_out, "Output bank path")->required();
  index_oad.add(index, {"none", "moments", "oracle"}, "none", true);
  index->add_option("--grid", index_desc.grid, "Descriptor grid cells per side")->capture_default_str();
  index->add_option("--canvas", index_desc.canvas, "Descriptor canvas size, pixels")->capture_default_str();
  index->add_option("--seed", index_seed, "Oracle seed")->capture_default_str();

  // query
  auto* query = app.add_subcommand("query", "Retrieve the nearest bank records for one image");
  std::string query_bank, query_image_path, query_metric = "l2";
  std::size_t query_k = 20;
  OadOptions query_oad;
  query->add_option("--bank", query_bank, "Bank path")->required();
  query->add_option("--image", query_image_path, "Query image (PNG/JPEG/BMP)")->required();
  query->add_option("--k", query_k, "Number of hits")->check(CLI::PositiveNumber)->capture_default_str();
  query->add_option("--metric", query_metric, "Distance metric")->check(CLI::IsMember(kMetricNames))->capture_default_str();
  query_oad.add(query, {"none", "moments"}, "none", false);

  // eval-rotation
  auto* evalrot = app.add_subcommand("eval-rotation", "Precision@k with and without orientation correction under rotation corruption");
  ExperimentConfig exp;
  std::string eval_dataset, eval_out, eval_metric = "l2";
  OadOptions eval_oad;
  bool real_angles = false;
  evalrot->add_option("--dataset", eval_dataset, "Dataset root")->required();
  evalrot->add_option("--percents", exp.percentages, "Comma-separated rotated percentages")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 100.0))
      ->capture_default_str();
  evalrot->add_option("--k", exp.k, "Precision scope")->check(CLI::PositiveNumber)->capture_default_str();
  evalrot->add_option("--metric", eval_metric, "Distance metric")->check(CLI::IsMember(kMetricNames))->capture_default_str();
  eval_oad.add(evalrot, {"none", "moments", "oracle"}, "oracle", false);
  evalrot->add_option("--oad-sigma", eval_oad.sigma, "Oracle Gaussian noise, degrees")->check(CLI::NonNegativeNumber)->capture_default_str();
  evalrot->add_option("--oad-gross", eval_oad.gross, "Oracle gross-error probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  evalrot->add_option("--seed", exp.seed, "Seed for corruption and oracle draws")->capture_default_str();
  evalrot->add_flag("--include-self", exp.include_self, "Count the query's own record");
  evalrot->add_flag("--real-angles", real_angles, "Draw real-valued angles instead of integers");
  evalrot->add_option("--grid", exp.descriptor.grid, "Descriptor grid cells per side")->capture_default_str();
  evalrot->add_option("--canvas", exp.descriptor.canvas, "Descriptor canvas size, pixels")->capture_default_str();
  evalrot->add_option("--out", eval_out, "Output CSV")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Per-query retrieval latency with and without orientation correction");
  std::string bench_bank, bench_out, bench_metric = "l2";
  std::size_t bench_sample = 0, bench_k = 20, bench_max_queries = 0;
  std::uint64_t bench_seed = 0;
  OadOptions bench_oad;
  bench->add_option("--bank", bench_bank, "Bank path")->required();
  bench->add_option("--sample", bench_sample, "Scan a seeded random sample of this many records")->check(CLI::PositiveNumber);
  bench->add_option("--k", bench_k, "Number of hits")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--metric", bench_metric, "Distance metric")->check(CLI::IsMember(kMetricNames))->capture_default_str();
  bench_oad.add(bench, {"none", "moments"}, "moments", false);
  bench->add_option("--max-queries", bench_max_queries, "Use at most this many bank images as queries (0 = all)")->capture_default_str();
  bench->add_option("--seed", bench_seed, "Sampling seed")->capture_default_str();
  bench->add_option("--out", bench_out, "Output CSV")->required();

  // estimate-rotated
  auto* estrot = app.add_subcommand("estimate-rotated", "Estimate the fraction of rotated images from a random sample");
  std::string est_dataset;
  std::size_t est_sample = 0;
  double est_threshold = 5.0;
  std::uint64_t est_seed = 0;
  OadOptions est_oad;
  estrot->add_option("--dataset", est_dataset, "Dataset root")->required();
  estrot->add_option("--sample", est_sample, "Sample size")->required()->check(CLI::PositiveNumber);
  estrot->add_option("--threshold", est_threshold, "Degrees from upright that count as rotated")->check(CLI::NonNegativeNumber)->capture_default_str();
  est_oad.add(estrot, {"moments", "oracle"}, "moments", true);
  estrot->add_option("--seed", est_seed, "Sampling seed")->capture_default_str();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve a bank over HTTP");
  std::string serve_bank, serve_listen, serve_static;
  serve_cmd->add_option("--bank", serve_bank, "Bank path")->required();
  serve_cmd->add_option("--listen", serve_listen, "host:port")->required();
  serve_cmd->add_option("--static", serve_static, "Directory of static assets mounted at /");

  // synth-dataset
  auto* synth = app.add_subcommand("synth-dataset", "Write the synthetic arrow dataset as PNG category directories");
  SynthDatasetConfig synth_cfg;
  std::string synth_out, synth_gt;
  double synth_percent = 0.0;
  std::uint64_t synth_rot_seed = 0;
  synth->add_option("--out", synth_out, "Output root")->required();
  synth->add_option("--classes", synth_cfg.classes, "Number of labels")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--per-class", synth_cfg.per_class, "Images per label")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--size", synth_cfg.size, "Image side, pixels (>= 32)")->check(CLI::Range(32, 4096))->capture_default_str();
  synth->add_option("--seed", synth_cfg.seed, "Generator seed")->capture_default_str();
  synth->add_option("--rotate-percent", synth_percent, "Rotate this percentage of images by random angles")->check(CLI::Range(0.0, 100.0))->capture_default_str();
  synth->add_option("--rotate-seed", synth_rot_seed, "Seed for the rotation draw")->capture_default_str();
  synth->add_option("--gt-out", synth_gt, "Write the applied angles as ground-truth CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (index->parsed()) {
      auto gt = index_oad.truth();
      DatasetManifest manifest = ingest_dataset(index_dataset);
      FeatureBank bank = build_bank(manifest, index_oad.config(index_seed), gt ? &*gt : nullptr, index_desc);
      save_bank(bank, index_out);
      std::cout << "records " << bank.size() << " dim " << bank.dim() << "\n";
    } else if (query->parsed()) {
      FeatureBank bank = load_bank(query_bank);
      auto desc = DescriptorConfig::from_id(bank.descriptor_id());
      if (!desc) {
        throw Error(ErrorCode::ConfigInvalid, "bank descriptor '" + bank.descriptor_id() +
                                                  "' cannot be computed from images");
      }
      RasterImage img = decode_image(query_image_path);
      RetrievalResult r = query_image(bank, img, query_k, parse_metric(query_metric),
                                      query_oad.config(0), *desc);
      std::cout << "rank\tid\tlabel\tdistance\n";
      for (std::size_t i = 0; i < r.hits.size(); ++i) {
        std::cout << i + 1 << '\t' << r.hits[i].id << '\t' << r.hits[i].label << '\t'
                  << fmt("%.6f", r.hits[i].distance) << '\n';
      }
    } else if (evalrot->parsed()) {
      exp.dataset_root = eval_dataset;
      exp.metric = parse_metric(eval_metric);
      exp.estimator = eval_oad.config(exp.seed);
      exp.integer_angles = !real_angles;
      PrecisionReport report = rotation_experiment(exp);
      emit_csv(report, eval_out);
      std::cout << "n_percent\tprecision_without\tprecision_with\timprovement\n";
      for (const auto& row : report.rows) {
        std::cout << fmt("%g", row.n_percent) << '\t' << fmt("%.3f", row.precision_without) << '\t'
                  << fmt("%.3f", row.precision_with) << '\t' << fmt("%.3f", row.improvement) << '\n';
      }
    } else if (bench->parsed()) {
      FeatureBank bank = load_bank(bench_bank);
      auto desc = DescriptorConfig::from_id(bank.descriptor_id());
      if (!desc) {
        throw Error(ErrorCode::ConfigInvalid, "bank descriptor '" + bank.descriptor_id() +
                                                  "' cannot be computed from images");
      }
      auto queries = bank_images(bank, bench_max_queries);
      std::optional<std::size_t> sample;
      if (bench_sample > 0) sample = bench_sample;
      Metric metric = parse_metric(bench_metric);
      std::vector<TimingReport> reports;
      for (Arm arm : {Arm::without_oad, Arm::with_oad}) {
        reports.push_back(timing_benchmark(bank, queries, bench_k, metric, bench_oad.config(0),
                                           *desc, arm, sample, bench_seed));
      }
      emit_csv(reports, bench_out);
      std::cout << "# host: " << reports.front().host << "\n";
      std::cout << "arm\tbank_size\tdim\tk\tsample_size\tmean_ms\tmedian_ms\tp95_ms\n";
      for (const auto& r : reports) {
        std::cout << to_string(r.arm) << '\t' << r.bank_size << '\t' << r.dim << '\t' << r.k << '\t'
                  << r.sample_size << '\t' << fmt("%.3f", r.mean_ms) << '\t'
                  << fmt("%.3f", r.median_ms) << '\t' << fmt("%.3f", r.p95_ms) << '\n';
      }
    } else if (estrot->parsed()) {
      auto gt = est_oad.truth();
      DatasetManifest manifest = ingest_dataset(est_dataset);
      double fraction = estimate_rotated_fraction(manifest, est_sample, est_oad.config(est_seed),
                                                  gt ? &*gt : nullptr, est_threshold, est_seed);
      std::cout << fmt("%.6f", fraction) << "\n";
    } else if (serve_cmd->parsed()) {
      std::optional<std::filesystem::path> static_dir;
      if (!serve_static.empty()) static_dir = serve_static;
      serve(serve_bank, serve_listen, static_dir);
    } else if (synth->parsed()) {
      auto images = make_arrow_dataset(synth_cfg);
      GroundTruthTable truth;
      if (synth_percent > 0.0) {
        CorruptedSet set = corrupt(images, plan_corruption(images.size(), synth_rot_seed, true),
                                   synth_percent);
        images = std::move(set.images);
        truth = std::move(set.truth);
      } else {
        for (const auto& img : images) truth.insert(img.id, AngleDeg{});
      }
      write_dataset(images, synth_out);
      if (!synth_gt.empty()) truth.save_csv(synth_gt);
      std::cout << "images " << images.size() << " labels " << synth_cfg.classes << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace ricb::cli
