// Command-line surface over the manikde library. Every subcommand is a thin
// wrapper around one library call; all numerics live in the headers. Exit
// codes: 0 success, 1 validation error (flags, CSV/JSON shape), 2 numeric
// failure (non-convergence, non-finite results).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "manikde/benchmark_io.hpp"
#include "manikde/manikde.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

void print_value(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("non-finite result");
  std::printf("%.17g\n", v);
}

manikde::PointCloud load_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open cloud file '" + path + "'");
  return manikde::read_csv(in);
}

struct ModelFlags {
  std::string family = "circle";
  double a = 0.125;
  double b = 3.0;
  int w = 0;  // 0 = family default
  int beta = 2;
  double lambda = 1.0;
  int D = 0;  // 0 = family default

  manikde::AnyModel build() const {
    nlohmann::json j;
    j["family"] = family;
    j["a"] = a;
    j["b"] = b;
    j["w"] = w > 0 ? w : (family == "torus" ? 5 : 6);
    j["beta"] = beta;
    j["lambda"] = lambda;
    j["D"] = D > 0 ? D : (family == "torus" ? 3 : 2);
    return manikde::model_from_json(j);
  }
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
  cmd->add_option("--family", mf.family, "Model family: circle or torus")
      ->check(CLI::IsMember({"circle", "torus"}));
  cmd->add_option("--a", mf.a, "Perturbation amplitude");
  cmd->add_option("--b", mf.b, "Torus ring offset (torus only)");
  cmd->add_option("--w", mf.w, "Perturbation frequency (default 6 circle, 5 torus)");
  cmd->add_option("--beta", mf.beta, "Smoothness exponent of the parameter density");
  cmd->add_option("--lambda", mf.lambda, "Density concentration scale (>= 1)");
  cmd->add_option("--D", mf.D, "Ambient dimension (default 2 circle, 3 torus)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density estimation on an unknown low-dimensional manifold"};
  app.require_subcommand(1);
  // Long-form help only: the default -h short flag would shadow the --h
  // bandwidth option on the estimator subcommands.
  app.set_help_flag("--help", "Print help and exit");
  auto add_sub = [&app](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "Print help and exit");
    return sub;
  };

  // sample: draw a cloud from a synthetic model and write it as CSV.
  ModelFlags sample_model;
  std::size_t sample_n = 100;
  std::uint64_t sample_seed = 0;
  std::string sample_out = "-";
  CLI::App* sample = add_sub("sample", "Sample a synthetic model to CSV");
  add_model_flags(sample, sample_model);
  sample->add_option("--n", sample_n, "Number of points")->required();
  sample->add_option("--seed", sample_seed, "RNG seed");
  sample->add_option("--out", sample_out, "Output CSV path ('-' = stdout)");

  // estimate: pointwise kernel density value from a cloud CSV.
  std::string est_cloud;
  double est_h = 0.0;
  int est_ell = 1;
  int est_d = 1;
  double est_fmax = 1.0;
  CLI::App* est = add_sub("estimate", "Pointwise density estimate");
  est->add_option("--cloud", est_cloud, "Cloud CSV path")->required();
  est->add_option("--h", est_h, "Bandwidth")->required();
  est->add_option("--ell", est_ell, "Kernel order");
  est->add_option("--d", est_d, "Intrinsic dimension")->required();
  est->add_option("--f-max", est_fmax, "Density sup bound");

  // select-bandwidth: dyadic-grid selection with trace output.
  std::string sel_cloud, sel_trace;
  int sel_ell = 3;
  int sel_d = 1;
  double sel_theta = 0.0, sel_p = 2.0, sel_fmax = 1.0;
  std::string sel_mode = "numeric";
  CLI::App* sel = add_sub("select-bandwidth", "Dyadic bandwidth selection");
  sel->add_option("--cloud", sel_cloud, "Cloud CSV path")->required();
  sel->add_option("--ell", sel_ell, "Kernel order");
  sel->add_option("--d", sel_d, "Intrinsic dimension")->required();
  sel->add_option("--theta", sel_theta, "Threshold constant (default p+1)");
  sel->add_option("--p", sel_p, "Moment order");
  sel->add_option("--f-max", sel_fmax, "Density sup bound");
  sel->add_option("--mode", sel_mode, "Deviation mode")
      ->check(CLI::IsMember({"numeric", "theoretical"}));
  sel->add_option("--trace", sel_trace, "Trace CSV output path");

  // estimate-dim: dyadic ball-count dimension estimate.
  std::string dim_cloud;
  int dim_D = 0;
  CLI::App* dim = add_sub("estimate-dim", "Local dimension estimate");
  dim->add_option("--cloud", dim_cloud, "Cloud CSV path")->required();
  dim->add_option("--D", dim_D, "Ambient dimension cap (default: cloud dim)");

  // geodesic-estimate: graph-distance estimator for curve data.
  std::string geo_cloud;
  double geo_h = 0.0, geo_p = 2.0, geo_fmin = 1.0, geo_eps = 0.0;
  int geo_ell = 3;
  CLI::App* geo = add_sub("geodesic-estimate", "Graph-geodesic estimate (d=1)");
  geo->add_option("--cloud", geo_cloud, "Cloud CSV path")->required();
  geo->add_option("--h", geo_h, "Bandwidth")->required();
  geo->add_option("--ell", geo_ell, "Kernel order");
  geo->add_option("--p", geo_p, "Confidence order in the radius schedule");
  geo->add_option("--f-min", geo_fmin, "Density floor in the radius schedule");
  geo->add_option("--epsilon", geo_eps, "Override the graph radius schedule");

  // benchmark: Monte-Carlo risk curve from a JSON config.
  std::string bench_config, bench_json = "report.json", bench_csv = "report.csv";
  unsigned bench_threads = 0;
  CLI::App* bench = add_sub("benchmark", "Monte-Carlo rate benchmark");
  bench->add_option("--config", bench_config, "Benchmark config JSON")->required();
  bench->add_option("--out-json", bench_json, "Report JSON path");
  bench->add_option("--out-csv", bench_csv, "Risk-curve CSV path");
  bench->add_option("--threads", bench_threads,
                    "Worker threads (default: cores, or MANIKDE_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (sample->parsed()) {
      const manikde::AnyModel model = sample_model.build();
      const manikde::PointCloud cloud =
          manikde::model_sample(model, sample_n, sample_seed);
      if (sample_out == "-") {
        manikde::write_csv(cloud, std::cout);
      } else {
        std::ofstream out(sample_out);
        if (!out) throw std::invalid_argument("cannot open output '" + sample_out + "'");
        manikde::write_csv(cloud, out);
      }
    } else if (est->parsed()) {
      const manikde::PointCloud cloud = load_cloud(est_cloud);
      manikde::EstimatorConfig config{manikde::Kernel(est_d, est_ell), est_h,
                                      est_fmax, est_d};
      print_value(manikde::estimate(cloud, config));
    } else if (sel->parsed()) {
      const manikde::PointCloud cloud = load_cloud(sel_cloud);
      manikde::LepskiConfig config{
          manikde::Kernel(sel_d, sel_ell),
          sel_theta > 0.0 ? sel_theta : sel_p + 1.0, sel_p, sel_fmax,
          sel_mode == "numeric" ? manikde::PsiMode::numeric
                                : manikde::PsiMode::theoretical};
      const manikde::BandwidthGrid grid =
          manikde::build_grid(config, cloud.size(), sel_d);
      const manikde::Selection s = manikde::select_bandwidth(cloud, config, grid, sel_d);
      if (!sel_trace.empty()) {
        std::ofstream out(sel_trace);
        if (!out) throw std::invalid_argument("cannot open output '" + sel_trace + "'");
        manikde::write_trace_csv(s.trace, out);
      }
      print_value(s.h_hat);
    } else if (dim->parsed()) {
      const manikde::PointCloud cloud = load_cloud(dim_cloud);
      const int D = dim_D > 0 ? dim_D : cloud.dim;
      const manikde::DimensionEstimate e = manikde::estimate_dimension(cloud, D);
      std::printf("delta_hat=%.17g d_hat=%d eta=%.17g\n", e.delta_hat, e.d_hat, e.eta);
    } else if (geo->parsed()) {
      const manikde::PointCloud cloud = load_cloud(geo_cloud);
      double value = 0.0;
      if (geo_eps > 0.0) {
        // Experimental override of the radius schedule.
        const manikde::EpsGraph graph = manikde::build_graph(cloud, geo_eps);
        const manikde::Kernel kernel(1, geo_ell);
        manikde::KahanSum sum;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
          const double d = graph.dist_from_x[i + 1];
          if (d < geo_h) sum.add(kernel.eval_radial(d / geo_h));
        }
        value = sum.value() / (static_cast<double>(cloud.size()) * geo_h);
      } else {
        value = manikde::estimate_1d(cloud, geo_h, geo_ell, geo_p, geo_fmin);
      }
      print_value(value);
    } else if (bench->parsed()) {
      std::ifstream in(bench_config);
      if (!in) throw std::invalid_argument("cannot open config '" + bench_config + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config JSON: ") + e.what());
      }
      manikde::BenchmarkConfig config = manikde::benchmark_config_from_json(j);
      config.threads = bench_threads;
      const manikde::BenchmarkReport report =
          (config.variant == manikde::Variant::fixed ||
           config.variant == manikde::Variant::geodesic_1d)
              ? manikde::run_benchmark(config)
              : manikde::adaptive_benchmark(config);
      {
        std::ofstream out(bench_json);
        if (!out) throw std::invalid_argument("cannot open output '" + bench_json + "'");
        out << manikde::report_to_json(config, report).dump(2) << "\n";
      }
      {
        std::ofstream out(bench_csv);
        if (!out) throw std::invalid_argument("cannot open output '" + bench_csv + "'");
        manikde::write_report_csv(report, out);
      }
      std::printf("slope=%.17g ci=[%.17g,%.17g]\n", report.slope, report.slope_ci_lo,
                  report.slope_ci_hi);
    }
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: config JSON: %s\n", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitOk;
}
