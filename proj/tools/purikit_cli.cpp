// purikit command-line front end: counterexample generators, distribution
// benchmarks, polynomial export, method comparison, and one-shot purification.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O.

#include <atomic>
#include <chrono>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "purikit/counterexamples.hpp"
#include "purikit/eigen_method.hpp"
#include "purikit/sdp.hpp"
#include "purikit/serialize.hpp"
#include "purikit/sos_method.hpp"
#include "purikit/sos_sdp_fit.hpp"
#include "purikit/spectra.hpp"
#include "purikit/tensor_core.hpp"

using nlohmann::json;
using namespace purikit;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

struct CommonOpts {
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::string out;
  int jobs = 1;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--tol", c.tol, "Numerical tolerance");
  cmd->add_option("--out", c.out, "Output file path")->required();
  cmd->add_option("--jobs", c.jobs, "Max parallel workers")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

// Run fn(i) for i in [0, n) on up to `jobs` threads; results land in a
// pre-sized vector so output order is deterministic.
template <typename F>
void parallel_for(int n, int jobs, F fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mx;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mx);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// Every run writes the data file plus a JSON sidecar holding the full config
// (so a run is reproducible from its outputs alone) and run metadata.
void write_record(const CommonOpts& c, const json& config, const json& results,
                  const std::string& csv_text, double wall_seconds) {
  json record;
  record["schema_version"] = kSchemaVersion;
  record["library_version"] = kVersion;
  record["config"] = config;
  record["wall_seconds"] = wall_seconds;
  record["status"] = "ok";
  record["results"] = results;
  if (c.format == "json") {
    save_text(record.dump(2) + "\n", c.out);
  } else {
    save_text(csv_text, c.out);
    save_text(record.dump(2) + "\n", c.out + ".config.json");
  }
}

json common_config(const CommonOpts& c) {
  json j;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["jobs"] = c.jobs;
  j["format"] = c.format;
  return j;
}

int run_counterexample(const CommonOpts& c, const std::vector<int>& t_list,
                       const std::string& layout_name,
                       const std::vector<int>& r_list, int restarts) {
  auto t0 = std::chrono::steady_clock::now();
  Layout layout = layout_name == "binary" ? Layout::binary : Layout::flat;

  CsvWriter csv({"t", "rank_S", "osr_per_cut", "osr_max", "sr_phi",
                 "sr_phi_sq", "psd_r", "psd_residual", "psd_success"});
  json results = json::array();
  for (int t : t_list) {
    SlackMatrix slack = tgon_slack(t);
    Eigen::JacobiSVD<RMat> svd(slack.entries);
    int rank_s = 0;
    double smax = svd.singularValues()(0);
    for (long i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-8 * smax) ++rank_s;

    std::vector<int> osr_cuts = phi_cut_ranks(slack, true, layout, c.tol);
    std::vector<int> sr_phi_cuts = phi_cut_ranks(slack, false, layout, c.tol);
    int osr_max = *std::max_element(osr_cuts.begin(), osr_cuts.end());
    int sr_phi = *std::max_element(sr_phi_cuts.begin(), sr_phi_cuts.end());
    int sr_phi_sq = osr_max;  // same sparse cut matrices, entries S vs sqrt(S)
    std::string cuts;
    for (std::size_t i = 0; i < osr_cuts.size(); ++i) {
      if (i) cuts += ';';
      cuts += std::to_string(osr_cuts[i]);
    }

    for (int r : r_list) {
      PsdFactors f = psd_factorization_search(slack.entries, r, restarts,
                                              c.seed + 1000 * t + r);
      csv.add_row({std::to_string(t), std::to_string(rank_s), cuts,
                   std::to_string(osr_max), std::to_string(sr_phi),
                   std::to_string(sr_phi_sq), std::to_string(r),
                   csv_num(f.residual), f.success ? "1" : "0"});
      json row;
      row["t"] = t;
      row["rank_S"] = rank_s;
      row["osr_per_cut"] = osr_cuts;
      row["sr_phi"] = sr_phi;
      row["sr_phi_sq"] = sr_phi_sq;
      row["psd_r"] = r;
      row["psd_residual"] = f.residual;
      row["psd_success"] = f.success;
      results.push_back(std::move(row));
    }
  }
  json config = common_config(c);
  config["command"] = "counterexample";
  config["t"] = t_list;
  config["layout"] = layout_name;
  config["psd_r"] = r_list;
  config["psd_restarts"] = restarts;
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  write_record(c, config, results, csv.str(), wall);
  return 0;
}

Spectrum make_spec(const std::string& dist, int n, double b,
                   std::uint64_t seed) {
  DistParams p;
  p.b = b;
  p.seed = seed;
  return make_distribution(dist_kind_from_name(dist), n, p);
}

int run_bench_distributions(const CommonOpts& c,
                            const std::vector<std::string>& dists,
                            const std::vector<int>& n_list, int k_min,
                            int k_max, double b) {
  auto t0 = std::chrono::steady_clock::now();
  struct Point {
    std::string dist;
    int n;
    std::vector<FitResult> fits;
    std::string error;
  };
  std::vector<Point> points;
  for (const std::string& d : dists)
    for (int n : n_list) points.push_back({d, n, {}, ""});

  SdpOptions opts;
  opts.tol_gap = 1e-9;
  opts.tol_feas = 1e-9;
  parallel_for(static_cast<int>(points.size()), c.jobs, [&](int i) {
    Point& pt = points[i];
    try {
      Spectrum spec = make_spec(pt.dist, pt.n, b, c.seed);
      pt.fits = distance_curve(spec, k_min, k_max, spec.ambient_dim, opts);
    } catch (const std::exception& e) {
      pt.error = e.what();  // recorded; the run continues
    }
  });

  CsvWriter csv({"distribution", "n", "k", "distance", "status"});
  json results = json::array();
  for (const Point& pt : points) {
    json rec;
    rec["distribution"] = pt.dist;
    rec["n"] = pt.n;
    if (!pt.error.empty()) {
      rec["error"] = pt.error;
      results.push_back(std::move(rec));
      continue;
    }
    json curve = json::array();
    for (const FitResult& f : pt.fits) {
      csv.add_row({pt.dist, std::to_string(pt.n), std::to_string(f.k),
                   csv_num(f.distance), sdp_status_name(f.solver_status)});
      curve.push_back({{"k", f.k}, {"distance", f.distance}});
    }
    rec["curve"] = std::move(curve);
    try {
      DecayFit fit = fit_exponential(curve_points(pt.fits), {k_min, k_max});
      rec["decay"] = decay_to_json(fit);
    } catch (const std::invalid_argument&) {
      rec["decay"] = nullptr;  // e.g. uniform: all distances at the floor
    }
    results.push_back(std::move(rec));
  }

  json config = common_config(c);
  config["command"] = "bench-distributions";
  config["distributions"] = dists;
  config["n"] = n_list;
  config["k_min"] = k_min;
  config["k_max"] = k_max;
  config["b"] = b;
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  write_record(c, config, results, csv.str(), wall);
  return 0;
}

int run_poly_export(const CommonOpts& c, const std::string& dist, int n,
                    const std::vector<int>& k_list, int grid, double b) {
  auto t0 = std::chrono::steady_clock::now();
  Spectrum spec = make_spec(dist, n, b, c.seed);
  SdpOptions opts;
  opts.tol_gap = 1e-9;
  opts.tol_feas = 1e-9;

  // Columns: row kind "sample" on the lambda grid, "eigenvalue" at the
  // abscissas; the unattainable region is p - lambda < -lambda.
  CsvWriter csv({"k", "kind", "lambda", "p", "p_minus_lambda"});
  json results = json::array();
  double lam_max = spec.values.front();
  for (int k : k_list) {
    FitResult fit = fit_sos(spec, k, spec.ambient_dim, opts);
    for (int g = 0; g < grid; ++g) {
      double lam = lam_max * g / std::max(1, grid - 1);
      double p = eval_poly(fit.gram, lam);
      csv.add_row({std::to_string(k), "sample", csv_num(lam), csv_num(p),
                   csv_num(p - lam)});
    }
    for (double lam : spec.values) {
      double p = eval_poly(fit.gram, lam);
      csv.add_row({std::to_string(k), "eigenvalue", csv_num(lam), csv_num(p),
                   csv_num(p - lam)});
    }
    json rec;
    rec["k"] = k;
    rec["distance"] = fit.distance;
    rec["gram"] = gram_to_json(fit.gram);
    results.push_back(std::move(rec));
  }
  json config = common_config(c);
  config["command"] = "poly-export";
  config["distribution"] = dist;
  config["n"] = n;
  config["k"] = k_list;
  config["grid"] = grid;
  config["b"] = b;
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  write_record(c, config, results, csv.str(), wall);
  return 0;
}

int run_compare_methods(const CommonOpts& c, const std::string& dist, int n,
                        int D, const std::vector<double>& eps_list, double b,
                        int k_max) {
  auto t0 = std::chrono::steady_clock::now();
  Spectrum spec = make_spec(dist, n, b, c.seed);
  SdpOptions opts;
  opts.tol_gap = 1e-9;
  opts.tol_feas = 1e-9;
  std::vector<FitResult> fits =
      distance_curve(spec, 1, k_max, spec.ambient_dim, opts);

  CsvWriter csv({"eps", "sos_k", "sos_bound", "sos_bound_saturated", "eigen_s",
                 "eigen_bound"});
  json results = json::array();
  for (double eps : eps_list) {
    int sos_k = -1;
    for (const FitResult& f : fits)
      if (f.distance <= eps) {
        sos_k = f.k;
        break;
      }
    RankBound sb = sos_k > 0 ? sos_rank_bound(D, sos_k) : RankBound{};
    int eigen_s = -1;
    double tail = 1.0;
    for (int s = 1; s <= spec.n_nonzero; ++s) {
      tail = 0.0;
      for (int i = s; i < spec.n_nonzero; ++i) tail += spec.values[i];
      if (2.0 * tail <= eps) {
        eigen_s = s;
        break;
      }
    }
    long long eigen_bound =
        eigen_s > 0 ? static_cast<long long>(D) * eigen_s * eigen_s : -1;
    csv.add_row({csv_num(eps), std::to_string(sos_k),
                 std::to_string(static_cast<long long>(sb.value)),
                 sb.saturated ? "1" : "0", std::to_string(eigen_s),
                 std::to_string(eigen_bound)});
    json rec;
    rec["eps"] = eps;
    rec["sos_k"] = sos_k;
    rec["sos_bound"] = sb.value;
    rec["sos_bound_saturated"] = sb.saturated;
    rec["eigen_s"] = eigen_s;
    rec["eigen_bound"] = eigen_bound;
    results.push_back(std::move(rec));
  }
  json config = common_config(c);
  config["command"] = "compare-methods";
  config["distribution"] = dist;
  config["n"] = n;
  config["D"] = D;
  config["eps"] = eps_list;
  config["b"] = b;
  config["k_max"] = k_max;
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  write_record(c, config, results, csv.str(), wall);
  return 0;
}

int run_purify(const CommonOpts& c, const std::string& input,
               const std::string& method, int k, int s) {
  auto t0 = std::chrono::steady_clock::now();
  DensityMatrix rho = load_density(input);
  rho.validate();
  Spectrum spec = spectrum_of(rho, c.tol);

  MPSPurification pur;
  json extra;
  if (method == "sos_exact") {
    GramPolynomial gp = exact_gram(spec);
    pur = build_purifying_state(rho, gp, c.tol);
    int D = operator_schmidt_rank(rho, c.tol).second;
    RankBound rb = sos_rank_bound(D, spec.m_distinct);
    extra["bound"] = rb.value;
    extra["bound_saturated"] = rb.saturated;
  } else if (method == "sos_sdp") {
    if (k < 1)
      throw std::invalid_argument("purify: sos_sdp requires --k >= 1");
    SdpOptions opts;
    FitResult fit = fit_sos(spec, k, spec.ambient_dim, opts);
    extra["fit_distance"] = fit.distance;
    pur = build_purifying_state(rho, fit.gram, c.tol);
    int D = operator_schmidt_rank(rho, c.tol).second;
    RankBound rb = sos_rank_bound(D, k);
    extra["bound"] = rb.value;
    extra["bound_saturated"] = rb.saturated;
  } else if (method == "eigen_exact" || method == "eigen_trunc") {
    DensityMatrix target = rho;
    if (method == "eigen_trunc") {
      if (s < 1)
        throw std::invalid_argument("purify: eigen_trunc requires --s >= 1");
      auto [sigma, dist] = truncate_spectrum(rho, s, c.tol);
      extra["truncation_distance"] = dist;
      target = std::move(sigma);
    }
    auto [p, cert] = eigen_purification(target, c.tol);
    pur = std::move(p);
    extra["certificate"] = certificate_to_json(cert);
    extra["bound"] =
        static_cast<long>(cert.osr) * cert.n_rank * cert.n_rank;
  } else {
    throw std::invalid_argument("purify: unknown method " + method);
  }

  DensityMatrix back = trace_out_ancilla(pur);
  double achieved = trace_norm(rho.data - back.data);
  int measured_rank = purification_rank(pur, c.tol);

  json record;
  record["schema_version"] = kSchemaVersion;
  record["library_version"] = kVersion;
  json config = common_config(c);
  config["command"] = "purify";
  config["input"] = input;
  config["method"] = method;
  config["k"] = k;
  config["s"] = s;
  record["config"] = config;
  record["purification"] = purification_to_json(pur);
  record["trace_distance"] = achieved;
  record["purification_rank"] = measured_rank;
  record["spectrum"] = spectrum_to_json(spec);
  record["detail"] = extra;
  record["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  record["status"] = "ok";
  save_text(record.dump(2) + "\n", c.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"purikit: purification constructions for multipartite states"};
  app.require_subcommand(1);

  CommonOpts c_cex, c_bench, c_poly, c_cmp, c_pur;

  auto* cex = app.add_subcommand("counterexample",
                                 "t-gon slack family: ranks and psd search");
  std::vector<int> t_list{4, 8, 16, 32, 64};
  std::string layout = "binary";
  std::vector<int> r_list{1, 2, 3};
  int restarts = 8;
  cex->add_option("--t", t_list, "Polygon sizes");
  cex->add_option("--layout", layout, "Site layout for cut ranks")
      ->check(CLI::IsMember({"flat", "binary"}));
  cex->add_option("--psd-r", r_list, "psd factor sizes to try");
  cex->add_option("--psd-restarts", restarts, "Random restarts per size");
  add_common(cex, c_cex);

  auto* bench = app.add_subcommand("bench-distributions",
                                   "Distance curves and decay fits");
  std::vector<std::string> dists{"uniform", "equally_spaced", "one_fixed",
                                 "exponential"};
  std::vector<int> n_list{50, 100, 200};
  int k_min = 2, k_max = 4;
  double b = 1.0;
  bench->add_option("--dist", dists, "Distribution kinds");
  bench->add_option("--n", n_list, "Spectrum sizes");
  bench->add_option("--kmin", k_min, "Smallest polynomial degree count");
  bench->add_option("--kmax", k_max, "Largest polynomial degree count");
  bench->add_option("--b", b, "Exponential decay rate");
  add_common(bench, c_bench);

  auto* poly = app.add_subcommand("poly-export", "Sampled sos polynomials");
  std::string poly_dist = "equally_spaced";
  int poly_n = 50;
  std::vector<int> poly_k{1, 2, 3};
  int grid = 101;
  double poly_b = 1.0;
  poly->add_option("--dist", poly_dist, "Distribution kind");
  poly->add_option("--n", poly_n, "Spectrum size");
  poly->add_option("--k", poly_k, "Degrees to export");
  poly->add_option("--grid", grid, "Grid samples in [0, lambda_1]")
      ->check(CLI::PositiveNumber);
  poly->add_option("--b", poly_b, "Exponential decay rate");
  add_common(poly, c_poly);

  auto* cmp = app.add_subcommand("compare-methods",
                                 "sos vs eigenbasis rank bounds per eps");
  std::string cmp_dist = "exponential";
  int cmp_n = 50, cmp_D = 2, cmp_kmax = 6;
  std::vector<double> eps_list{0.5, 0.1, 0.01};
  double cmp_b = 1.0;
  cmp->add_option("--dist", cmp_dist, "Distribution kind");
  cmp->add_option("--n", cmp_n, "Spectrum size");
  cmp->add_option("--D", cmp_D, "Operator Schmidt rank of the target");
  cmp->add_option("--eps", eps_list, "Trace-distance targets");
  cmp->add_option("--b", cmp_b, "Exponential decay rate");
  cmp->add_option("--kmax", cmp_kmax, "Largest sos degree to try");
  add_common(cmp, c_cmp);

  auto* pur = app.add_subcommand("purify", "Purify a density-matrix file");
  std::string input, method = "eigen_exact";
  int pur_k = 0, pur_s = 0;
  pur->add_option("--input", input, "Density-matrix JSON file")->required();
  pur->add_option("--method", method, "Construction")
      ->check(CLI::IsMember({"sos_exact", "sos_sdp", "eigen_exact",
                             "eigen_trunc"}));
  pur->add_option("--k", pur_k, "sos degree (sos_sdp)");
  pur->add_option("--s", pur_s, "Kept eigenvalues (eigen_trunc)");
  add_common(pur, c_pur);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cex->parsed())
      return run_counterexample(c_cex, t_list, layout, r_list, restarts);
    if (bench->parsed())
      return run_bench_distributions(c_bench, dists, n_list, k_min, k_max, b);
    if (poly->parsed())
      return run_poly_export(c_poly, poly_dist, poly_n, poly_k, grid, poly_b);
    if (cmp->parsed())
      return run_compare_methods(c_cmp, cmp_dist, cmp_n, cmp_D, eps_list,
                                 cmp_b, cmp_kmax);
    if (pur->parsed()) return run_purify(c_pur, input, method, pur_k, pur_s);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const ParseError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
