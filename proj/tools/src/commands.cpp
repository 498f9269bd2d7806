#include "gmr/cli/commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "gmr/cli/io.hpp"

namespace gmr::cli {
namespace {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "seed: " << s << '\n';
  return s;
}

void print_warnings(const std::vector<std::string>& warnings, const std::filesystem::path& file,
                    std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << file.string() << ": " << w << '\n';
}

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const std::string& suffix) {
  return prefix.string() + suffix;
}

json estimate_json(double value, double std_error) {
  return {{"value", value}, {"std_error", std_error}};
}

}  // namespace

GenSpec parse_gen_spec(const std::string& text) {
  GenSpec spec;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("--gen: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      if (key == "n") {
        spec.n = std::stoull(value, &used);
      } else if (key == "m") {
        spec.m = std::stoull(value, &used);
      } else if (key == "side") {
        spec.side = std::stod(value, &used);
      } else if (key == "seed") {
        spec.seed = std::stoull(value, &used);
      } else {
        throw ValidationError("--gen: unknown key '" + key + "'");
      }
      if (used != value.size() || value.front() == '-') throw std::invalid_argument(value);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError("--gen: bad value for '" + key + "': '" + value + "'");
    }
  }
  if (spec.n < 1) throw ValidationError("--gen: n must be >= 1");
  if (!(spec.side > 0.0)) throw ValidationError("--gen: side must be > 0");
  return spec;
}

void cmd_reduce(const ReduceArgs& args, std::ostream& err) {
  std::vector<std::string> warnings;
  const GaussianMixture input = read_mixture_file(args.in, &warnings);
  print_warnings(warnings, args.in, err);
  if (args.target < 1 || args.target > input.size()) {
    throw ValidationError("--target must lie in [1, " + std::to_string(input.size()) + "]");
  }
  ReduceOptions opts;
  opts.record_all_costs = args.all_costs;
  const ReductionResult result = reduce(input, args.target, args.method, opts);
  for (const auto& step : result.trace.steps) {
    if (step.negative_cost) {
      err << "warning: step " << to_string(step.chosen) << " has negative cost " << step.cost
          << '\n';
    }
  }
  write_json_file(args.out, mixture_to_json(result.mixture));
  if (args.trace) {
    write_json_file(*args.trace,
                    trace_to_json(result.trace, input.size(), args.target, result.mixture));
  }
}

void cmd_divergence(const DivergenceArgs& args, std::ostream& out, std::ostream& err) {
  for (const auto& m : args.measures) {
    if (m != "ise" && m != "fkld" && m != "rkld") {
      throw ValidationError("unknown measure '" + m + "'");
    }
  }
  std::vector<std::string> warnings;
  const GaussianMixture p = read_mixture_file(args.p, &warnings);
  print_warnings(warnings, args.p, err);
  warnings.clear();
  const GaussianMixture q = read_mixture_file(args.q, &warnings);
  print_warnings(warnings, args.q, err);
  if (p.dim() != q.dim()) {
    throw ValidationError("dimension mismatch: " + std::to_string(p.dim()) + " vs " +
                          std::to_string(q.dim()));
  }

  json doc;
  if (args.measures.count("ise")) doc["ise"] = estimate_json(ise_analytic(p, q), 0.0);
  const bool mc = args.measures.count("fkld") || args.measures.count("rkld");
  if (mc) {
    const std::uint64_t seed = resolve_seed(args.seed, err);
    if (args.measures.count("fkld")) {
      const auto e = mc_kld(p, q, args.mc_samples, seed);
      doc["fkld"] = estimate_json(e.value, e.std_error);
    }
    if (args.measures.count("rkld")) {
      const auto e = mc_kld(q, p, args.mc_samples, seed);
      doc["rkld"] = estimate_json(e.value, e.std_error);
    }
    doc["seed"] = seed;
    doc["mc_samples"] = args.mc_samples;
  }
  out << doc.dump(2) << '\n';
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "mu,exact_prune_rkld,crude_bound,R02,exact_merge_rkld,simple_merge_bound,R12,quad_ok\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.mu << ',' << r.exact_prune_rkld << ',' << r.crude_bound << ',' << r.r02 << ','
        << r.exact_merge_rkld << ',' << r.simple_merge_bound << ',' << r.r12 << ','
        << (r.quadrature_ok ? 1 : 0) << '\n';
  }
}

std::size_t cmd_sweep(const SweepArgs& args, std::ostream& err) {
  const auto rows = run_sweep(args.config);
  write_sweep_csv(args.out, rows);
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (!r.quadrature_ok) {
      ++failed;
      err << "warning: quadrature did not converge at mu=" << r.mu << '\n';
    }
  }
  if (failed) err << failed << " row(s) flagged\n";
  return failed;
}

void cmd_cluster(const ClusterArgs& args, std::ostream& out, std::ostream& err) {
  if (args.data.has_value() == args.gen.has_value()) {
    throw ValidationError("exactly one of --data and --gen is required");
  }
  if (args.target < 1 || args.target > args.over) {
    throw ValidationError("need 1 <= --target <= --over");
  }
  const std::uint64_t seed =
      resolve_seed(args.seed ? args.seed : (args.gen ? args.gen->seed : std::nullopt), err);

  LabeledDataset data;
  json source;
  if (args.gen) {
    const std::uint64_t gen_seed = args.gen->seed.value_or(seed);
    data = generate_table2_data(args.gen->n, args.gen->m, args.gen->side, gen_seed);
    source = {{"n", args.gen->n}, {"m", args.gen->m}, {"side", args.gen->side},
              {"seed", gen_seed}};
  } else {
    data.points = read_points_csv(*args.data);
    source = {{"data", args.data->string()}};
  }

  EmConfig cfg;
  cfg.n_clusters = args.over;
  cfg.seed = seed;
  cfg.max_iters = args.max_iters;
  cfg.tol = args.tol;
  const EmResult fit = em_fit(data.points, cfg);
  if (!fit.converged) {
    err << "warning: EM stopped after " << fit.iterations << " iterations without converging\n";
  }

  ReassignResult reduced =
      reduce_and_reassign(fit.mixture, fit.responsibilities, data.points, args.target, args.method);
  reduced.data.truth = data.truth;

  write_points_csv(with_suffix(args.out_prefix, "_points.csv"), reduced.data);
  write_json_file(with_suffix(args.out_prefix, "_fitted.json"), mixture_to_json(fit.mixture));
  write_json_file(with_suffix(args.out_prefix, "_reduced.json"),
                  mixture_to_json(reduced.mixture));
  write_json_file(with_suffix(args.out_prefix, "_trace.json"),
                  trace_to_json(reduced.trace, fit.mixture.size(), args.target, reduced.mixture));

  const DiscardSummary s = summarize_discards(reduced.data);
  json summary = {
      {"method", std::string(to_string(args.method))},
      {"over", args.over},
      {"target", args.target},
      {"seed", seed},
      {"source", source},
      {"em", {{"iterations", fit.iterations},
              {"converged", fit.converged},
              {"log_likelihood", fit.log_likelihood.back()},
              {"jitter_events", fit.jitter_events},
              {"reinit_events", fit.reinit_events}}},
      {"points", s.points},
      {"discarded", s.discarded},
  };
  if (data.truth) {
    summary["spurious"] = s.spurious;
    summary["spurious_discarded"] = s.spurious_discarded;
    summary["inliers_discarded"] = s.inliers_discarded;
    summary["spurious_recall"] = s.spurious_recall;
    summary["discard_precision"] = s.discard_precision;
    summary["inlier_discard_rate"] = s.inlier_discard_rate;
  }
  write_json_file(with_suffix(args.out_prefix, "_summary.json"), summary);
  out << summary.dump(2) << '\n';
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian mixture reduction toolkit", "gmr"};
  app.require_subcommand(1);

  const std::vector<std::string> methods{"runnalls", "williams", "arkl", "arkl-simple"};
  std::string reduce_method = "arkl";
  std::string cluster_method = "arkl";

  ReduceArgs ra;
  auto* reduce_cmd = app.add_subcommand("reduce", "Greedy reduction of a mixture file");
  reduce_cmd->add_option("--in", ra.in, "Input mixture JSON")->required();
  reduce_cmd->add_option("--out", ra.out, "Reduced mixture JSON")->required();
  reduce_cmd->add_option("--method", reduce_method, "runnalls | williams | arkl | arkl-simple")
      ->check(CLI::IsMember(methods));
  reduce_cmd->add_option("--target", ra.target, "Number of components to keep")->required();
  reduce_cmd->add_option("--trace", ra.trace, "Trace JSON");
  reduce_cmd->add_flag("--all-costs", ra.all_costs, "Record every hypothesis cost in the trace");

  DivergenceArgs da;
  std::vector<std::string> measures;
  std::uint64_t div_seed = 0;
  auto* div_cmd = app.add_subcommand("divergence", "ISE and Monte Carlo KLDs between two files");
  div_cmd->add_option("--p", da.p, "First mixture JSON")->required();
  div_cmd->add_option("--q", da.q, "Second mixture JSON")->required();
  div_cmd->add_option("--measures", measures, "Subset of ise,fkld,rkld")->delimiter(',');
  div_cmd->add_option("--mc-samples", da.mc_samples, "Monte Carlo sample count");
  auto* div_seed_opt = div_cmd->add_option("--seed", div_seed, "Monte Carlo seed");

  SweepArgs sa;
  auto* sweep_cmd = app.add_subcommand("sweep", "Two-component bound curves as CSV");
  sweep_cmd->add_option("--w1", sa.config.w1, "Weight of the left component");
  sweep_cmd->add_option("--mu-min", sa.config.mu_min);
  sweep_cmd->add_option("--mu-max", sa.config.mu_max);
  sweep_cmd->add_option("--steps", sa.config.steps);
  sweep_cmd->add_option("--out", sa.out, "CSV output")->required();

  ClusterArgs ca;
  std::string data_path;
  std::string gen_text;
  std::uint64_t cluster_seed = 0;
  auto* cluster_cmd = app.add_subcommand("cluster", "EM over-clustering followed by reduction");
  auto* data_opt = cluster_cmd->add_option("--data", data_path, "Point CSV (x1..xk columns)");
  auto* gen_opt =
      cluster_cmd->add_option("--gen", gen_text, "Synthetic data, e.g. n=1000,m=100,side=20");
  data_opt->excludes(gen_opt);
  cluster_cmd->add_option("--over", ca.over, "Components fitted by EM");
  cluster_cmd->add_option("--target", ca.target, "Components after reduction");
  cluster_cmd->add_option("--method", cluster_method, "runnalls | williams | arkl | arkl-simple")
      ->check(CLI::IsMember(methods));
  cluster_cmd->add_option("--out-prefix", ca.out_prefix, "Output file prefix")->required();
  auto* cluster_seed_opt = cluster_cmd->add_option("--seed", cluster_seed, "EM seed");
  cluster_cmd->add_option("--max-iters", ca.max_iters);
  cluster_cmd->add_option("--tol", ca.tol, "EM log-likelihood tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*reduce_cmd) {
      ra.method = parse_cost_kind(reduce_method);
      cmd_reduce(ra, err);
    } else if (*div_cmd) {
      if (!measures.empty()) da.measures = {measures.begin(), measures.end()};
      if (*div_seed_opt) da.seed = div_seed;
      cmd_divergence(da, out, err);
    } else if (*sweep_cmd) {
      cmd_sweep(sa, err);
    } else if (*cluster_cmd) {
      ca.method = parse_cost_kind(cluster_method);
      if (*data_opt) ca.data = data_path;
      if (*gen_opt) ca.gen = parse_gen_spec(gen_text);
      if (*cluster_seed_opt) ca.seed = cluster_seed;
      cmd_cluster(ca, out, err);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const EmError& e) {
    err << "EM error: " << e.what() << '\n';
    return kExitEm;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace gmr::cli
