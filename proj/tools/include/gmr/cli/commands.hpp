#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>

#include "gmr/cli/sweep.hpp"
#include "gmr/cluster.hpp"

namespace gmr::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitEm = 4,
};

struct ReduceArgs {
  std::filesystem::path in;
  std::filesystem::path out;
  std::optional<std::filesystem::path> trace;
  CostKind method = CostKind::kArklFull;
  std::size_t target = 1;
  bool all_costs = false;
};

struct DivergenceArgs {
  std::filesystem::path p;
  std::filesystem::path q;
  std::set<std::string> measures{"ise", "fkld", "rkld"};
  std::size_t mc_samples = 100000;
  std::optional<std::uint64_t> seed;
};

struct SweepArgs {
  SweepConfig config;
  std::filesystem::path out;
};

struct GenSpec {
  std::size_t n = 1000;
  std::size_t m = 100;
  double side = 20.0;
  std::optional<std::uint64_t> seed;
};

/// Parses "n=1000,m=100,side=20[,seed=7]"; missing keys keep their defaults.
GenSpec parse_gen_spec(const std::string& text);

struct ClusterArgs {
  std::optional<std::filesystem::path> data;
  std::optional<GenSpec> gen;
  std::size_t over = 15;
  std::size_t target = 6;
  CostKind method = CostKind::kArklFull;
  std::filesystem::path out_prefix;
  std::optional<std::uint64_t> seed;
  std::size_t max_iters = 500;
  double tol = 1e-6;
};

// Each command throws ValidationError / NumericalError / EmError; run_cli
// maps them to exit codes.
void cmd_reduce(const ReduceArgs& args, std::ostream& err);
void cmd_divergence(const DivergenceArgs& args, std::ostream& out, std::ostream& err);
/// Returns the number of rows whose quadrature did not converge.
std::size_t cmd_sweep(const SweepArgs& args, std::ostream& err);
void cmd_cluster(const ClusterArgs& args, std::ostream& out, std::ostream& err);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gmr::cli
