#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmr/cluster.hpp"

namespace gmr::cli {

using json = nlohmann::json;

/// Mixture files whose weights miss one by more than this are rejected;
/// closer ones are renormalized with a warning.
inline constexpr double kFileWeightTol = 1e-6;
/// Relative asymmetry accepted in a covariance read from disk before it is
/// symmetrized exactly.
inline constexpr double kFileSymmetryTol = 1e-9;

// {"dim": k, "components": [{"weight": w, "mean": [...], "cov": [[...], ...]}]}
json mixture_to_json(const GaussianMixture& m);
GaussianMixture mixture_from_json(const json& doc, std::vector<std::string>* warnings);

GaussianMixture read_mixture_file(const std::filesystem::path& path,
                                  std::vector<std::string>* warnings);
void write_json_file(const std::filesystem::path& path, const json& doc);

/// Trace document: method, per-step action/indices (one-based)/cost/
/// size_after, and the final mixture.
json trace_to_json(const ReductionTrace& trace, std::size_t input_size,
                   std::size_t target, const GaussianMixture& final_mixture);
/// Reads back the method and the chosen hypotheses of a trace document.
ReductionTrace trace_from_json(const json& doc);

/// Point CSV: header x1..xk[,label[,truth]]. Labels are one-based with 0 for
/// discarded points; truth is one-based with 0 for spurious points.
void write_points_csv(const std::filesystem::path& path, const LabeledDataset& data);
/// Reads the x* columns of a point CSV; other columns are ignored.
std::vector<Vector> read_points_csv(const std::filesystem::path& path);

}  // namespace gmr::cli
