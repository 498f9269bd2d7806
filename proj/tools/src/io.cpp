#include "gmr/cli/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace gmr::cli {
namespace {

std::string where(std::size_t component) {
  return "component " + std::to_string(component + 1);
}

Vector vector_from_json(const json& arr, std::size_t component) {
  if (!arr.is_array()) throw ValidationError(where(component) + ": mean must be an array");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t d = 0; d < arr.size(); ++d) {
    if (!arr[d].is_number()) {
      throw ValidationError(where(component) + ": mean entries must be numbers");
    }
    v[static_cast<Eigen::Index>(d)] = arr[d].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& rows, std::size_t k, std::size_t component) {
  if (!rows.is_array() || rows.size() != k) {
    throw ValidationError(where(component) + ": cov must have " + std::to_string(k) + " rows");
  }
  Matrix m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t r = 0; r < k; ++r) {
    if (!rows[r].is_array() || rows[r].size() != k) {
      throw ValidationError(where(component) + ": cov row " + std::to_string(r + 1) +
                            " must have " + std::to_string(k) + " entries");
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (!rows[r][c].is_number()) {
        throw ValidationError(where(component) + ": cov entries must be numbers");
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
    }
  }
  return m;
}

}  // namespace

json mixture_to_json(const GaussianMixture& m) {
  json comps = json::array();
  for (const auto& c : m.components()) {
    json mean = json::array();
    for (Eigen::Index d = 0; d < c.mean().size(); ++d) mean.push_back(c.mean()[d]);
    json cov = json::array();
    for (Eigen::Index r = 0; r < c.cov().rows(); ++r) {
      json row = json::array();
      for (Eigen::Index col = 0; col < c.cov().cols(); ++col) row.push_back(c.cov()(r, col));
      cov.push_back(std::move(row));
    }
    comps.push_back({{"weight", c.weight()}, {"mean", std::move(mean)}, {"cov", std::move(cov)}});
  }
  return {{"dim", m.dim()}, {"components", std::move(comps)}};
}

GaussianMixture mixture_from_json(const json& doc, std::vector<std::string>* warnings) {
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("components")) {
    throw ValidationError("mixture document needs 'dim' and 'components'");
  }
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    throw ValidationError("'dim' must be a positive integer");
  }
  const auto k = static_cast<std::size_t>(doc["dim"].get<long long>());
  const json& comps = doc["components"];
  if (!comps.is_array() || comps.empty()) {
    throw ValidationError("'components' must be a non-empty array");
  }

  struct Raw {
    double weight;
    Vector mean;
    Matrix cov;
  };
  std::vector<Raw> raw;
  double total = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const json& c = comps[i];
    if (!c.is_object() || !c.contains("weight") || !c.contains("mean") || !c.contains("cov")) {
      throw ValidationError(where(i) + ": needs 'weight', 'mean' and 'cov'");
    }
    if (!c["weight"].is_number()) throw ValidationError(where(i) + ": weight must be a number");
    const double w = c["weight"].get<double>();
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ValidationError(where(i) + ": weight must be positive");
    }
    Vector mean = vector_from_json(c["mean"], i);
    if (static_cast<std::size_t>(mean.size()) != k) {
      throw ValidationError(where(i) + ": mean has length " + std::to_string(mean.size()) +
                            ", expected " + std::to_string(k));
    }
    Matrix cov = matrix_from_json(c["cov"], k, i);
    const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
    if (asym > kFileSymmetryTol * std::max(1.0, cov.cwiseAbs().maxCoeff())) {
      throw ValidationError(where(i) + ": covariance is not symmetric");
    }
    cov = 0.5 * (cov + cov.transpose());
    total += w;
    raw.push_back({w, std::move(mean), std::move(cov)});
  }

  if (std::abs(total - 1.0) > kFileWeightTol) {
    std::ostringstream os;
    os << "weights sum to " << std::setprecision(17) << total << ", expected 1";
    throw ValidationError(os.str());
  }
  // Within the library-wide tolerance the weights are kept verbatim, so a
  // parse/serialize cycle is the identity.
  const bool renormalize = std::abs(total - 1.0) > tol::kWeightSum;
  if (renormalize && warnings) {
    std::ostringstream os;
    os << "weights sum to " << std::setprecision(17) << total << "; renormalized";
    warnings->push_back(os.str());
  }

  std::vector<GaussianComponent> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    try {
      const double w = renormalize ? raw[i].weight / total : raw[i].weight;
      out.emplace_back(w, std::move(raw[i].mean), std::move(raw[i].cov));
    } catch (const std::exception& e) {
      throw ValidationError(where(i) + ": " + e.what());
    }
  }
  return GaussianMixture(std::move(out));
}

GaussianMixture read_mixture_file(const std::filesystem::path& path,
                                  std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return mixture_from_json(doc, warnings);
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json trace_to_json(const ReductionTrace& trace, std::size_t input_size,
                   std::size_t target, const GaussianMixture& final_mixture) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    const Hypothesis& h = s.chosen;
    json step = {
        {"action", h.is_prune() ? "prune" : "merge"},
        {"indices", h.is_prune() ? json::array({h.j + 1}) : json::array({h.i + 1, h.j + 1})},
        {"cost", s.cost},
        {"size_after", s.size_after},
        {"negative_cost", s.negative_cost},
        {"evaluations",
         {{"kld", s.evaluations.kld},
          {"inner_product", s.evaluations.inner_product},
          {"switched_v", s.evaluations.switched_v},
          {"pair_stats", s.evaluations.pair_stats}}},
    };
    if (!s.degenerate.empty()) {
      json skipped = json::array();
      for (const auto& d : s.degenerate) skipped.push_back({d.i + 1, d.j + 1});
      step["degenerate_merges"] = std::move(skipped);
    }
    if (s.all_costs) {
      json all = json::array();
      for (const auto& sc : *s.all_costs) {
        all.push_back({{"hypothesis", to_string(sc.hypothesis)},
                       {"cost", std::isfinite(sc.cost) ? json(sc.cost) : json(nullptr)}});
      }
      step["all_costs"] = std::move(all);
    }
    steps.push_back(std::move(step));
  }
  return {{"method", std::string(to_string(trace.method))},
          {"input_components", input_size},
          {"target", target},
          {"steps", std::move(steps)},
          {"mixture", mixture_to_json(final_mixture)}};
}

ReductionTrace trace_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("method") || !doc.contains("steps")) {
    throw ValidationError("trace document needs 'method' and 'steps'");
  }
  ReductionTrace trace;
  trace.method = parse_cost_kind(doc["method"].get<std::string>());
  for (const auto& s : doc["steps"]) {
    const auto action = s.at("action").get<std::string>();
    const auto idx = s.at("indices").get<std::vector<std::size_t>>();
    ReductionStep step;
    if (action == "prune" && idx.size() == 1 && idx[0] >= 1) {
      step.chosen = Hypothesis::prune(idx[0] - 1);
    } else if (action == "merge" && idx.size() == 2 && idx[0] >= 1 && idx[1] >= 1) {
      step.chosen = Hypothesis::merge(idx[0] - 1, idx[1] - 1);
    } else {
      throw ValidationError("malformed trace step");
    }
    step.cost = s.at("cost").get<double>();
    step.size_after = s.at("size_after").get<std::size_t>();
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

void write_points_csv(const std::filesystem::path& path, const LabeledDataset& data) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  const auto k = data.points.empty() ? 0 : data.points.front().size();
  for (Eigen::Index d = 0; d < k; ++d) out << (d ? "," : "") << 'x' << d + 1;
  const bool labels = data.labels.size() == data.points.size();
  if (labels) out << ",label";
  if (data.truth) out << ",truth";
  out << '\n' << std::setprecision(17);
  for (std::size_t p = 0; p < data.points.size(); ++p) {
    for (Eigen::Index d = 0; d < k; ++d) out << (d ? "," : "") << data.points[p][d];
    if (labels) out << ',' << (data.labels[p] == kDiscarded ? 0 : data.labels[p] + 1);
    if (data.truth) {
      const std::size_t t = (*data.truth)[p];
      out << ',' << (t == kSpurious ? 0 : t + 1);
    }
    out << '\n';
  }
}

std::vector<Vector> read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty file");

  std::vector<std::size_t> columns;
  {
    std::istringstream hs(line);
    std::string name;
    for (std::size_t c = 0; std::getline(hs, name, ','); ++c) {
      if (!name.empty() && name.back() == '\r') name.pop_back();
      if (name.size() > 1 && name[0] == 'x') columns.push_back(c);
    }
  }
  if (columns.empty()) throw ValidationError(path.string() + ": no x1..xk columns");

  std::vector<Vector> points;
  for (std::size_t row = 2; std::getline(in, line); ++row) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    Vector x(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t d = 0; d < columns.size(); ++d) {
      try {
        if (columns[d] >= cells.size()) throw std::out_of_range("missing");
        std::size_t used = 0;
        x[static_cast<Eigen::Index>(d)] = std::stod(cells[columns[d]], &used);
      } catch (const std::exception&) {
        throw ValidationError(path.string() + ": bad value on line " + std::to_string(row));
      }
    }
    points.push_back(std::move(x));
  }
  if (points.empty()) throw ValidationError(path.string() + ": no data rows");
  return points;
}

}  // namespace gmr::cli
