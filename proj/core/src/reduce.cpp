#include "gmr/reduce.hpp"

#include <sstream>

namespace gmr {

ReductionResult reduce(const GaussianMixture& m, std::size_t target,
                       CostKind kind, const ReduceOptions& opts) {
  if (target < 1 || target > m.size()) {
    std::ostringstream os;
    os << "reduce: target " << target << " outside [1, " << m.size() << "]";
    throw ValidationError(os.str());
  }
  if (!m.is_normalized()) throw ValidationError("reduce: mixture must be normalized");

  ReductionResult result{m, ReductionTrace{kind, {}}};
  if (target == m.size()) return result;

  CostTable table(m, kind);
  EvalCounts seen;
  GaussianMixture& current = result.mixture;

  while (current.size() > target) {
    ReductionStep step;
    step.evaluations = table.counts() - seen;
    seen = table.counts();

    const auto hypotheses = enumerate_hypotheses(current, considers_pruning(kind));
    if (opts.record_all_costs) step.all_costs.emplace();

    bool found = false;
    for (const Hypothesis& h : hypotheses) {
      const double c = table.cost(h);
      if (std::isnan(c)) {
        throw NumericalError("reduce: cost of " + to_string(h) + " is NaN");
      }
      if (step.all_costs) step.all_costs->push_back({h, c});
      if (std::isinf(c) && c > 0.0) {
        if (h.is_merge() && table.degenerate(h.i, h.j)) step.degenerate.push_back(h);
        continue;
      }
      // strict comparison keeps the earliest hypothesis among equal costs
      if (!found || c < step.cost) {
        step.chosen = h;
        step.cost = c;
        found = true;
      }
    }
    if (!found) {
      std::ostringstream os;
      os << "reduce: no hypothesis with finite cost at size " << current.size();
      throw NumericalError(os.str());
    }

    GaussianMixture next = apply(current, step.chosen);
    step.size_after = next.size();
    step.negative_cost = step.cost < 0.0;
    if (next.size() > target) table.update(step.chosen, next);
    current = std::move(next);
    result.trace.steps.push_back(std::move(step));
  }
  return result;
}

EvalCounts cost_eval_count(const ReductionTrace& trace) {
  EvalCounts total;
  for (const auto& s : trace.steps) total += s.evaluations;
  return total;
}

GaussianMixture replay(const GaussianMixture& m, const ReductionTrace& trace) {
  GaussianMixture current = m;
  for (const auto& s : trace.steps) current = apply(current, s.chosen);
  return current;
}

}  // namespace gmr
