#include "recomp/select.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "recomp/error.hpp"

namespace recomp {

namespace {

// DP grid guard: value + weight doubles per cell.
constexpr double kMaxDpCells = 3e7;

void validate_instance(const std::vector<KnapsackItem>& items, double budget) {
  if (!std::isfinite(budget) || budget < 0) {
    fail(Errc::config, "knapsack: budget must be finite and non-negative");
  }
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (!std::isfinite(item.value) || !std::isfinite(item.weight)) {
      fail(Errc::config, "knapsack item '" + item.execution_id +
                             "': non-finite value or weight");
    }
    if (item.value < 0.0 || item.value > 1.0) {
      fail(Errc::config,
           "knapsack item '" + item.execution_id + "': value outside [0,1]");
    }
    if (item.weight < 0.0) {
      fail(Errc::config,
           "knapsack item '" + item.execution_id + "': negative weight");
    }
    if (!seen.insert(item.execution_id).second) {
      fail(Errc::config,
           "knapsack: duplicate execution_id '" + item.execution_id + "'");
    }
  }
}

std::vector<KnapsackItem> sorted_by_id(const std::vector<KnapsackItem>& items) {
  std::vector<KnapsackItem> out = items;
  std::sort(out.begin(), out.end(), [](const KnapsackItem& a, const KnapsackItem& b) {
    return a.execution_id < b.execution_id;
  });
  return out;
}

// Totals are always re-accumulated in sorted execution_id order so that
// value-equal plans from different solvers compare bit-identically.
SelectionPlan finish_plan(const std::vector<KnapsackItem>& items,
                          std::set<std::string> selected, double budget,
                          SolverKind solver) {
  std::map<std::string, const KnapsackItem*> by_id;
  for (const auto& item : items) by_id.emplace(item.execution_id, &item);

  SelectionPlan plan;
  plan.budget = budget;
  plan.solver = solver;
  plan.selected = std::move(selected);
  for (const auto& id : plan.selected) {
    const KnapsackItem* item = by_id.at(id);
    plan.total_value += item->value;
    plan.total_weight += item->weight;
  }
  return plan;
}

// value desc, weight asc, then lexicographically smallest id sequence.
bool plan_better(const SelectionPlan& a, const SelectionPlan& b) {
  if (a.total_value != b.total_value) return a.total_value > b.total_value;
  if (a.total_weight != b.total_weight) return a.total_weight < b.total_weight;
  return a.selected < b.selected;
}

}  // namespace

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::exact: return "exact";
    case SolverKind::greedy: return "greedy";
    case SolverKind::brute: return "brute";
  }
  fail(Errc::config, "invalid solver kind");
}

SelectionPlan solve_exact(const std::vector<KnapsackItem>& items, double budget,
                          double granularity) {
  validate_instance(items, budget);
  if (!std::isfinite(granularity) || granularity <= 0) {
    fail(Errc::config, "solve_exact: granularity must be positive");
  }

  const std::vector<KnapsackItem> ordered = sorted_by_id(items);
  std::set<std::string> selected;
  std::vector<const KnapsackItem*> dp_items;
  for (const auto& item : ordered) {
    if (item.value <= 0.0 || item.weight > budget) continue;
    if (item.weight == 0.0) {
      selected.insert(item.execution_id);  // free value, taken outright
    } else {
      dp_items.push_back(&item);
    }
  }

  double cap_d = std::floor(budget / granularity);
  while (cap_d > 0 && cap_d * granularity > budget) cap_d -= 1;
  if ((static_cast<double>(dp_items.size()) + 1) * (cap_d + 1) > kMaxDpCells) {
    fail(Errc::config,
         "solve_exact: DP too large; increase solver.granularity or use greedy");
  }
  const std::uint64_t cap = static_cast<std::uint64_t>(cap_d);

  // Conservative integerization: grains * granularity never undershoots the
  // true weight, so the un-rounded total stays within budget.
  std::vector<const KnapsackItem*> feasible;
  std::vector<std::uint64_t> feasible_grains;
  for (std::size_t i = 0; i < dp_items.size(); ++i) {
    auto g = static_cast<std::uint64_t>(std::ceil(dp_items[i]->weight / granularity));
    while (static_cast<double>(g) * granularity < dp_items[i]->weight) ++g;
    if (g <= cap) {
      feasible.push_back(dp_items[i]);
      feasible_grains.push_back(g);
    }
  }

  const std::size_t n = feasible.size();
  const std::size_t stride = static_cast<std::size_t>(cap) + 1;
  std::vector<double> val((n + 1) * stride, 0.0);
  std::vector<double> wt((n + 1) * stride, 0.0);

  // Suffix DP: row i holds the optimum over items i..n-1. Cells carry the
  // maximum value and, among value-optimal choices, the minimum true weight.
  for (std::size_t i = n; i-- > 0;) {
    const double v = feasible[i]->value;
    const double w = feasible[i]->weight;
    const std::uint64_t g = feasible_grains[i];
    for (std::uint64_t c = 0; c <= cap; ++c) {
      double best_v = val[(i + 1) * stride + c];
      double best_w = wt[(i + 1) * stride + c];
      if (g <= c) {
        const double take_v = v + val[(i + 1) * stride + (c - g)];
        const double take_w = w + wt[(i + 1) * stride + (c - g)];
        if (take_v > best_v || (take_v == best_v && take_w < best_w)) {
          best_v = take_v;
          best_w = take_w;
        }
      }
      val[i * stride + c] = best_v;
      wt[i * stride + c] = best_w;
    }
  }

  // Walk in execution_id order; on exact (value, weight) ties include the
  // earlier item, which yields the lexicographically smallest id sequence.
  std::uint64_t c = cap;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t g = feasible_grains[i];
    if (g > c) continue;
    const double take_v = feasible[i]->value + val[(i + 1) * stride + (c - g)];
    const double take_w = feasible[i]->weight + wt[(i + 1) * stride + (c - g)];
    const double skip_v = val[(i + 1) * stride + c];
    const double skip_w = wt[(i + 1) * stride + c];
    if (take_v > skip_v || (take_v == skip_v && take_w <= skip_w)) {
      selected.insert(feasible[i]->execution_id);
      c -= g;
    }
  }

  return finish_plan(items, std::move(selected), budget, SolverKind::exact);
}

SelectionPlan solve_greedy(const std::vector<KnapsackItem>& items, double budget) {
  validate_instance(items, budget);

  const std::vector<KnapsackItem> ordered = sorted_by_id(items);
  std::set<std::string> preselected;
  std::vector<const KnapsackItem*> rest;
  for (const auto& item : ordered) {
    if (item.value <= 0.0 || item.weight > budget) continue;
    if (item.weight == 0.0) {
      preselected.insert(item.execution_id);
    } else {
      rest.push_back(&item);
    }
  }

  std::vector<const KnapsackItem*> by_density = rest;
  std::sort(by_density.begin(), by_density.end(),
            [](const KnapsackItem* a, const KnapsackItem* b) {
              const double da = a->value / a->weight;
              const double db = b->value / b->weight;
              if (da != db) return da > db;
              if (a->weight != b->weight) return a->weight < b->weight;
              return a->execution_id < b->execution_id;
            });

  std::set<std::string> greedy_ids = preselected;
  double used = 0.0;
  for (const KnapsackItem* item : by_density) {
    if (used + item->weight <= budget) {
      greedy_ids.insert(item->execution_id);
      used += item->weight;
    }
  }
  SelectionPlan greedy_plan =
      finish_plan(items, std::move(greedy_ids), budget, SolverKind::greedy);

  // The classic guard: the best single fitting item can beat the density
  // order; returning the better of the two keeps >= 1/2 of the optimum.
  const KnapsackItem* best_single = nullptr;
  for (const KnapsackItem* item : rest) {
    if (best_single == nullptr || item->value > best_single->value ||
        (item->value == best_single->value && item->weight < best_single->weight)) {
      best_single = item;
    }
  }
  if (best_single != nullptr) {
    std::set<std::string> single_ids = preselected;
    single_ids.insert(best_single->execution_id);
    SelectionPlan single_plan =
        finish_plan(items, std::move(single_ids), budget, SolverKind::greedy);
    if (plan_better(single_plan, greedy_plan)) return single_plan;
  }
  return greedy_plan;
}

SelectionPlan solve_brute(const std::vector<KnapsackItem>& items, double budget) {
  validate_instance(items, budget);
  if (items.size() > 24) {
    fail(Errc::config, "solve_brute: too many items (" +
                           std::to_string(items.size()) + " > 24)");
  }

  const std::vector<KnapsackItem> ordered = sorted_by_id(items);
  std::vector<const KnapsackItem*> usable;
  for (const auto& item : ordered) {
    if (item.value > 0.0 && item.weight <= budget) usable.push_back(&item);
  }

  const std::size_t n = usable.size();
  auto ids_of = [&](std::uint32_t mask) {
    std::set<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) ids.insert(usable[i]->execution_id);
    }
    return ids;
  };

  // Values accumulate in id order (usable is id-sorted), matching the
  // canonical totals finish_plan computes.
  std::uint32_t best_mask = 0;
  double best_value = 0.0;
  double best_weight = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    double value = 0.0;
    double weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        value += usable[i]->value;
        weight += usable[i]->weight;
      }
    }
    if (weight > budget) continue;
    if (value > best_value || (value == best_value && weight < best_weight) ||
        (value == best_value && weight == best_weight &&
         ids_of(mask) < ids_of(best_mask))) {
      best_mask = mask;
      best_value = value;
      best_weight = weight;
    }
  }
  return finish_plan(items, ids_of(best_mask), budget, SolverKind::brute);
}

SelectionPlan solve(const std::vector<KnapsackItem>& items, double budget,
                    const SolverConfig& cfg) {
  const double granularity =
      cfg.granularity > 0 ? cfg.granularity : (budget > 0 ? budget / 1e4 : 1.0);
  if (cfg.mode == "exact") return solve_exact(items, budget, granularity);
  if (cfg.mode == "greedy") return solve_greedy(items, budget);
  if (cfg.mode == "auto") {
    if (items.size() <= 1000) return solve_exact(items, budget, granularity);
    return solve_greedy(items, budget);
  }
  fail(Errc::config, "solver.mode must be auto, exact, or greedy (got '" +
                         cfg.mode + "')");
}

}  // namespace recomp
