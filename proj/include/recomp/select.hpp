#pragma once
// Budget-constrained selection of executions to refresh, as a 0-1 knapsack:
// an exact DP over conservatively integerized weights, a density greedy with
// the classic 1/2-of-optimal bound, and a subset-enumeration oracle.

#include <set>
#include <string>
#include <vector>

#include "recomp/config.hpp"

namespace recomp {

struct KnapsackItem {
  std::string execution_id;
  double value = 0.0;   // estimated impact, in [0,1]
  double weight = 0.0;  // estimated cost, >= 0
};

enum class SolverKind { exact, greedy, brute };

std::string to_string(SolverKind k);

struct SelectionPlan {
  std::set<std::string> selected;
  double total_value = 0.0;   // sum over selected, accumulated in id order
  double total_weight = 0.0;  // un-rounded weights; always <= budget
  double budget = 0.0;
  SolverKind solver = SolverKind::exact;
};

// Dynamic program over integer capacity floor(budget/granularity) with item
// weights ceil(weight/granularity); the ceiling keeps the un-rounded total
// within budget. Ties resolve to lower total weight, then the
// lexicographically smallest sorted execution_id sequence.
SelectionPlan solve_exact(const std::vector<KnapsackItem>& items, double budget,
                          double granularity);

// Density-descending greedy (zero-weight positive-value items taken
// unconditionally first), returning the better of the greedy plan and the
// best single fitting item: total_value >= 1/2 of the fractional optimum.
SelectionPlan solve_greedy(const std::vector<KnapsackItem>& items, double budget);

// Exhaustive enumeration, |items| <= 24. Same tie-breaking as solve_exact.
SelectionPlan solve_brute(const std::vector<KnapsackItem>& items, double budget);

// Dispatch per SolverConfig: mode "exact"/"greedy" forced, "auto" uses exact
// for N <= 1000 and greedy beyond; granularity <= 0 means budget/1e4.
SelectionPlan solve(const std::vector<KnapsackItem>& items, double budget,
                    const SolverConfig& cfg);

}  // namespace recomp
