#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rtsim/rng.hpp"
#include "rtsim/types.hpp"

namespace rtsim::replanning {

// Per-agent memory of scored plans. The selected plan is always present and
// never evicted; overflowing inserts evict the worst-scored other plan.
class PlanMemory {
public:
  explicit PlanMemory(DailyPlan initial, std::size_t max_plans = 5);

  std::size_t size() const { return plans_.size(); }
  std::size_t max_plans() const { return max_plans_; }
  std::size_t selected_index() const { return selected_; }
  DailyPlan& selected() { return plans_[selected_]; }
  const DailyPlan& selected() const { return plans_[selected_]; }
  const std::vector<DailyPlan>& plans() const { return plans_; }

  // Inserts an (unscored) plan, evicts the worst scored non-selected plan on
  // overflow, selects the new plan.
  void insert_and_select(DailyPlan plan);
  void select(std::size_t index);

  // Blend an executed score into the selected plan (exponential smoothing on
  // re-execution).
  void record_executed_score(double score, double smoothing_new_weight);

  double best_score() const;
  double worst_score() const;

private:
  std::vector<DailyPlan> plans_;
  std::size_t selected_ = 0;
  std::size_t max_plans_ = 5;
};

struct StrategyWeights {
  double p_select = 0.8;
  double p_mode_mutation = 0.1;
  double p_time_mutation = 0.1;
  int innovation_stop_iteration = -1;  // <0: never stop

  void validate() const;
};

// Logit selection over scored plans: p_i proportional to
// exp(beta * (S_i - max_j S_j)). Throws DataError on unscored plans.
std::size_t select_plan(const PlanMemory& memory, double beta_select, Rng& rng);

struct ModeAvailability {
  bool car = false;
  bool robotaxi = false;
  std::vector<Mode> modes() const;
};

// One uniformly chosen leg switches to a uniformly chosen different
// available mode; the copy is returned unscored.
DailyPlan mutate_mode(const DailyPlan& plan, const ModeAvailability& avail, Rng& rng);

// One non-final activity end time shifts by Normal(0, sigma), clamped to
// keep strictly increasing times with a minimum activity duration.
DailyPlan mutate_end_times(const DailyPlan& plan, double sigma_sec, Rng& rng,
                           std::int64_t min_duration_sec = 300);

enum class Strategy { select, mode_mutation, time_mutation };

// Draw and apply one strategy for one agent; returns which one ran.
Strategy evolve_agent(PlanMemory& memory, const StrategyWeights& weights, int iteration,
                      double beta_select, const ModeAvailability& avail, double sigma_sec,
                      Rng& rng);

class ConvergenceMonitor {
public:
  ConvergenceMonitor(int window = 10, double epsilon = 1e-3)
      : window_(window), epsilon_(epsilon) {}

  void append(double mean_executed_score) { history_.push_back(mean_executed_score); }
  const std::vector<double>& history() const { return history_; }
  int window() const { return window_; }

  // true iff |mean(last W) - mean(previous W)| / max(|mean(previous W)|, 1)
  // is below epsilon, given at least 2W observations.
  bool has_converged() const;

private:
  int window_;
  double epsilon_;
  std::vector<double> history_;
};

}  // namespace rtsim::replanning
