#include "rtsim/replanning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rtsim::replanning {

PlanMemory::PlanMemory(DailyPlan initial, std::size_t max_plans) : max_plans_(max_plans) {
  if (max_plans_ < 1) throw ConfigError("replanning.max_plans must be >= 1");
  plans_.push_back(std::move(initial));
  selected_ = 0;
}

void PlanMemory::insert_and_select(DailyPlan plan) {
  if (plans_.size() >= max_plans_) {
    // evict the worst-scored plan that is not currently selected
    std::size_t worst = std::numeric_limits<std::size_t>::max();
    double worst_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < plans_.size(); ++i) {
      if (i == selected_) continue;
      const double s =
          plans_[i].score ? *plans_[i].score : -std::numeric_limits<double>::infinity();
      if (s < worst_score) {
        worst_score = s;
        worst = i;
      }
    }
    if (worst == std::numeric_limits<std::size_t>::max())
      throw DataError("plan memory of capacity 1 cannot accept new plans");
    plans_.erase(plans_.begin() + static_cast<std::ptrdiff_t>(worst));
    if (worst < selected_) --selected_;
  }
  plans_.push_back(std::move(plan));
  selected_ = plans_.size() - 1;
}

void PlanMemory::select(std::size_t index) {
  if (index >= plans_.size()) throw DataError("plan index out of range");
  selected_ = index;
}

void PlanMemory::record_executed_score(double score, double smoothing_new_weight) {
  DailyPlan& p = plans_[selected_];
  if (p.score)
    p.score = (1.0 - smoothing_new_weight) * *p.score + smoothing_new_weight * score;
  else
    p.score = score;
}

double PlanMemory::best_score() const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : plans_)
    if (p.score) best = std::max(best, *p.score);
  return best;
}

double PlanMemory::worst_score() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& p : plans_)
    if (p.score) worst = std::min(worst, *p.score);
  return worst;
}

void StrategyWeights::validate() const {
  if (p_select < 0 || p_mode_mutation < 0 || p_time_mutation < 0)
    throw ConfigError("replanning weights must be non-negative");
  const double sum = p_select + p_mode_mutation + p_time_mutation;
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("replanning weights must sum to 1, got " + std::to_string(sum));
}

std::size_t select_plan(const PlanMemory& memory, double beta_select, Rng& rng) {
  const auto& plans = memory.plans();
  double max_score = -std::numeric_limits<double>::infinity();
  for (const auto& p : plans) {
    if (!p.score) throw DataError("select_plan: unscored plan in memory");
    max_score = std::max(max_score, *p.score);
  }
  std::vector<double> weights;
  weights.reserve(plans.size());
  for (const auto& p : plans) weights.push_back(std::exp(beta_select * (*p.score - max_score)));
  return rng.categorical(weights);
}

std::vector<Mode> ModeAvailability::modes() const {
  std::vector<Mode> out;
  if (car) out.push_back(Mode::car);
  out.push_back(Mode::pt);
  out.push_back(Mode::walk);
  if (robotaxi) out.push_back(Mode::robotaxi);
  return out;
}

DailyPlan mutate_mode(const DailyPlan& plan, const ModeAvailability& avail, Rng& rng) {
  DailyPlan out = plan;
  out.clear_realization();
  out.score.reset();
  if (out.legs.empty()) return out;
  const std::vector<Mode> available = avail.modes();

  // resample the leg if it has no alternative; give up when none has one
  std::vector<std::size_t> mutable_legs;
  for (std::size_t i = 0; i < out.legs.size(); ++i) {
    for (Mode m : available)
      if (m != out.legs[i].mode) {
        mutable_legs.push_back(i);
        break;
      }
  }
  if (mutable_legs.empty()) return out;
  const std::size_t leg = mutable_legs[rng.uniform_int(mutable_legs.size())];
  std::vector<Mode> alternatives;
  for (Mode m : available)
    if (m != out.legs[leg].mode) alternatives.push_back(m);
  out.legs[leg].mode = alternatives[rng.uniform_int(alternatives.size())];
  return out;
}

DailyPlan mutate_end_times(const DailyPlan& plan, double sigma_sec, Rng& rng,
                           std::int64_t min_duration_sec) {
  DailyPlan out = plan;
  out.clear_realization();
  out.score.reset();
  if (out.activities.size() < 2) return out;
  const std::size_t idx = rng.uniform_int(out.activities.size() - 1);
  const double shift = rng.normal(0.0, sigma_sec);
  std::int64_t t = out.activities[idx].planned_end_sec +
                   static_cast<std::int64_t>(std::llround(shift));
  const std::int64_t lower =
      idx == 0 ? min_duration_sec : out.activities[idx - 1].planned_end_sec + min_duration_sec;
  t = std::max(t, lower);
  out.activities[idx].planned_end_sec = t;
  // push successors forward to keep strict monotonicity
  for (std::size_t i = idx + 1; i + 1 < out.activities.size(); ++i) {
    const std::int64_t lo = out.activities[i - 1].planned_end_sec + min_duration_sec;
    if (out.activities[i].planned_end_sec < lo) out.activities[i].planned_end_sec = lo;
  }
  return out;
}

Strategy evolve_agent(PlanMemory& memory, const StrategyWeights& weights, int iteration,
                      double beta_select, const ModeAvailability& avail, double sigma_sec,
                      Rng& rng) {
  const bool innovation_stopped = weights.innovation_stop_iteration >= 0 &&
                                  iteration >= weights.innovation_stop_iteration;
  if (innovation_stopped) {
    memory.select(select_plan(memory, beta_select, rng));
    return Strategy::select;
  }
  const double weights_arr[3] = {weights.p_select, weights.p_mode_mutation,
                                 weights.p_time_mutation};
  const std::size_t pick = rng.categorical({weights_arr, 3});
  if (pick == 1) {
    memory.insert_and_select(mutate_mode(memory.selected(), avail, rng));
    return Strategy::mode_mutation;
  }
  if (pick == 2) {
    memory.insert_and_select(mutate_end_times(memory.selected(), sigma_sec, rng));
    return Strategy::time_mutation;
  }
  memory.select(select_plan(memory, beta_select, rng));
  return Strategy::select;
}

bool ConvergenceMonitor::has_converged() const {
  const std::size_t w = static_cast<std::size_t>(window_);
  if (history_.size() < 2 * w) return false;
  double last = 0.0, prev = 0.0;
  for (std::size_t i = history_.size() - w; i < history_.size(); ++i) last += history_[i];
  for (std::size_t i = history_.size() - 2 * w; i < history_.size() - w; ++i)
    prev += history_[i];
  last /= static_cast<double>(w);
  prev /= static_cast<double>(w);
  return std::abs(last - prev) / std::max(std::abs(prev), 1.0) < epsilon_;
}

}  // namespace rtsim::replanning
