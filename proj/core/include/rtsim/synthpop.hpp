#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rtsim/rng.hpp"
#include "rtsim/types.hpp"

namespace rtsim::synthpop {

// Control definition: an attribute binned at either the household or the
// person level. Bin labels follow a small range grammar for numeric
// attributes ("0", "2+", "<14", "14-44", "60+") and enum names for
// categorical ones.
struct ControlSpec {
  enum class Level { household, person };
  Level level = Level::household;
  std::string attribute;           // cars | size | age | sex | spc
  std::vector<std::string> bins;   // ordered, disjoint, covering

  // Bin index for a household (with members) or person. Throws DataError if
  // the value falls outside every bin.
  std::size_t bin_of_household(const Household& hh) const;
  std::size_t bin_of_person(const Person& p) const;
};

// Household car ownership {0,1,2+}, person age {<14,14-44,45-59,60+},
// person socio-professional category.
std::vector<ControlSpec> default_controls();

struct ZoneTargets {
  Id zone_id = -1;
  int household_count = 0;
  // per control attribute, per bin (aligned with ControlSpec.bins)
  std::map<std::string, std::vector<double>> targets;
};

// Per-control bin counts of a candidate set, same shape as ZoneTargets.
using BinCounts = std::map<std::string, std::vector<double>>;

BinCounts count_bins(const std::vector<const Household*>& households,
                     const std::vector<std::vector<const Person*>>& members,
                     const std::vector<ControlSpec>& controls);

// Normalized L1 deviation between synthetic and target marginals:
//   sum over controls and bins of |synth - target|, divided by the sum of
//   all targets. Zero exactly at marginal equality. A zero target total with
//   nonzero synthetic counts yields +infinity.
double compute_fitness(const BinCounts& synth_counts, const ZoneTargets& targets,
                       const std::vector<ControlSpec>& controls);

// One accepted state of the synthesis loop.
struct DrawTraceEntry {
  double fitness = 0.0;
  bool forced = false;  // plateau-escape accept
};

struct ZoneSynthesisResult {
  std::vector<Household> households;  // fresh ids, zone assigned, members cloned
  std::vector<Person> persons;
  double fitness = 0.0;
  bool budget_exhausted = false;  // target marginals not met exactly
  std::vector<DrawTraceEntry> trace;
};

struct SynthesisConfig {
  int swap_budget_per_household = 50;
  int forced_accept_after_rejects = 100;
};

// Draw-and-improve synthesis for one zone: household_count uniform draws
// with replacement, then hill-climbing single-household swaps accepted on
// strict fitness decrease, with a forced accept after a run of rejections.
// Best-so-far state is returned.
ZoneSynthesisResult synthesize_zone(const Population& sample, const ZoneTargets& targets,
                                    const std::vector<ControlSpec>& controls, Rng& rng,
                                    const SynthesisConfig& cfg = {});

struct PopulationSynthesisResult {
  Population population;
  std::map<Id, double> zone_fitness;
  std::map<Id, bool> zone_budget_exhausted;
};

// All zones, ascending zone id, each on its own rng stream derived from
// (seed, zone id); ids renumbered sequentially over the merged output.
PopulationSynthesisResult synthesize_population(const Population& sample,
                                                const std::vector<ZoneTargets>& all_targets,
                                                const std::vector<ControlSpec>& controls,
                                                std::uint64_t seed,
                                                const SynthesisConfig& cfg = {});

struct ZoneValidationRow {
  Id zone_id = -1;
  std::string control;
  double fitness = 0.0;        // whole-zone fitness, repeated per control
  double max_rel_bin_error = 0.0;
};

std::vector<ZoneValidationRow> validate_population(const Population& pop,
                                                   const std::vector<ZoneTargets>& all_targets,
                                                   const std::vector<ControlSpec>& controls);

void write_validation_csv(const std::filesystem::path& path,
                          const std::vector<ZoneValidationRow>& rows);

// zoneId,householdCount,control,bin,target
std::vector<ZoneTargets> load_zone_targets_csv(const std::filesystem::path& path,
                                               const std::vector<ControlSpec>& controls);
void write_zone_targets_csv(const std::filesystem::path& path,
                            const std::vector<ZoneTargets>& targets,
                            const std::vector<ControlSpec>& controls);

}  // namespace rtsim::synthpop
