#include "rtsim/synthpop.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "rtsim/csv.hpp"

namespace rtsim::synthpop {

namespace {

// Range-label grammar: "N", "N+", "<N", "N-M" (inclusive ends).
bool label_matches(const std::string& label, double v) {
  auto num = [](const std::string& s) {
    double d = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc() || p != s.data() + s.size())
      throw DataError("bad numeric bin label: '" + s + "'");
    return d;
  };
  if (label.empty()) throw DataError("empty bin label");
  if (label.front() == '<') return v < num(label.substr(1));
  if (label.back() == '+') return v >= num(label.substr(0, label.size() - 1));
  auto dash = label.find('-', 1);  // skip a leading minus sign
  if (dash != std::string::npos) {
    double lo = num(label.substr(0, dash));
    double hi = num(label.substr(dash + 1));
    return v >= lo && v <= hi;
  }
  return v == num(label);
}

std::size_t numeric_bin(const std::vector<std::string>& bins, double v,
                        const std::string& attr) {
  for (std::size_t i = 0; i < bins.size(); ++i)
    if (label_matches(bins[i], v)) return i;
  throw DataError("value " + std::to_string(v) + " outside every bin of control '" + attr +
                  "'");
}

std::size_t categorical_bin(const std::vector<std::string>& bins, const std::string& v,
                            const std::string& attr) {
  for (std::size_t i = 0; i < bins.size(); ++i)
    if (bins[i] == v) return i;
  throw DataError("category '" + v + "' outside every bin of control '" + attr + "'");
}

}  // namespace

std::size_t ControlSpec::bin_of_household(const Household& hh) const {
  if (attribute == "cars") return numeric_bin(bins, hh.cars, attribute);
  if (attribute == "size") return numeric_bin(bins, double(hh.member_ids.size()), attribute);
  throw DataError("unknown household control attribute '" + attribute + "'");
}

std::size_t ControlSpec::bin_of_person(const Person& p) const {
  if (attribute == "age") return numeric_bin(bins, p.age, attribute);
  if (attribute == "sex") return categorical_bin(bins, to_string(p.sex), attribute);
  if (attribute == "spc") return categorical_bin(bins, to_string(p.spc), attribute);
  throw DataError("unknown person control attribute '" + attribute + "'");
}

std::vector<ControlSpec> default_controls() {
  std::vector<ControlSpec> out;
  out.push_back({ControlSpec::Level::household, "cars", {"0", "1", "2+"}});
  out.push_back({ControlSpec::Level::person, "age", {"<14", "14-44", "45-59", "60+"}});
  ControlSpec spc{ControlSpec::Level::person, "spc", {}};
  for (Spc s : kAllSpc) spc.bins.push_back(to_string(s));
  out.push_back(std::move(spc));
  return out;
}

BinCounts count_bins(const std::vector<const Household*>& households,
                     const std::vector<std::vector<const Person*>>& members,
                     const std::vector<ControlSpec>& controls) {
  BinCounts counts;
  for (const auto& c : controls) counts[c.attribute].assign(c.bins.size(), 0.0);
  for (std::size_t h = 0; h < households.size(); ++h) {
    for (const auto& c : controls) {
      auto& vec = counts[c.attribute];
      if (c.level == ControlSpec::Level::household) {
        vec[c.bin_of_household(*households[h])] += 1.0;
      } else {
        for (const Person* p : members[h]) vec[c.bin_of_person(*p)] += 1.0;
      }
    }
  }
  return counts;
}

double compute_fitness(const BinCounts& synth_counts, const ZoneTargets& targets,
                       const std::vector<ControlSpec>& controls) {
  double dev = 0.0, total = 0.0, synth_total = 0.0;
  for (const auto& c : controls) {
    auto sit = synth_counts.find(c.attribute);
    auto tit = targets.targets.find(c.attribute);
    if (sit == synth_counts.end() || tit == targets.targets.end())
      throw DataError("fitness: control '" + c.attribute + "' missing from counts");
    if (sit->second.size() != c.bins.size() || tit->second.size() != c.bins.size())
      throw DataError("fitness: bin count mismatch for control '" + c.attribute + "'");
    for (std::size_t b = 0; b < c.bins.size(); ++b) {
      dev += std::abs(sit->second[b] - tit->second[b]);
      total += tit->second[b];
      synth_total += sit->second[b];
    }
  }
  if (total <= 0.0)
    return synth_total > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return dev / total;
}

namespace {

struct SampleView {
  std::vector<const Household*> households;
  std::vector<std::vector<const Person*>> members;
};

SampleView make_view(const Population& sample) {
  SampleView v;
  v.households.reserve(sample.households.size());
  v.members.reserve(sample.households.size());
  for (const auto& hh : sample.households) {
    v.households.push_back(&hh);
    std::vector<const Person*> mem;
    mem.reserve(hh.member_ids.size());
    for (Id pid : hh.member_ids) mem.push_back(&sample.person(pid));
    v.members.push_back(std::move(mem));
  }
  return v;
}

// Incremental bin bookkeeping for single-household swaps.
struct CountsState {
  BinCounts counts;
  const std::vector<ControlSpec>* controls;
  const SampleView* view;

  void add(std::size_t sample_idx, double sign) {
    for (const auto& c : *controls) {
      auto& vec = counts[c.attribute];
      if (c.level == ControlSpec::Level::household) {
        vec[c.bin_of_household(*view->households[sample_idx])] += sign;
      } else {
        for (const Person* p : view->members[sample_idx]) vec[c.bin_of_person(*p)] += sign;
      }
    }
  }
};

}  // namespace

ZoneSynthesisResult synthesize_zone(const Population& sample, const ZoneTargets& targets,
                                    const std::vector<ControlSpec>& controls, Rng& rng,
                                    const SynthesisConfig& cfg) {
  ZoneSynthesisResult res;
  const int n = targets.household_count;
  if (n == 0) return res;
  if (sample.households.empty())
    throw ConfigError("zone " + std::to_string(targets.zone_id) +
                      ": empty microdata sample with positive household target");

  SampleView view = make_view(sample);
  const std::size_t s = view.households.size();

  std::vector<std::size_t> chosen(n);
  for (auto& c : chosen) c = rng.uniform_int(s);

  CountsState state;
  state.controls = &controls;
  state.view = &view;
  for (const auto& c : controls) state.counts[c.attribute].assign(c.bins.size(), 0.0);
  for (auto idx : chosen) state.add(idx, +1.0);

  double fit = compute_fitness(state.counts, targets, controls);
  std::vector<std::size_t> best = chosen;
  double best_fit = fit;
  res.trace.push_back({fit, false});

  const long budget = static_cast<long>(cfg.swap_budget_per_household) * n;
  int consecutive_rejects = 0;
  for (long step = 0; step < budget && fit > 0.0; ++step) {
    const std::size_t slot = rng.uniform_int(n);
    const std::size_t cand = rng.uniform_int(s);
    const std::size_t old = chosen[slot];
    state.add(old, -1.0);
    state.add(cand, +1.0);
    const double new_fit = compute_fitness(state.counts, targets, controls);
    bool forced = false;
    bool accept = new_fit < fit;
    if (!accept && ++consecutive_rejects >= cfg.forced_accept_after_rejects) {
      accept = true;
      forced = true;
    }
    if (accept) {
      chosen[slot] = cand;
      fit = new_fit;
      consecutive_rejects = 0;
      res.trace.push_back({fit, forced});
      if (fit < best_fit) {
        best_fit = fit;
        best = chosen;
      }
    } else {
      state.add(cand, -1.0);
      state.add(old, +1.0);
    }
  }

  res.fitness = best_fit;
  res.budget_exhausted = best_fit > 0.0;

  // Clone best composition with zone-local ids; callers renumber.
  Id next_hh = 0, next_person = 0;
  for (std::size_t idx : best) {
    Household hh = *view.households[idx];
    hh.household_id = next_hh++;
    hh.zone_id = targets.zone_id;
    hh.member_ids.clear();
    for (const Person* src : view.members[idx]) {
      Person p = *src;
      p.person_id = next_person++;
      p.household_id = hh.household_id;
      p.zone_id = targets.zone_id;
      hh.member_ids.push_back(p.person_id);
      res.persons.push_back(p);
    }
    res.households.push_back(std::move(hh));
  }
  return res;
}

PopulationSynthesisResult synthesize_population(const Population& sample,
                                                const std::vector<ZoneTargets>& all_targets,
                                                const std::vector<ControlSpec>& controls,
                                                std::uint64_t seed,
                                                const SynthesisConfig& cfg) {
  std::vector<const ZoneTargets*> ordered;
  ordered.reserve(all_targets.size());
  for (const auto& t : all_targets) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const ZoneTargets* a, const ZoneTargets* b) { return a->zone_id < b->zone_id; });
  for (std::size_t i = 1; i < ordered.size(); ++i)
    if (ordered[i]->zone_id == ordered[i - 1]->zone_id)
      throw ConfigError("duplicate zone id " + std::to_string(ordered[i]->zone_id) +
                        " in zone targets");

  PopulationSynthesisResult out;
  Id next_hh = 1, next_person = 1;
  for (const ZoneTargets* zt : ordered) {
    Rng zone_rng = Rng::derive(seed, static_cast<std::uint64_t>(zt->zone_id));
    ZoneSynthesisResult zr;
    try {
      zr = synthesize_zone(sample, *zt, controls, zone_rng, cfg);
    } catch (const std::exception& e) {
      throw ConfigError("zone " + std::to_string(zt->zone_id) + ": " + e.what());
    }
    out.zone_fitness[zt->zone_id] = zr.fitness;
    out.zone_budget_exhausted[zt->zone_id] = zr.budget_exhausted;
    const Id hh_base = next_hh, person_base = next_person;
    for (auto& hh : zr.households) {
      hh.household_id += hh_base;
      for (auto& m : hh.member_ids) m += person_base;
      out.population.households.push_back(std::move(hh));
    }
    for (auto& p : zr.persons) {
      p.person_id += person_base;
      p.household_id += hh_base;
      out.population.persons.push_back(p);
    }
    next_hh = hh_base + static_cast<Id>(zr.households.size());
    next_person = person_base + static_cast<Id>(zr.persons.size());
  }
  out.population.rebuild_index();
  return out;
}

std::vector<ZoneValidationRow> validate_population(const Population& pop,
                                                   const std::vector<ZoneTargets>& all_targets,
                                                   const std::vector<ControlSpec>& controls) {
  std::vector<ZoneValidationRow> rows;
  for (const auto& zt : all_targets) {
    std::vector<const Household*> hhs;
    std::vector<std::vector<const Person*>> members;
    for (const auto& hh : pop.households) {
      if (hh.zone_id != zt.zone_id) continue;
      hhs.push_back(&hh);
      std::vector<const Person*> mem;
      for (Id pid : hh.member_ids) mem.push_back(&pop.person(pid));
      members.push_back(std::move(mem));
    }
    BinCounts counts = count_bins(hhs, members, controls);
    double fitness = compute_fitness(counts, zt, controls);
    for (const auto& c : controls) {
      ZoneValidationRow row;
      row.zone_id = zt.zone_id;
      row.control = c.attribute;
      row.fitness = fitness;
      const auto& synth = counts.at(c.attribute);
      const auto& tgt = zt.targets.at(c.attribute);
      for (std::size_t b = 0; b < synth.size(); ++b) {
        double rel = std::abs(synth[b] - tgt[b]) / std::max(tgt[b], 1.0);
        row.max_rel_bin_error = std::max(row.max_rel_bin_error, rel);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_validation_csv(const std::filesystem::path& path,
                          const std::vector<ZoneValidationRow>& rows) {
  csv::Writer w(path);
  w.field(std::string("zoneId")).field("control").field("fitness").field("maxRelBinError");
  w.end_row();
  for (const auto& r : rows) {
    w.field(r.zone_id).field(r.control).field(r.fitness).field(r.max_rel_bin_error);
    w.end_row();
  }
  w.close();
}

std::vector<ZoneTargets> load_zone_targets_csv(const std::filesystem::path& path,
                                               const std::vector<ControlSpec>& controls) {
  auto t = csv::read_file(path);
  std::size_t c_zone = t.column("zoneId");
  std::size_t c_count = t.column("householdCount");
  std::size_t c_control = t.column("control");
  std::size_t c_bin = t.column("bin");
  std::size_t c_target = t.column("target");

  std::map<Id, ZoneTargets> by_zone;
  for (const auto& r : t.rows) {
    Id zone = csv::to_i64(r[c_zone], path.string());
    ZoneTargets& zt = by_zone[zone];
    zt.zone_id = zone;
    zt.household_count = static_cast<int>(csv::to_i64(r[c_count], path.string()));
    if (r[c_control].empty()) continue;
    const ControlSpec* spec = nullptr;
    for (const auto& c : controls)
      if (c.attribute == r[c_control]) spec = &c;
    if (!spec)
      throw ConfigError(path.string() + ": control '" + r[c_control] +
                        "' not among configured controls");
    auto& vec = zt.targets[spec->attribute];
    if (vec.empty()) vec.assign(spec->bins.size(), 0.0);
    auto bin_it = std::find(spec->bins.begin(), spec->bins.end(), r[c_bin]);
    if (bin_it == spec->bins.end())
      throw ConfigError(path.string() + ": unknown bin '" + r[c_bin] + "' for control '" +
                        spec->attribute + "'");
    vec[bin_it - spec->bins.begin()] = csv::to_double(r[c_target], path.string());
  }

  std::vector<ZoneTargets> out;
  out.reserve(by_zone.size());
  for (auto& [zone, zt] : by_zone) {
    for (const auto& c : controls)
      if (!zt.targets.count(c.attribute)) zt.targets[c.attribute].assign(c.bins.size(), 0.0);
    out.push_back(std::move(zt));
  }
  return out;
}

void write_zone_targets_csv(const std::filesystem::path& path,
                            const std::vector<ZoneTargets>& targets,
                            const std::vector<ControlSpec>& controls) {
  csv::Writer w(path);
  w.field(std::string("zoneId")).field("householdCount").field("control").field("bin").field(
      "target");
  w.end_row();
  for (const auto& zt : targets) {
    for (const auto& c : controls) {
      const auto& vec = zt.targets.at(c.attribute);
      for (std::size_t b = 0; b < c.bins.size(); ++b) {
        w.field(zt.zone_id)
            .field(static_cast<std::int64_t>(zt.household_count))
            .field(c.attribute)
            .field(c.bins[b])
            .field(vec[b]);
        w.end_row();
      }
    }
  }
  w.close();
}

}  // namespace rtsim::synthpop
