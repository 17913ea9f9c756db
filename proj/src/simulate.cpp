#include "recomp/simulate.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "recomp/engine.hpp"
#include "recomp/error.hpp"
#include "recomp/json_io.hpp"

namespace recomp {

namespace {

using nlohmann::json;

// All randomness flows through these helpers on mt19937_64, whose output
// sequence is pinned by the standard; identical seeds replay identically on
// any platform (std::uniform_int_distribution would not).
std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& xs) {
  return xs[rand_below(rng, xs.size())];
}

std::string zero_padded(const char* prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, n);
  return buf;
}

std::string weighted_status(std::mt19937_64& rng, double p_pathogenic,
                            double p_benign) {
  const double u = rand_unit(rng);
  if (u < p_pathogenic) return kStatusPathogenic;
  if (u < p_pathogenic + p_benign) return kStatusBenign;
  return kStatusUnknown;
}

Record clinvar_record(const std::string& id, const std::string& gene,
                      const std::string& status) {
  Record r;
  r.key = id;
  r.attributes[kGeneAttr] = gene;
  r.attributes[kStatusAttr] = status;
  return r;
}

Record genemap_record(const std::string& term, std::set<std::string> genes) {
  Record r;
  r.key = term;
  r.attributes[kGenesAttr] = std::move(genes);
  return r;
}

struct SimWorld {
  std::vector<std::string> genes;
  std::vector<std::string> terms;
  std::vector<std::string> pool;                    // global variant ids
  std::map<std::string, std::string> variant_gene;  // a variant sits on one gene
  std::set<std::string> catalogued;                 // ids currently in ClinVar
  std::vector<std::string> subjects;
};

std::vector<Record> version_records(const VersionStore& store, const char* id) {
  std::vector<Record> out;
  for (const auto& [key, rec] : store.latest(id)->records) out.push_back(rec);
  return out;
}

// Next change event, as the wire form the engine ingests. Kinds that are
// impossible in the current world state fall back deterministically.
RawChangeEvent next_event(std::mt19937_64& rng, const SimulationConfig& cfg,
                          SimWorld& world, const Engine& engine,
                          std::size_t event_no, std::string* kind_out) {
  const EventMix& mix = cfg.event_mix;
  double u = rand_unit(rng);
  std::string kind;
  if ((u -= mix.cv_add) < 0) {
    kind = "cv_add";
  } else if ((u -= mix.cv_status_change) < 0) {
    kind = "cv_status_change";
  } else if ((u -= mix.cv_remove) < 0) {
    kind = "cv_remove";
  } else if ((u -= mix.om_mapping_change) < 0) {
    kind = "om_mapping_change";
  } else {
    kind = "input_change";
  }
  if ((kind == "cv_status_change" || kind == "cv_remove") &&
      world.catalogued.empty()) {
    kind = "cv_add";
  }

  RawChangeEvent raw;
  raw.event_id = zero_padded("ev", event_no, 4);

  if (kind == "cv_add") {
    std::vector<std::string> uncatalogued;
    for (const auto& id : world.pool) {
      if (!world.catalogued.contains(id)) uncatalogued.push_back(id);
    }
    std::string id;
    if (uncatalogued.empty()) {
      id = zero_padded("vx", world.pool.size(), 4);
      world.pool.push_back(id);
      world.variant_gene[id] = pick(rng, world.genes);
    } else {
      id = pick(rng, uncatalogued);
    }
    auto records = version_records(engine.store(), kClinVarDataset);
    records.push_back(
        clinvar_record(id, world.variant_gene[id], weighted_status(rng, 0.4, 0.3)));
    world.catalogued.insert(id);
    raw.kind = "REFERENCE";
    raw.dataset_id = kClinVarDataset;
    raw.records = std::move(records);
  } else if (kind == "cv_status_change" || kind == "cv_remove") {
    const std::vector<std::string> ids(world.catalogued.begin(),
                                       world.catalogued.end());
    const std::string id = pick(rng, ids);
    auto records = version_records(engine.store(), kClinVarDataset);
    auto target = std::find_if(records.begin(), records.end(),
                               [&](const Record& r) { return r.key == id; });
    if (kind == "cv_remove") {
      records.erase(target);
      world.catalogued.erase(id);
    } else {
      const std::string current = attr_string(*target, kStatusAttr);
      std::vector<std::string> others;
      for (const char* s : {kStatusUnknown, kStatusBenign, kStatusPathogenic}) {
        if (current != s) others.push_back(s);
      }
      target->attributes[kStatusAttr] = pick(rng, others);
    }
    raw.kind = "REFERENCE";
    raw.dataset_id = kClinVarDataset;
    raw.records = std::move(records);
  } else if (kind == "om_mapping_change") {
    const std::string term = pick(rng, world.terms);
    auto records = version_records(engine.store(), kGeneMapDataset);
    auto target = std::find_if(records.begin(), records.end(),
                               [&](const Record& r) { return r.key == term; });
    std::set<std::string> mapping = attr_as_set(target->attributes[kGenesAttr]);
    const bool remove = mapping.size() >= 2 && rand_below(rng, 2) == 0;
    if (remove || mapping.size() == world.genes.size()) {
      std::vector<std::string> present(mapping.begin(), mapping.end());
      mapping.erase(pick(rng, present));
    } else {
      std::vector<std::string> absent;
      for (const auto& g : world.genes) {
        if (!mapping.contains(g)) absent.push_back(g);
      }
      mapping.insert(pick(rng, absent));
    }
    target->attributes[kGenesAttr] = std::move(mapping);
    raw.kind = "REFERENCE";
    raw.dataset_id = kGeneMapDataset;
    raw.records = std::move(records);
  } else {  // input_change
    const std::string subject = pick(rng, world.subjects);
    PatientInput input = *engine.patients().latest(subject);
    input.input_version += 1;
    if (rand_below(rng, 2) == 0) {
      // mutate the variant set
      std::set<std::string> carried;
      for (const auto& v : input.variants) carried.insert(v.id);
      std::vector<std::string> addable;
      for (const auto& id : world.pool) {
        if (!carried.contains(id)) addable.push_back(id);
      }
      const bool remove =
          input.variants.size() > 1 && (addable.empty() || rand_below(rng, 2) == 0);
      if (remove) {
        input.variants.erase(input.variants.begin() +
                             static_cast<std::ptrdiff_t>(
                                 rand_below(rng, input.variants.size())));
      } else if (!addable.empty()) {
        const std::string id = pick(rng, addable);
        input.variants.push_back({id, world.variant_gene[id]});
      }
    } else {
      // mutate the phenotype
      std::vector<std::string> absent;
      for (const auto& t : world.terms) {
        if (!input.phenotype.terms.contains(t)) absent.push_back(t);
      }
      const bool remove = input.phenotype.terms.size() >= 2 &&
                          (absent.empty() || rand_below(rng, 2) == 0);
      if (remove) {
        std::vector<std::string> present(input.phenotype.terms.begin(),
                                         input.phenotype.terms.end());
        input.phenotype.terms.erase(pick(rng, present));
      } else if (!absent.empty()) {
        input.phenotype.terms.insert(pick(rng, absent));
      }
    }
    raw.kind = "INPUT";
    raw.input = std::move(input);
  }
  *kind_out = kind;
  return raw;
}

json config_to_json(const SimulationConfig& cfg) {
  return json{{"seed", cfg.seed},
              {"n_patients", cfg.n_patients},
              {"n_genes", cfg.n_genes},
              {"n_disease_terms", cfg.n_disease_terms},
              {"variants_per_patient", cfg.variants_per_patient},
              {"n_events", cfg.n_events},
              {"event_mix",
               {{"cv_add", cfg.event_mix.cv_add},
                {"cv_status_change", cfg.event_mix.cv_status_change},
                {"cv_remove", cfg.event_mix.cv_remove},
                {"om_mapping_change", cfg.event_mix.om_mapping_change},
                {"input_change", cfg.event_mix.input_change}}},
              {"budget_per_event", cfg.budget_per_event},
              {"estimator",
               {{"impact", cfg.estimator.impact},
                {"rule", {{"benign_weight", cfg.estimator.benign_weight}}},
                {"cost", {{"default_ms", cfg.estimator.default_cost_ms}}}}},
              {"solver",
               {{"mode", cfg.solver.mode}, {"granularity", cfg.solver.granularity}}}};
}

}  // namespace

json run_simulation(const SimulationConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);

  SimWorld world;
  for (int i = 0; i < cfg.n_genes; ++i) {
    world.genes.push_back(zero_padded("G", static_cast<std::size_t>(i) + 1, 3));
  }
  for (int i = 0; i < cfg.n_disease_terms; ++i) {
    world.terms.push_back(zero_padded("DT", static_cast<std::size_t>(i) + 1, 2));
  }

  const std::size_t pool_size = std::max<std::size_t>(
      static_cast<std::size_t>(cfg.variants_per_patient) + 1,
      static_cast<std::size_t>(cfg.n_patients) *
          static_cast<std::size_t>(cfg.variants_per_patient) / 3);
  for (std::size_t i = 0; i < pool_size; ++i) {
    const std::string id = zero_padded("v", i + 1, 5);
    world.pool.push_back(id);
    world.variant_gene[id] = pick(rng, world.genes);
  }

  // GeneMap: each disease term implicates a handful of genes.
  std::vector<Record> genemap;
  for (const auto& term : world.terms) {
    std::set<std::string> genes;
    const std::uint64_t k = 1 + rand_below(rng, 3);
    while (genes.size() < k) genes.insert(pick(rng, world.genes));
    genemap.push_back(genemap_record(term, std::move(genes)));
  }

  // ClinVar starts with about a quarter of the pool catalogued.
  std::vector<Record> clinvar;
  for (const auto& id : world.pool) {
    if (rand_unit(rng) < 0.25) {
      world.catalogued.insert(id);
      clinvar.push_back(
          clinvar_record(id, world.variant_gene[id], weighted_status(rng, 0.2, 0.3)));
    }
  }

  EngineConfig engine_cfg;
  engine_cfg.estimator = cfg.estimator;
  engine_cfg.solver = cfg.solver;
  engine_cfg.cost.measure_wall = false;
  engine_cfg.cost.base_ms = 100.0;

  // Per-subject synthetic cost constants, drawn once.
  std::vector<PatientInput> patients;
  for (int i = 0; i < cfg.n_patients; ++i) {
    const std::string subject = zero_padded("p", static_cast<std::size_t>(i) + 1, 3);
    world.subjects.push_back(subject);
    engine_cfg.cost.per_subject_base[subject] =
        50.0 + static_cast<double>(rand_below(rng, 451));

    PatientInput input;
    input.subject_id = subject;
    input.input_version = 0;
    const std::uint64_t n_terms = 1 + rand_below(rng, 2);
    while (input.phenotype.terms.size() < n_terms) {
      input.phenotype.terms.insert(pick(rng, world.terms));
    }
    std::set<std::string> carried;
    const std::size_t want = std::min<std::size_t>(
        static_cast<std::size_t>(cfg.variants_per_patient), world.pool.size());
    while (carried.size() < want) carried.insert(pick(rng, world.pool));
    for (const auto& id : carried) {
      input.variants.push_back({id, world.variant_gene[id]});
    }
    patients.push_back(std::move(input));
  }

  Engine engine(engine_cfg);
  engine.load_dataset(kGeneMapDataset, genemap);
  engine.load_dataset(kClinVarDataset, clinvar);
  for (const auto& input : patients) engine.register_and_execute(input);

  json events = json::array();
  double total_achieved = 0.0;
  double total_oracle_optimal = 0.0;
  double total_missed = 0.0;
  double min_recall = 1.0;
  double total_observed = 0.0;
  std::size_t total_reenacted = 0;

  for (int e = 0; e < cfg.n_events; ++e) {
    std::string kind;
    RawChangeEvent raw =
        next_event(rng, cfg, world, engine, static_cast<std::size_t>(e) + 1, &kind);
    const ChangeEvent ev = engine.ingest_event(raw);

    // Oracle pass: true impact and true cost for every current execution.
    const EstimateEngine estimator = engine.estimate_engine();
    const auto current = engine.history().current_outputs(ev.timestamp);
    std::map<std::string, TrueImpact> oracle;
    std::vector<KnapsackItem> oracle_items;
    double true_total = 0.0;
    for (const auto& rec : current) {
      TrueImpact ti = estimator.true_impact(rec, ev);
      true_total += ti.impact;
      oracle_items.push_back({rec.execution_id, ti.impact, ti.cost});
      oracle.emplace(rec.execution_id, std::move(ti));
    }

    const auto scoped = engine.scope_engine().scope_change(ev, ev.timestamp);
    std::set<std::string> scoped_ids;
    double scoped_true = 0.0;
    for (const auto& rec : scoped) {
      scoped_ids.insert(rec.execution_id);
      scoped_true += oracle.at(rec.execution_id).impact;
    }
    std::size_t positives = 0;
    std::size_t caught = 0;
    for (const auto& [id, ti] : oracle) {
      if (ti.impact > 0) {
        ++positives;
        if (scoped_ids.contains(id)) ++caught;
      }
    }
    const double recall =
        positives == 0 ? 1.0
                       : static_cast<double>(caught) / static_cast<double>(positives);
    const double precision =
        scoped_ids.empty()
            ? 1.0
            : scoped_true / static_cast<double>(scoped_ids.size());

    const SelectionPlan oracle_plan =
        solve(oracle_items, cfg.budget_per_event, cfg.solver);

    const DecisionCycleReport report =
        engine.handle_change_event(ev, cfg.budget_per_event);

    min_recall = std::min(min_recall, recall);
    total_missed += true_total - scoped_true;
    total_achieved += report.achieved_true_impact;
    total_oracle_optimal += oracle_plan.total_value;
    total_observed += report.total_observed_cost;
    total_reenacted += report.selected;

    json row{{"event_id", ev.event_id},
             {"kind", kind},
             {"current", current.size()},
             {"scoped", scoped_ids.size()},
             {"selected", report.selected},
             {"scope_recall", recall},
             {"scope_precision", precision},
             {"true_impact_total", true_total},
             {"scoped_true_impact", scoped_true},
             {"oracle_optimal_impact", oracle_plan.total_value},
             {"achieved_true_impact", report.achieved_true_impact},
             {"budget", cfg.budget_per_event},
             {"est_total_impact", report.est_total_impact},
             {"est_total_cost", report.est_total_cost},
             {"budget_utilization",
              cfg.budget_per_event > 0 ? report.est_total_cost / cfg.budget_per_event
                                       : 0.0},
             {"observed_cost", report.total_observed_cost}};
    if (ev.is_reference()) {
      const auto& ch = ev.reference();
      const DiffMagnitude m = diff_magnitude(ch.diff);
      row["dataset_id"] = ch.dataset_id;
      row["diff_magnitude"] =
          json{{"added", m.added}, {"removed", m.removed}, {"updated", m.updated}};
    } else {
      row["subject_id"] = ev.input().subject_id;
    }
    events.push_back(std::move(row));
  }

  return json{{"seed", cfg.seed},
              {"config", config_to_json(cfg)},
              {"world",
               {{"genes", world.genes.size()},
                {"disease_terms", world.terms.size()},
                {"variant_pool", world.pool.size()},
                {"initial_clinvar", clinvar.size()},
                {"patients", world.subjects.size()}}},
              {"initial_executions", patients.size()},
              {"events", std::move(events)},
              {"totals",
               {{"events", cfg.n_events},
                {"re_enactments", total_reenacted},
                {"achieved_true_impact", total_achieved},
                {"oracle_optimal_impact", total_oracle_optimal},
                {"min_scope_recall", min_recall},
                {"scope_missed_impact", total_missed},
                {"total_observed_cost", total_observed},
                {"history_size", engine.history().size()}}}};
}

}  // namespace recomp
