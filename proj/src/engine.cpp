#include "recomp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "recomp/error.hpp"
#include "recomp/json_io.hpp"

namespace recomp {

namespace fs = std::filesystem;

namespace {

constexpr const char* kStateFile = "state.json";
constexpr const char* kConfigFile = "config.json";
constexpr const char* kHistoryFile = "history.log.jsonl";
constexpr const char* kPatientsFile = "patients.log.jsonl";
constexpr const char* kDatasetsDir = "datasets";
constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kProcessId = "svi";

fs::path dataset_file(const fs::path& workdir, const std::string& dataset_id,
                      std::uint64_t seq) {
  return workdir / kDatasetsDir /
         (dataset_id + ".v" + std::to_string(seq) + ".jsonl");
}

EngineConfig load_engine_config(const fs::path& file);

}  // namespace

Engine::Engine(EngineConfig cfg) : cfg_(std::move(cfg)) {}

void Engine::init_workdir(const fs::path& workdir) {
  if (fs::exists(workdir / kStateFile)) {
    fail(Errc::config, "workdir '" + workdir.string() + "' is already initialized");
  }
  fs::create_directories(workdir / kDatasetsDir);
  io::write_text(workdir / kStateFile,
                 nlohmann::json{{"clock", 0}, {"next_execution", 0}}.dump() + "\n");
  io::write_text(workdir / kDatasetsDir / kManifestFile, "{}\n");
  io::write_text(workdir / kHistoryFile, "");
  io::write_text(workdir / kPatientsFile, "");
}

Engine::Engine(const fs::path& workdir) {
  if (!fs::exists(workdir / kStateFile)) {
    fail(Errc::config,
         "workdir '" + workdir.string() + "' is not initialized; run 'recomp init'");
  }
  if (fs::exists(workdir / kConfigFile)) {
    cfg_ = load_engine_config(workdir / kConfigFile);
  }
  workdir_ = workdir;

  const auto manifest =
      io::parse_line(io::read_text(workdir / kDatasetsDir / kManifestFile),
                     (workdir / kDatasetsDir / kManifestFile).string());
  for (const auto& [dataset_id, versions] : manifest.items()) {
    for (const auto& entry : versions) {
      const auto seq = entry.at("seq").get<std::uint64_t>();
      const auto timestamp = entry.at("timestamp").get<std::int64_t>();
      std::vector<Record> records;
      for (const auto& line : io::read_jsonl(dataset_file(workdir, dataset_id, seq))) {
        records.push_back(io::record_from_json(line));
      }
      VersionPtr committed = store_.commit_version(dataset_id, records, timestamp);
      if (committed->version_seq != seq) {
        fail(Errc::data_integrity, "manifest: non-contiguous versions for '" +
                                       dataset_id + "' (expected v" +
                                       std::to_string(committed->version_seq) + ")");
      }
      clock_ = std::max(clock_, timestamp + 1);
    }
  }

  patients_.attach_log(workdir / kPatientsFile);
  history_.attach_log(workdir / kHistoryFile);

  const auto state = io::parse_line(io::read_text(workdir / kStateFile),
                                    (workdir / kStateFile).string());
  clock_ = std::max(clock_, state.value("clock", std::int64_t{0}));
  next_execution_ = state.value("next_execution", std::uint64_t{0});
  for (const auto& rec : history_.all()) {
    clock_ = std::max(clock_, rec.timestamp + 1);
    if (rec.execution_id.size() > 1 && rec.execution_id[0] == 'e') {
      char* end = nullptr;
      const auto n =
          static_cast<std::uint64_t>(std::strtoull(rec.execution_id.c_str() + 1, &end, 10));
      if (end != nullptr && *end == '\0') {
        next_execution_ = std::max(next_execution_, n + 1);
      }
    }
  }
}

void Engine::save_state() const {
  if (!workdir_) return;
  io::write_text(*workdir_ / kStateFile,
                 nlohmann::json{{"clock", clock_}, {"next_execution", next_execution_}}
                         .dump() +
                     "\n");
}

std::string Engine::next_execution_id() {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "e%06llu",
                static_cast<unsigned long long>(next_execution_++));
  return buf;
}

void Engine::persist_version(const DatasetVersion& version) const {
  if (!workdir_) return;
  const fs::path file = dataset_file(*workdir_, version.dataset_id, version.version_seq);
  std::string lines;
  for (const auto& [key, rec] : version.records) {
    lines += io::to_json(rec).dump() + "\n";
  }
  io::write_text(file, lines);

  const fs::path manifest_file = *workdir_ / kDatasetsDir / kManifestFile;
  auto manifest = io::parse_line(io::read_text(manifest_file), manifest_file.string());
  manifest[version.dataset_id].push_back(
      {{"seq", version.version_seq}, {"timestamp", version.timestamp}});
  io::write_text(manifest_file, manifest.dump() + "\n");
}

VersionPtr Engine::load_dataset(const std::string& dataset_id,
                                const std::vector<Record>& records) {
  VersionPtr version = store_.commit_version(dataset_id, records, tick());
  persist_version(*version);
  save_state();
  return version;
}

ExecutionRecord Engine::register_and_execute(const PatientInput& input) {
  VersionPtr om = store_.latest(kGeneMapDataset);
  VersionPtr cv = store_.latest(kClinVarDataset);
  if (!om || !cv) {
    fail(Errc::config, "load the '" + std::string(kGeneMapDataset) + "' and '" +
                           kClinVarDataset + "' datasets before patients");
  }
  patients_.register_input(input);

  const CostOptions cost{cfg_.cost.measure_wall, cfg_.cost.base_for(input.subject_id)};
  const std::int64_t now = tick();
  SviResult result = exec_svi(input, *om, *cv, now, cost);

  ExecutionRecord rec;
  rec.execution_id = next_execution_id();
  rec.process_id = kProcessId;
  rec.subject_id = input.subject_id;
  rec.input_version = input.input_version;
  rec.dataset_bindings = {{kGeneMapDataset, om->version_seq},
                          {kClinVarDataset, cv->version_seq}};
  rec.output = std::move(result.diagnosis);
  rec.observed_cost = result.cost_ms;
  rec.timestamp = now;
  rec.provenance = std::move(result.provenance);
  history_.append_execution(rec);
  save_state();
  return rec;
}

ChangeEvent Engine::ingest_event(const RawChangeEvent& raw) {
  if (raw.event_id.empty()) {
    fail(Errc::data_integrity, "change event: empty event_id");
  }
  std::int64_t ts = clock_;
  if (raw.timestamp && *raw.timestamp > ts) ts = *raw.timestamp;
  clock_ = ts + 1;

  ChangeEvent ev;
  ev.event_id = raw.event_id;
  ev.timestamp = ts;

  if (raw.kind == "REFERENCE") {
    VersionPtr prev = store_.latest(raw.dataset_id);
    if (!prev) {
      fail(Errc::not_found, "event '" + raw.event_id + "': unknown dataset '" +
                                raw.dataset_id + "'; load-dataset first");
    }
    VersionPtr committed;
    if (raw.records) {
      committed = store_.commit_version(raw.dataset_id, *raw.records, ts);
    } else {
      const DiffSet& diff = *raw.diff;
      if (diff.dataset_id != raw.dataset_id) {
        fail(Errc::data_integrity,
             "event '" + raw.event_id + "': diff dataset mismatch");
      }
      if (diff.from_version != prev->version_seq) {
        fail(Errc::version_conflict,
             "event '" + raw.event_id + "': diff base v" +
                 std::to_string(diff.from_version) + " is not the latest version v" +
                 std::to_string(prev->version_seq));
      }
      auto patched = apply_diff(*prev, diff);
      std::vector<Record> records;
      records.reserve(patched.size());
      for (auto& [key, rec] : patched) records.push_back(std::move(rec));
      committed = store_.commit_version(raw.dataset_id, records, ts);
      if (diff.to_version != committed->version_seq) {
        fail(Errc::version_conflict,
             "event '" + raw.event_id + "': diff targets v" +
                 std::to_string(diff.to_version) + " but commit produced v" +
                 std::to_string(committed->version_seq));
      }
    }
    persist_version(*committed);
    // Normalized diff (sorted, canonical) regardless of the wire form.
    ev.change = ReferenceChange{raw.dataset_id, prev->version_seq,
                                committed->version_seq,
                                diff_versions(*prev, *committed)};
  } else if (raw.kind == "INPUT") {
    const PatientInput& input = *raw.input;
    if (!patients_.has(input.subject_id)) {
      fail(Errc::not_found, "event '" + raw.event_id + "': unknown subject '" +
                                input.subject_id + "'");
    }
    patients_.register_input(input);
    ev.change = InputChange{input.subject_id, input};
  } else {
    fail(Errc::data_integrity,
         "event '" + raw.event_id + "': kind must be REFERENCE or INPUT");
  }
  save_state();
  return ev;
}

ExecutionRecord Engine::reenact(const ExecutionRecord& rec, const ChangeEvent& ev) {
  VersionPtr om = store_.latest(kGeneMapDataset);
  VersionPtr cv = store_.latest(kClinVarDataset);
  if (!om || !cv) {
    fail(Errc::data_integrity, "reenact: reference datasets unavailable");
  }
  auto input = patients_.latest(rec.subject_id);
  if (!input) {
    fail(Errc::not_found,
         "reenact: no registered input for subject '" + rec.subject_id + "'");
  }

  const CostOptions cost{cfg_.cost.measure_wall, cfg_.cost.base_for(rec.subject_id)};
  const std::int64_t now = tick();
  SviResult result = exec_svi(*input, *om, *cv, now, cost);

  ExecutionRecord refreshed;
  refreshed.execution_id = next_execution_id();
  refreshed.process_id = rec.process_id;
  refreshed.subject_id = rec.subject_id;
  refreshed.input_version = input->input_version;
  refreshed.dataset_bindings = {{kGeneMapDataset, om->version_seq},
                                {kClinVarDataset, cv->version_seq}};
  refreshed.output = std::move(result.diagnosis);
  refreshed.observed_cost = result.cost_ms;
  refreshed.timestamp = now;
  refreshed.provenance = std::move(result.provenance);
  history_.append_execution(refreshed);
  (void)ev;
  return refreshed;
}

DecisionCycleReport Engine::handle_change_event(const ChangeEvent& ev, double budget) {
  if (!std::isfinite(budget) || budget < 0) {
    fail(Errc::config, "budget must be finite and non-negative");
  }

  const std::int64_t at = ev.timestamp;
  const ScopeEngine scope = scope_engine();
  const EstimateEngine estimate = estimate_engine();

  const std::vector<ExecutionRecord> candidates = scope.scope_change(ev, at);
  const std::size_t population = history_.current_outputs(at).size();

  DecisionCycleReport report;
  report.event_id = ev.event_id;
  report.budget = budget;
  report.candidates = candidates.size();
  report.skipped_out_of_scope = population - candidates.size();

  std::vector<KnapsackItem> items;
  items.reserve(candidates.size());
  for (const ExecutionRecord& rec : candidates) {
    CandidateRow row;
    row.execution_id = rec.execution_id;
    row.est_impact = estimate.estimate_impact(rec, ev).value;
    row.est_cost = estimate.estimate_cost(rec).value;
    report.rows.push_back(row);
    items.push_back({rec.execution_id, row.est_impact, row.est_cost});
  }

  SelectionPlan plan;
  plan.budget = budget;
  if (budget > 0 && !items.empty()) {
    plan = solve(items, budget, cfg_.solver);
  }
  report.selected = plan.selected.size();
  report.est_total_impact = plan.total_value;
  report.est_total_cost = plan.total_weight;

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    CandidateRow& row = report.rows[i];
    if (!plan.selected.contains(row.execution_id)) continue;
    row.selected = true;
    try {
      const ExecutionRecord refreshed = reenact(candidates[i], ev);
      row.new_execution_id = refreshed.execution_id;
      row.true_impact =
          impact_binary(diff_diagnosis(candidates[i].output, refreshed.output));
      report.achieved_true_impact += *row.true_impact;
      report.total_observed_cost += refreshed.observed_cost;
    } catch (const RecompError& e) {
      // Re-enactment appends are atomic per execution: on failure the prior
      // record simply remains current.
      row.failed = true;
      row.error = e.what();
    }
  }
  save_state();
  return report;
}

std::vector<DecisionCycleReport> Engine::process_events(
    const std::vector<RawChangeEvent>& raws, double budget, bool coalesce) {
  std::vector<DecisionCycleReport> reports;
  std::size_t i = 0;
  while (i < raws.size()) {
    if (!coalesce || raws[i].kind != "REFERENCE") {
      reports.push_back(handle_change_event(ingest_event(raws[i]), budget));
      ++i;
      continue;
    }
    // Group consecutive REFERENCE events to the same dataset into one cycle.
    const std::string& dataset_id = raws[i].dataset_id;
    std::vector<ChangeEvent> group;
    std::size_t j = i;
    while (j < raws.size() && raws[j].kind == "REFERENCE" &&
           raws[j].dataset_id == dataset_id) {
      group.push_back(ingest_event(raws[j]));
      ++j;
    }
    ChangeEvent combined = group.front();
    if (group.size() > 1) {
      DiffSet diff = group.front().reference().diff;
      std::string event_id = group.front().event_id;
      for (std::size_t k = 1; k < group.size(); ++k) {
        diff = compose_diffs(diff, group[k].reference().diff);
        event_id += "+" + group[k].event_id;
      }
      combined.event_id = std::move(event_id);
      combined.timestamp = group.back().timestamp;
      combined.change =
          ReferenceChange{dataset_id, group.front().reference().from_version,
                          group.back().reference().to_version, std::move(diff)};
    }
    reports.push_back(handle_change_event(combined, budget));
    i = j;
  }
  return reports;
}

namespace {

EngineConfig load_engine_config(const fs::path& file) {
  const auto j = io::parse_line(io::read_text(file), file.string());
  return engine_config_from_json(j);
}

}  // namespace

}  // namespace recomp
