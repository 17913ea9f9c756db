// recomp CLI: init, load-dataset, load-patients, event, simulate, report.
// Exit codes: 0 success, 1 usage/config error, 2 data-integrity error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "recomp/engine.hpp"
#include "recomp/error.hpp"
#include "recomp/json_io.hpp"
#include "recomp/simulate.hpp"

namespace {

using nlohmann::json;
using namespace recomp;

int exit_code_for(Errc code) { return code == Errc::config ? 1 : 2; }

json history_report(const Engine& engine) {
  json subjects = json::array();
  double total_cost = 0.0;
  for (const auto& rec : engine.history().all()) total_cost += rec.observed_cost;
  for (const auto& rec : engine.history().current_outputs(engine.clock())) {
    std::map<std::string, std::size_t> classes{{"red", 0}, {"amber", 0}, {"green", 0}};
    for (const auto& [id, cls] : rec.output.classified) ++classes[to_string(cls)];
    json bindings = json::object();
    for (const auto& [id, seq] : rec.dataset_bindings) bindings[id] = seq;
    subjects.push_back(json{{"subject_id", rec.subject_id},
                            {"execution_id", rec.execution_id},
                            {"timestamp", rec.timestamp},
                            {"input_version", rec.input_version},
                            {"dataset_bindings", bindings},
                            {"observed_cost", rec.observed_cost},
                            {"classes", classes}});
  }
  return json{{"subjects", subjects},
              {"executions", engine.history().size()},
              {"total_observed_cost", total_cost}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recomp — selective re-computation over versioned reference data"};
  app.require_subcommand(1);

  std::string workdir = ".";
  app.add_option("-w,--workdir", workdir, "Engine working directory")
      ->capture_default_str();

  auto* init_cmd = app.add_subcommand("init", "Create stores in <workdir>");
  std::string init_dir;
  init_cmd->add_option("workdir", init_dir, "Directory to initialize")->required();

  auto* load_ds_cmd =
      app.add_subcommand("load-dataset", "Commit a dataset version from JSONL");
  std::string dataset_id, dataset_file;
  load_ds_cmd->add_option("dataset_id", dataset_id)->required();
  load_ds_cmd->add_option("file", dataset_file, "<dataset>.jsonl, one record per line")
      ->required();

  auto* load_p_cmd = app.add_subcommand(
      "load-patients", "Register patients and run initial executions");
  std::string patients_file;
  load_p_cmd->add_option("file", patients_file, "patients.jsonl")->required();

  auto* event_cmd =
      app.add_subcommand("event", "Run decision cycle(s) for a change-event file");
  std::string event_file;
  double budget = 0.0;
  bool coalesce = false;
  event_cmd->add_option("file", event_file, "events.jsonl")->required();
  event_cmd->add_option("--budget", budget, "Re-computation budget per cycle (ms)")
      ->required();
  event_cmd->add_flag("--coalesce", coalesce,
                      "Compose consecutive events on one dataset into one cycle");

  auto* sim_cmd = app.add_subcommand("simulate", "Run the synthetic-world harness");
  std::string sim_config;
  std::uint64_t seed_override = 0;
  sim_cmd->add_option("--config", sim_config, "Simulation config JSON")->required();
  auto* seed_opt = sim_cmd->add_option("--seed", seed_override, "Override the seed");

  auto* report_cmd = app.add_subcommand("report", "Summarize history");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*init_cmd) {
      Engine::init_workdir(init_dir);
      std::cout << json{{"workdir", init_dir}, {"status", "initialized"}}.dump()
                << "\n";
      return 0;
    }

    Engine engine(workdir);

    if (*load_ds_cmd) {
      std::vector<Record> records;
      for (const auto& line : io::read_jsonl(dataset_file)) {
        records.push_back(io::record_from_json(line));
      }
      VersionPtr v = engine.load_dataset(dataset_id, records);
      std::cout << json{{"dataset_id", v->dataset_id},
                        {"version_seq", v->version_seq},
                        {"records", v->records.size()},
                        {"timestamp", v->timestamp}}
                       .dump()
                << "\n";
    } else if (*load_p_cmd) {
      json executions = json::array();
      for (const auto& line : io::read_jsonl(patients_file)) {
        const ExecutionRecord rec =
            engine.register_and_execute(io::patient_from_json(line));
        executions.push_back(json{{"subject_id", rec.subject_id},
                                  {"execution_id", rec.execution_id}});
      }
      std::cout << json{{"registered", executions.size()},
                        {"executions", executions}}
                       .dump()
                << "\n";
    } else if (*event_cmd) {
      std::vector<RawChangeEvent> raws;
      for (const auto& line : io::read_jsonl(event_file)) {
        raws.push_back(io::raw_event_from_json(line));
      }
      for (const auto& report : engine.process_events(raws, budget, coalesce)) {
        std::cout << io::to_json(report).dump() << "\n";
      }
    } else if (*sim_cmd) {
      SimulationConfig cfg = simulation_config_from_json(
          io::parse_line(io::read_text(sim_config), sim_config));
      if (seed_opt->count() > 0) cfg.seed = seed_override;
      std::cout << run_simulation(cfg).dump(2) << "\n";
    } else if (*report_cmd) {
      std::cout << history_report(engine).dump(2) << "\n";
    }
    return 0;
  } catch (const RecompError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
