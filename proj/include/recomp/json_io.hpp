#pragma once
// JSON wire formats for every externally visible structure: dataset record
// lines, patient input lines, change-event lines, history log lines, and
// solver/report output. Set-valued attributes serialize as sorted arrays.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "recomp/config.hpp"
#include "recomp/datastore.hpp"
#include "recomp/engine.hpp"
#include "recomp/history.hpp"
#include "recomp/scope.hpp"
#include "recomp/select.hpp"
#include "recomp/simulate.hpp"
#include "recomp/svi.hpp"

namespace recomp {

// Configuration file schema: {"estimator": {...}, "solver": {...},
// "cost": {...}, "simulation": {...}}; every section and key optional.
EngineConfig engine_config_from_json(const nlohmann::json& j);
SimulationConfig simulation_config_from_json(const nlohmann::json& j);

}  // namespace recomp

namespace recomp::io {

using nlohmann::json;

json to_json(const Record& r);
Record record_from_json(const json& j);

json to_json(const DiffSet& d);
DiffSet diff_from_json(const json& j);

json to_json(const Diagnosis& d);
Diagnosis diagnosis_from_json(const json& j);

json to_json(const ProvenanceQuery& q);
ProvenanceQuery query_from_json(const json& j);

json to_json(const PatientInput& p);
PatientInput patient_from_json(const json& j);

json to_json(const ExecutionRecord& rec);
ExecutionRecord execution_from_json(const json& j);

json to_json(const RawChangeEvent& ev);
RawChangeEvent raw_event_from_json(const json& j);

json to_json(const SelectionPlan& plan);

json to_json(const DecisionCycleReport& report);

// One JSON value per non-empty line. Parse errors are data_integrity errors
// naming the file and line.
std::vector<json> read_jsonl(const std::filesystem::path& file);
json parse_line(const std::string& line, const std::string& context);
void append_jsonl(const std::filesystem::path& file, const json& value);
void write_text(const std::filesystem::path& file, const std::string& text);
std::string read_text(const std::filesystem::path& file);

}  // namespace recomp::io
