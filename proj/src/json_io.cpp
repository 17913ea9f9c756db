#include "recomp/json_io.hpp"

#include <fstream>
#include <sstream>

#include "recomp/error.hpp"

namespace recomp::io {

namespace {

const json& expect_field(const json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) {
    fail(Errc::data_integrity, ctx + ": missing field '" + key + "'");
  }
  return *it;
}

std::string get_string(const json& j, const char* key, const std::string& ctx) {
  const json& field = expect_field(j, key, ctx);
  if (!field.is_string()) {
    fail(Errc::data_integrity, ctx + ": field '" + key + "' must be a string");
  }
  return field.get<std::string>();
}

std::uint64_t get_uint(const json& j, const char* key, const std::string& ctx) {
  const json& field = expect_field(j, key, ctx);
  if (!field.is_number_unsigned() && !field.is_number_integer()) {
    fail(Errc::data_integrity, ctx + ": field '" + key + "' must be an integer");
  }
  if (field.is_number_integer() && field.get<std::int64_t>() < 0) {
    fail(Errc::data_integrity, ctx + ": field '" + key + "' must be non-negative");
  }
  return field.get<std::uint64_t>();
}

std::int64_t get_int(const json& j, const char* key, const std::string& ctx) {
  const json& field = expect_field(j, key, ctx);
  if (!field.is_number_integer() && !field.is_number_unsigned()) {
    fail(Errc::data_integrity, ctx + ": field '" + key + "' must be an integer");
  }
  return field.get<std::int64_t>();
}

double get_double(const json& j, const char* key, const std::string& ctx) {
  const json& field = expect_field(j, key, ctx);
  if (!field.is_number()) {
    fail(Errc::data_integrity, ctx + ": field '" + key + "' must be a number");
  }
  return field.get<double>();
}

std::set<std::string> string_set_from(const json& arr, const std::string& ctx) {
  if (!arr.is_array()) {
    fail(Errc::data_integrity, ctx + ": expected an array of strings");
  }
  std::set<std::string> out;
  for (const auto& element : arr) {
    if (!element.is_string()) {
      fail(Errc::data_integrity, ctx + ": expected an array of strings");
    }
    out.insert(element.get<std::string>());
  }
  return out;
}

}  // namespace

json to_json(const Record& r) {
  json attrs = json::object();
  for (const auto& [name, value] : r.attributes) {
    if (const auto* s = std::get_if<std::string>(&value)) {
      attrs[name] = *s;
    } else {
      attrs[name] = std::get<std::set<std::string>>(value);
    }
  }
  return json{{"key", r.key}, {"attributes", attrs}};
}

Record record_from_json(const json& j) {
  const std::string ctx = "record";
  Record r;
  r.key = get_string(j, "key", ctx);
  if (r.key.empty()) fail(Errc::data_integrity, "record: empty key");
  const json& attrs = expect_field(j, "attributes", ctx);
  if (!attrs.is_object()) {
    fail(Errc::data_integrity, "record '" + r.key + "': attributes must be an object");
  }
  for (const auto& [name, value] : attrs.items()) {
    if (value.is_string()) {
      r.attributes[name] = value.get<std::string>();
    } else if (value.is_array()) {
      r.attributes[name] = string_set_from(value, "record '" + r.key + "' attribute '" + name + "'");
    } else {
      fail(Errc::data_integrity, "record '" + r.key + "': attribute '" + name +
                                     "' must be a string or an array of strings");
    }
  }
  return r;
}

json to_json(const DiffSet& d) {
  json added = json::array();
  for (const auto& r : d.added) added.push_back(to_json(r));
  json removed = json::array();
  for (const auto& r : d.removed) removed.push_back(to_json(r));
  json updated = json::array();
  for (const auto& [old_rec, new_rec] : d.updated) {
    updated.push_back(json{{"old", to_json(old_rec)}, {"new", to_json(new_rec)}});
  }
  return json{{"dataset_id", d.dataset_id}, {"from_version", d.from_version},
              {"to_version", d.to_version}, {"added", added},
              {"removed", removed},         {"updated", updated}};
}

DiffSet diff_from_json(const json& j) {
  const std::string ctx = "diff";
  DiffSet d;
  d.dataset_id = get_string(j, "dataset_id", ctx);
  d.from_version = get_uint(j, "from_version", ctx);
  d.to_version = get_uint(j, "to_version", ctx);
  for (const auto& r : expect_field(j, "added", ctx)) {
    d.added.push_back(record_from_json(r));
  }
  for (const auto& r : expect_field(j, "removed", ctx)) {
    d.removed.push_back(record_from_json(r));
  }
  for (const auto& pair : expect_field(j, "updated", ctx)) {
    d.updated.emplace_back(record_from_json(expect_field(pair, "old", ctx)),
                           record_from_json(expect_field(pair, "new", ctx)));
  }
  return d;
}

json to_json(const Diagnosis& d) {
  json classified = json::array();
  for (const auto& [id, cls] : d.classified) {
    classified.push_back(json{{"variant_id", id}, {"class", to_string(cls)}});
  }
  return json{{"classified", classified}};
}

Diagnosis diagnosis_from_json(const json& j) {
  const std::string ctx = "diagnosis";
  Diagnosis d;
  for (const auto& entry : expect_field(j, "classified", ctx)) {
    d.classified.emplace(get_string(entry, "variant_id", ctx),
                         traffic_light_from_string(get_string(entry, "class", ctx)));
  }
  return d;
}

json to_json(const ProvenanceQuery& q) {
  return json{{"dataset_id", q.dataset_id},
              {"match_field", q.match_field},
              {"terms", q.terms}};
}

ProvenanceQuery query_from_json(const json& j) {
  const std::string ctx = "provenance query";
  ProvenanceQuery q;
  q.dataset_id = get_string(j, "dataset_id", ctx);
  q.match_field = get_string(j, "match_field", ctx);
  q.terms = string_set_from(expect_field(j, "terms", ctx), ctx + " terms");
  return q;
}

json to_json(const PatientInput& p) {
  json variants = json::array();
  for (const auto& v : p.variants) {
    variants.push_back(json{{"id", v.id}, {"gene", v.gene}});
  }
  return json{{"subject_id", p.subject_id},
              {"input_version", p.input_version},
              {"phenotype", p.phenotype.terms},
              {"variants", variants}};
}

PatientInput patient_from_json(const json& j) {
  const std::string ctx = "patient input";
  PatientInput p;
  p.subject_id = get_string(j, "subject_id", ctx);
  p.input_version = get_uint(j, "input_version", ctx);
  std::vector<std::string> terms;
  for (const auto& term : expect_field(j, "phenotype", ctx)) {
    if (!term.is_string()) {
      fail(Errc::data_integrity, ctx + ": phenotype terms must be strings");
    }
    terms.push_back(term.get<std::string>());
  }
  p.phenotype = Phenotype::of(terms);
  for (const auto& v : expect_field(j, "variants", ctx)) {
    p.variants.push_back(Variant{get_string(v, "id", ctx + " variant"),
                                 get_string(v, "gene", ctx + " variant")});
  }
  p.validate();
  return p;
}

json to_json(const ExecutionRecord& rec) {
  json bindings = json::object();
  for (const auto& [id, seq] : rec.dataset_bindings) bindings[id] = seq;
  json provenance = json::object();
  for (const auto& [id, q] : rec.provenance) provenance[id] = to_json(q);
  return json{{"execution_id", rec.execution_id},
              {"process_id", rec.process_id},
              {"subject_id", rec.subject_id},
              {"input_version", rec.input_version},
              {"dataset_bindings", bindings},
              {"output", to_json(rec.output)},
              {"observed_cost", rec.observed_cost},
              {"timestamp", rec.timestamp},
              {"provenance", provenance}};
}

ExecutionRecord execution_from_json(const json& j) {
  const std::string ctx = "execution record";
  ExecutionRecord rec;
  rec.execution_id = get_string(j, "execution_id", ctx);
  rec.process_id = get_string(j, "process_id", ctx);
  rec.subject_id = get_string(j, "subject_id", ctx);
  rec.input_version = get_uint(j, "input_version", ctx);
  const json& bindings = expect_field(j, "dataset_bindings", ctx);
  for (const auto& [id, seq] : bindings.items()) {
    if (!seq.is_number_unsigned() && !seq.is_number_integer()) {
      fail(Errc::data_integrity, ctx + ": binding for '" + id + "' must be an integer");
    }
    rec.dataset_bindings[id] = seq.get<std::uint64_t>();
  }
  rec.output = diagnosis_from_json(expect_field(j, "output", ctx));
  rec.observed_cost = get_double(j, "observed_cost", ctx);
  rec.timestamp = get_int(j, "timestamp", ctx);
  const json& provenance = expect_field(j, "provenance", ctx);
  for (const auto& [id, q] : provenance.items()) {
    rec.provenance[id] = query_from_json(q);
  }
  return rec;
}

json to_json(const RawChangeEvent& ev) {
  json j{{"event_id", ev.event_id}, {"kind", ev.kind}};
  if (ev.timestamp) j["timestamp"] = *ev.timestamp;
  if (!ev.dataset_id.empty()) j["dataset_id"] = ev.dataset_id;
  if (ev.diff) j["diff"] = to_json(*ev.diff);
  if (ev.records) {
    json records = json::array();
    for (const auto& r : *ev.records) records.push_back(to_json(r));
    j["records"] = records;
  }
  if (ev.input) {
    j["subject_id"] = ev.input->subject_id;
    j["new_input"] = to_json(*ev.input);
  }
  return j;
}

RawChangeEvent raw_event_from_json(const json& j) {
  const std::string ctx = "change event";
  RawChangeEvent ev;
  ev.event_id = get_string(j, "event_id", ctx);
  if (j.contains("timestamp")) ev.timestamp = get_int(j, "timestamp", ctx);
  ev.kind = get_string(j, "kind", ctx);
  if (ev.kind == "REFERENCE") {
    ev.dataset_id = get_string(j, "dataset_id", ctx);
    if (j.contains("diff")) ev.diff = diff_from_json(j.at("diff"));
    if (j.contains("records")) {
      std::vector<Record> records;
      for (const auto& r : j.at("records")) records.push_back(record_from_json(r));
      ev.records = std::move(records);
    }
    if (!ev.diff && !ev.records) {
      fail(Errc::data_integrity,
           ctx + " '" + ev.event_id + "': REFERENCE needs 'diff' or 'records'");
    }
    if (ev.diff && ev.records) {
      fail(Errc::data_integrity,
           ctx + " '" + ev.event_id + "': give either 'diff' or 'records', not both");
    }
  } else if (ev.kind == "INPUT") {
    ev.input = patient_from_json(expect_field(j, "new_input", ctx));
    const std::string subject = get_string(j, "subject_id", ctx);
    if (subject != ev.input->subject_id) {
      fail(Errc::data_integrity, ctx + " '" + ev.event_id +
                                     "': subject_id does not match new_input");
    }
  } else {
    fail(Errc::data_integrity,
         ctx + " '" + ev.event_id + "': kind must be REFERENCE or INPUT");
  }
  return ev;
}

json to_json(const SelectionPlan& plan) {
  return json{{"selected", plan.selected},
              {"total_value", plan.total_value},
              {"total_weight", plan.total_weight},
              {"budget", plan.budget},
              {"solver", to_string(plan.solver)}};
}

json to_json(const DecisionCycleReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r{{"execution_id", row.execution_id},
           {"est_impact", row.est_impact},
           {"est_cost", row.est_cost},
           {"selected", row.selected}};
    if (row.true_impact) r["true_impact"] = *row.true_impact;
    if (!row.new_execution_id.empty()) r["new_execution_id"] = row.new_execution_id;
    if (row.failed) {
      r["failed"] = true;
      r["error"] = row.error;
    }
    rows.push_back(std::move(r));
  }
  return json{{"event_id", report.event_id},
              {"candidates", report.candidates},
              {"selected", report.selected},
              {"skipped_out_of_scope", report.skipped_out_of_scope},
              {"budget", report.budget},
              {"est_total_impact", report.est_total_impact},
              {"est_total_cost", report.est_total_cost},
              {"achieved_true_impact", report.achieved_true_impact},
              {"total_observed_cost", report.total_observed_cost},
              {"rows", rows}};
}

json parse_line(const std::string& line, const std::string& context) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    fail(Errc::data_integrity, context + ": " + e.what());
  }
}

std::vector<json> read_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    fail(Errc::not_found, "cannot open '" + file.string() + "'");
  }
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_line(line, file.string() + ":" + std::to_string(lineno)));
  }
  return out;
}

void append_jsonl(const std::filesystem::path& file, const json& value) {
  std::ofstream out(file, std::ios::app);
  if (!out) {
    fail(Errc::data_integrity, "cannot append to '" + file.string() + "'");
  }
  out << value.dump() << '\n';
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) {
    fail(Errc::data_integrity, "cannot write '" + file.string() + "'");
  }
  out << text;
}

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    fail(Errc::not_found, "cannot open '" + file.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace recomp::io
