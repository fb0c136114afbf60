#include "cheeger/harness/runner.hpp"

#include <atomic>
#include <chrono>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

namespace cheeger::harness {

namespace {

using json = nlohmann::ordered_json;

json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_field(cells[i]);
  }
  return out;
}

struct TaskResult {
  TaskRecord record;
  std::vector<std::string> lines;
  std::vector<std::string> cheeger_rows;
  std::vector<std::string> constant_rows;
};

TaskResult execute(const TaskSpec& spec, const Tolerances& tol) {
  TaskResult result;
  TaskRecord& rec = result.record;
  rec.id = spec.id;
  rec.seed = spec.seed;
  rec.suite = spec.suite;
  rec.family = spec.generator + "[" + canonical_params(spec.params) + "]";
  const auto start = std::chrono::steady_clock::now();
  try {
    const Instance inst = make_instance(spec.generator, spec.params, spec.seed);
    rec.n = inst.graph.num_vertices();
    rec.labels = inst.labels;
    const SuiteOutput out = run_suite(spec.suite, inst, tol);
    rec.reports = out.reports.size();
    for (const CertificateReport& r : out.reports) {
      if (r.gating && !r.pass) rec.failing.push_back(r.theorem_id);
      result.lines.push_back(report_line(rec, inst, r));
    }
    const std::string n = std::to_string(rec.n);
    const std::string seed = std::to_string(rec.seed);
    for (const CheegerRow& row : out.cheeger) {
      result.cheeger_rows.push_back(join_row({rec.family, n, seed, csv_number(row.lambda2),
                                              csv_number(row.phi_sweep), csv_number(row.ratio)}));
    }
    for (const ConstantRow& row : out.constants) {
      result.constant_rows.push_back(join_row({rec.family, n, seed, row.theorem_id, row.constant,
                                               csv_number(row.value), row.exact ? "1" : "0"}));
    }
    if (!out.skipped.empty()) {
      rec.status = "skipped";
      rec.message = out.skipped;
    } else {
      rec.status = rec.failing.empty() ? "passed" : "failed";
    }
  } catch (const std::exception& e) {
    rec.status = "error";
    rec.message = e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

json manifest_json(const RunManifest& m) {
  json tasks = json::array();
  for (const TaskRecord& t : m.tasks) {
    json entry = {{"id", t.id},         {"family", t.family},
                  {"seed", t.seed},     {"n", t.n},
                  {"suite", t.suite},   {"status", t.status},
                  {"wall_seconds", t.wall_seconds},
                  {"reports", t.reports}, {"failing", t.failing},
                  {"message", t.message}};
    if (!t.labels.empty()) entry["labels"] = t.labels;
    tasks.push_back(std::move(entry));
  }
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const TaskRecord& t : m.tasks) {
    if (t.status == "passed") ++counts[0];
    else if (t.status == "failed") ++counts[1];
    else if (t.status == "error") ++counts[2];
    else ++counts[3];
  }
  return {{"version", m.version},
          {"config_hash", m.config_hash},
          {"workers", m.workers},
          {"exit_code", m.exit_code},
          {"wall_seconds", m.wall_seconds},
          {"passed", counts[0]},
          {"failed", counts[1]},
          {"errors", counts[2]},
          {"skipped", counts[3]},
          {"tasks", std::move(tasks)}};
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

const std::vector<std::pair<std::string, std::vector<std::string>>>& csv_series() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> series = {
      {"cheeger", {"family", "n", "seed", "lambda2", "phi_sweep", "ratio"}},
      {"constants", {"family", "n", "seed", "theorem_id", "constant", "value", "exact"}},
  };
  return series;
}

std::vector<TaskSpec> expand_tasks(const ExperimentConfig& config) {
  std::vector<TaskSpec> tasks;
  for (const FamilySpec& f : config.families) {
    std::vector<std::map<std::string, Scalar>> grid(1);
    for (const auto& [key, values] : f.params) {
      std::vector<std::map<std::string, Scalar>> next;
      for (const auto& partial : grid) {
        for (const Scalar& v : values) {
          auto p = partial;
          p[key] = v;
          next.push_back(std::move(p));
        }
      }
      grid = std::move(next);
    }
    for (const auto& params : grid) {
      for (const std::uint64_t seed : f.seeds) {
        for (const std::string& suite : config.suites) {
          tasks.push_back({tasks.size(), f.generator, params, seed, suite});
        }
      }
    }
  }
  return tasks;
}

std::size_t resolve_workers(std::size_t configured, std::optional<std::size_t> option) {
  if (option && *option > 0) return *option;
  if (const char* env = std::getenv(kWorkersEnv)) {
    std::size_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
  }
  if (configured > 0) return configured;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string report_line(const TaskRecord& task, const Instance& instance,
                        const CertificateReport& r) {
  json witness = nullptr;
  if (r.witness) {
    const ExpansionStats& w = *r.witness;
    witness = {{"members", w.set.members()},
               {"size", w.set.size()},
               {"boundary_weight", number_or_null(w.boundary_weight)},
               {"phi", number_or_null(w.phi)},
               {"n_half", w.n_half},
               {"phi_v", number_or_null(w.phi_v)},
               {"psi", number_or_null(w.psi)}};
    if (!instance.labels.empty()) {
      std::vector<std::string> labels;
      for (const Vertex v : w.set.members()) labels.push_back(instance.labels[v]);
      witness["labels"] = labels;
    }
  }
  json scalars = json::object();
  for (const auto& [key, value] : r.scalars) scalars[key] = number_or_null(value);
  json line = {{"task", task.id},
               {"family", task.family},
               {"n", task.n},
               {"seed", task.seed},
               {"suite", task.suite},
               {"theorem_id", r.theorem_id},
               {"pass", r.pass},
               {"gating", r.gating},
               {"lhs", number_or_null(r.lhs)},
               {"relation", r.relation},
               {"rhs", number_or_null(r.rhs)},
               {"witness_prefix", r.witness_prefix ? json(*r.witness_prefix) : json(nullptr)},
               {"witness", std::move(witness)},
               {"scalars", std::move(scalars)},
               {"notes", r.notes},
               {"counterexample", r.counterexample}};
  return line.dump();
}

std::string report_schema() {
  const json number_or_null_schema = {{"type", json::array({"number", "null"})}};
  const json count = {{"type", "integer"}, {"minimum", 0}};
  json witness = {
      {"type", "object"},
      {"required", json::array({"members", "size", "boundary_weight", "phi", "n_half", "phi_v",
                                "psi"})},
      {"properties",
       {{"members", {{"type", "array"}, {"items", count}}},
        {"size", count},
        {"boundary_weight", number_or_null_schema},
        {"phi", number_or_null_schema},
        {"n_half", count},
        {"phi_v", number_or_null_schema},
        {"psi", number_or_null_schema},
        {"labels", {{"type", "array"}, {"items", {{"type", "string"}}}}}}},
      {"additionalProperties", false}};

  json csv = json::object();
  for (const auto& [name, columns] : csv_series()) csv[name] = columns;

  json schema = {
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"title", "CertificateReport"},
      {"description",
       "One line of reports.ndjson: a single check on a single instance. lhs relation rhs is "
       "the deciding inequality; non-gating reports never fail a run."},
      {"type", "object"},
      {"required", json::array({"task", "family", "n", "seed", "suite", "theorem_id", "pass",
                                "gating", "lhs", "relation", "rhs", "witness_prefix", "witness",
                                "scalars", "notes", "counterexample"})},
      {"properties",
       {{"task", count},
        {"family", {{"type", "string"}}},
        {"n", count},
        {"seed", count},
        {"suite", {{"enum", suite_names()}}},
        {"theorem_id", {{"type", "string"}, {"minLength", 1}}},
        {"pass", {{"type", "boolean"}}},
        {"gating", {{"type", "boolean"}}},
        {"lhs", number_or_null_schema},
        {"relation", {{"enum", json::array({"<=", "<", ">=", ">", "=="})}}},
        {"rhs", number_or_null_schema},
        {"witness_prefix", {{"type", json::array({"integer", "null"})}, {"minimum", 1}}},
        {"witness", {{"oneOf", json::array({json{{"type", "null"}}, witness})}}},
        {"scalars", {{"type", "object"}, {"additionalProperties", number_or_null_schema}}},
        {"notes", {{"type", "array"}, {"items", {{"type", "string"}}}}},
        {"counterexample", {{"type", "string"}}}}},
      {"additionalProperties", false},
      {"x-csv-series", std::move(csv)}};
  return schema.dump(2);
}

RunManifest run_experiment(const ExperimentConfig& config, std::ostream& log,
                           const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.config_hash = fnv1a_hex(config.text);
  manifest.workers = resolve_workers(config.workers, options.workers);

  const std::filesystem::path dir = options.output_dir.value_or(config.output_dir);
  std::filesystem::create_directories(dir);
  std::ofstream reports = open_output(dir / "reports.ndjson");
  std::ofstream cheeger = open_output(dir / "cheeger.csv");
  std::ofstream constants = open_output(dir / "constants.csv");
  cheeger << join_row(csv_series()[0].second) << '\n';
  constants << join_row(csv_series()[1].second) << '\n';

  const std::vector<TaskSpec> tasks = expand_tasks(config);
  std::vector<std::optional<TaskResult>> slots(tasks.size());
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next_task{0};

  auto worker = [&] {
    while (true) {
      const std::size_t i = next_task.fetch_add(1);
      if (i >= tasks.size()) return;
      TaskResult result = execute(tasks[i], config.tolerances);
      {
        std::lock_guard lock(mutex);
        slots[i] = std::move(result);
      }
      ready.notify_one();
    }
  };
  std::vector<std::thread> pool;
  const std::size_t threads = std::min(manifest.workers, std::max<std::size_t>(1, tasks.size()));
  for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);

  // Single writer: drains results in task order.
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    TaskResult result;
    {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return slots[i].has_value(); });
      result = std::move(*slots[i]);
      slots[i].reset();
    }
    for (const std::string& line : result.lines) reports << line << '\n';
    for (const std::string& row : result.cheeger_rows) cheeger << row << '\n';
    for (const std::string& row : result.constant_rows) constants << row << '\n';
    const TaskRecord& rec = result.record;
    if (rec.status == "error") {
      log << "ERROR task " << rec.id << " " << rec.family << " seed=" << rec.seed << " "
          << rec.suite << ": " << rec.message << '\n';
    }
    for (const std::string& id : rec.failing) {
      log << "FAIL task " << rec.id << " " << rec.family << " seed=" << rec.seed << " "
          << rec.suite << ": " << id << '\n';
    }
    manifest.tasks.push_back(std::move(result.record));
  }
  for (std::thread& t : pool) t.join();

  bool ok = true;
  for (const TaskRecord& t : manifest.tasks) {
    if (t.status == "failed" || t.status == "error") ok = false;
  }
  manifest.exit_code = ok ? 0 : 1;
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream(dir / "manifest.json", std::ios::binary) << manifest_json(manifest).dump(2) << '\n';
  if (!reports || !cheeger || !constants) throw std::runtime_error("write to " + dir.string() + " failed");
  return manifest;
}

int run(const std::filesystem::path& config_path, std::ostream& log, const RunOptions& options) {
  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    log << e.what() << '\n';
    return 2;
  }
  try {
    const RunManifest m = run_experiment(config, log, options);
    std::size_t failed = 0;
    for (const TaskRecord& t : m.tasks) failed += t.status == "failed" || t.status == "error";
    log << m.tasks.size() << " tasks, " << failed << " failed, exit " << m.exit_code << '\n';
    return m.exit_code;
  } catch (const std::exception& e) {
    log << "run aborted: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cheeger::harness
