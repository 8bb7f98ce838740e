#include "polyavis/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "polyavis/errors.hpp"
#include "polyavis/numtheory.hpp"

#ifndef POLYAVIS_DATA_DIR
#define POLYAVIS_DATA_DIR "data"
#endif

namespace polyavis {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

// Strip one pair of surrounding parentheses, so "(1, 1)" and "1,1" both parse.
std::string_view strip_parens(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  return s;
}

std::string format_real(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

LatticePoint parse_point(std::string_view text, std::string_view field) {
  const std::string f(field);
  const auto body = strip_parens(text);
  if (body.empty()) throw ConfigError(f, "missing value");
  std::vector<std::uint64_t> coords;
  for (const auto& item : split(body, ',')) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size())
      throw ConfigError(f, "'" + item + "' is not a nonnegative integer");
    coords.push_back(v);
  }
  if (coords.size() < 2) throw ConfigError(f, "dimension must be >= 2");
  return LatticePoint(std::move(coords));
}

std::vector<double> parse_reals(std::string_view text, std::string_view field) {
  const std::string f(field);
  const auto body = strip_parens(text);
  if (body.empty()) throw ConfigError(f, "missing value");
  std::vector<double> out;
  for (const auto& item : split(body, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size() ||
        !std::isfinite(v))
      throw ConfigError(f, "'" + item + "' is not a real number");
    out.push_back(v);
  }
  return out;
}

std::vector<std::vector<double>> parse_matrix(std::string_view text, std::string_view field) {
  if (trim(text).empty()) throw ConfigError(std::string(field), "missing value");
  std::vector<std::vector<double>> rows;
  for (const auto& row : split(text, ';')) rows.push_back(parse_reals(row, field));
  return rows;
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ConfigError("format", "expected 'csv' or 'json', got '" + std::string(text) + "'");
}

ExperimentSpec parse_experiment(const ExperimentInput& in) {
  ExperimentSpec spec;
  spec.mode = in.mode;
  LatticePoint start = parse_point(in.start, "start");
  if (in.k && *in.k != start.dimension())
    throw ConfigError("k", "start point has dimension " + std::to_string(start.dimension()) +
                               ", not " + std::to_string(*in.k));
  const std::size_t k = start.dimension();

  if (in.mode == "standard") {
    if (!trim(in.beta).empty() || !trim(in.gamma).empty())
      throw ConfigError("mode", "standard walks take neither beta nor gamma");
    spec.config = PerturbedConfig::standard(std::move(start));
  } else if (in.mode == "perturbed") {
    if (!trim(in.gamma).empty()) throw ConfigError("gamma", "not accepted by perturbed walks");
    auto beta = trim(in.beta).empty() ? std::vector<double>(k, 0.0) : parse_reals(in.beta, "beta");
    double bound = 1.0;
    if (!trim(in.bound).empty()) {
      const auto b = parse_reals(in.bound, "B");
      if (b.size() != 1) throw ConfigError("B", "expected a single real");
      bound = b[0];
    }
    spec.config = PerturbedConfig::make(std::move(start), std::move(beta), bound);
  } else if (in.mode == "twisted") {
    if (!trim(in.beta).empty() || !trim(in.bound).empty())
      throw ConfigError("beta", "not accepted by twisted walks");
    spec.config = TwistConfig::make(std::move(start), parse_matrix(in.gamma, "gamma"));
  } else {
    throw ConfigError("mode", "expected perturbed, twisted or standard, got '" + in.mode + "'");
  }

  if (in.steps == 0) throw ConfigError("steps", "must be >= 1");
  if (in.runs == 0) throw ConfigError("runs", "must be >= 1");
  spec.steps = in.steps;
  spec.runs = in.runs;
  spec.base_seed = in.base_seed;
  spec.output_path = in.output_path;
  spec.output_format = parse_format(in.output_format);
  spec.threads = in.threads;
  return spec;
}

double reference_density(int k) {
  static std::mutex mutex;
  static std::map<int, double> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, zeta_reciprocal(k, 1e-9)).first;
  return it->second;
}

TableRow run_row(const ExperimentSpec& spec, std::string label) {
  const BatchReport batch = batch_density(spec.config, spec.steps, spec.runs, spec.base_seed, spec.threads);
  TableRow row;
  row.label = std::move(label);
  row.mode = spec.mode;
  row.k = start_point(spec.config).dimension();
  row.start = describe_start(spec.config);
  row.params = describe_params(spec.config);
  row.steps = spec.steps;
  row.runs = spec.runs;
  row.seed = spec.base_seed;
  row.mean_density = batch.mean_density;
  row.run_estimates = batch.runs;
  row.std_err = batch.std_err;
  row.reference = reference_density(static_cast<int>(row.k));
  row.deviation = std::abs(row.mean_density - row.reference);
  return row;
}

TableRow run_experiment(const ExperimentSpec& spec) {
  TableRow row = run_row(spec);
  if (!spec.output_path.empty()) write_report(TableReport{{row}}, spec.output_path, spec.output_format);
  return row;
}

std::string csv_summary(const TableReport& report) {
  std::string out = "mode,k,start,params,N,runs,seed,mean_density,std_err,reference,deviation\n";
  for (const auto& r : report.rows) {
    out += r.mode + ',' + std::to_string(r.k) + ',' + r.start + ',' + r.params + ',' +
           std::to_string(r.steps) + ',' + std::to_string(r.runs) + ',' + std::to_string(r.seed) +
           ',' + format_real(r.mean_density) + ',' + format_real(r.std_err) + ',' +
           format_real(r.reference) + ',' + format_real(r.deviation) + '\n';
  }
  return out;
}

std::string csv_runs(const TableReport& report) {
  std::string out = "row,run,seed,visible_count,total_steps,density\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& runs = report.rows[i].run_estimates;
    for (std::size_t j = 0; j < runs.size(); ++j) {
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + std::to_string(runs[j].seed) + ',' +
             std::to_string(runs[j].visible_count) + ',' + std::to_string(runs[j].total_steps) +
             ',' + format_real(runs[j].density) + '\n';
    }
  }
  return out;
}

std::string json_report(const TableReport& report) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["label"] = r.label;
    row["descriptor"] = {{"mode", r.mode}, {"k", r.k}, {"start", r.start}, {"params", r.params}};
    row["N"] = r.steps;
    row["runs"] = r.runs;
    row["seed"] = r.seed;
    row["mean_density"] = r.mean_density;
    auto densities = nlohmann::ordered_json::array();
    auto seeds = nlohmann::ordered_json::array();
    for (const auto& e : r.run_estimates) {
      densities.push_back(e.density);
      seeds.push_back(e.seed);
    }
    row["run_densities"] = densities;
    row["run_seeds"] = seeds;
    row["std_err"] = r.std_err;
    row["reference"] = r.reference;
    row["deviation"] = r.deviation;
    row["paper_density"] = r.paper_density ? nlohmann::ordered_json(*r.paper_density) : nullptr;
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

std::string runs_path_for(const std::string& path) {
  constexpr std::string_view ext = ".csv";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return path.substr(0, path.size() - ext.size()) + ".runs.csv";
  return path + ".runs.csv";
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

void write_report(const TableReport& report, const std::string& path, OutputFormat format) {
  if (format == OutputFormat::Json) {
    write_file(path, json_report(report));
  } else {
    write_file(path, csv_summary(report));
    write_file(runs_path_for(path), csv_runs(report));
  }
}

std::string default_fixture_path() { return std::string(POLYAVIS_DATA_DIR) + "/tables.json"; }

std::vector<FixtureRow> load_table_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table fixture '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("fixture", e.what());
  }
  if (doc.value("schema_version", 0) != 1) throw ConfigError("fixture", "unsupported schema_version");

  std::vector<FixtureRow> rows;
  try {
    for (const auto& table : doc.at("tables")) {
      const int id = table.at("table").get<int>();
      const auto mode = table.at("mode").get<std::string>();
      for (const auto& r : table.at("rows")) {
        LatticePoint start(r.at("start").get<std::vector<std::uint64_t>>());
        FixtureRow row{id, mode, PerturbedConfig::standard(LatticePoint{1, 1}), r.at("paper_density").get<double>()};
        if (mode == "twisted") {
          row.config = TwistConfig::make(std::move(start), r.at("gamma").get<std::vector<std::vector<double>>>());
        } else if (mode == "perturbed") {
          row.config = PerturbedConfig::make(std::move(start), r.at("beta").get<std::vector<double>>(),
                                             r.at("B").get<double>());
        } else {
          throw ConfigError("fixture", "unknown mode '" + mode + "'");
        }
        rows.push_back(std::move(row));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("fixture", e.what());
  }
  return rows;
}

TableReport reproduce_tables(const TableRunOptions& options) {
  const auto fixture = load_table_fixture(options.fixture_path);
  TableReport report;
  std::map<int, int> ordinal;
  for (std::size_t i = 0; i < fixture.size(); ++i) {
    const auto& f = fixture[i];
    const int within = ++ordinal[f.table];
    if (!options.which.contains(f.table)) continue;
    ExperimentSpec spec;
    spec.mode = f.mode;
    spec.config = f.config;
    spec.steps = options.steps;
    spec.runs = options.runs;
    spec.base_seed = derive_run_seed(options.base_seed ^ kTableSeedSalt, i);
    spec.threads = options.threads;
    TableRow row = run_row(spec, "table" + std::to_string(f.table) + "/row" + std::to_string(within));
    row.paper_density = f.paper_density;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace polyavis
