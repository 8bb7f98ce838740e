#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "polyavis/walks.hpp"

namespace polyavis {

enum class OutputFormat { Csv, Json };

inline constexpr std::uint64_t kDefaultSteps = 100'000;
inline constexpr std::uint64_t kDefaultRuns = 10;
inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// One experiment: a walk configuration plus the batch protocol and output target.
struct ExperimentSpec {
  std::string mode;  // "perturbed", "twisted" or "standard"
  WalkConfig config;
  std::uint64_t steps = kDefaultSteps;
  std::uint64_t runs = kDefaultRuns;
  std::uint64_t base_seed = kDefaultSeed;
  std::string output_path;  // empty: no file
  OutputFormat output_format = OutputFormat::Csv;
  unsigned threads = 1;
};

/// Raw textual parameters, as given on a command line or in a fixture.
struct ExperimentInput {
  std::string mode = "standard";
  std::optional<std::size_t> k;
  std::string start;  // "1,1"
  std::string beta;   // "0.6,-0.6"; empty means all zeros
  std::string bound;  // B; empty means 1
  std::string gamma;  // rows separated by ';', entries by ','
  std::uint64_t steps = kDefaultSteps;
  std::uint64_t runs = kDefaultRuns;
  std::uint64_t base_seed = kDefaultSeed;
  std::string output_path;
  std::string output_format = "csv";
  unsigned threads = 1;
};

/// Validates every field; throws ConfigError naming the first offending field.
ExperimentSpec parse_experiment(const ExperimentInput& input);

LatticePoint parse_point(std::string_view text, std::string_view field);
std::vector<double> parse_reals(std::string_view text, std::string_view field);
std::vector<std::vector<double>> parse_matrix(std::string_view text, std::string_view field);
OutputFormat parse_format(std::string_view text);

struct TableRow {
  std::string label;  // e.g. "table1/row3"; empty for ad-hoc experiments
  std::string mode;
  std::size_t k = 0;
  std::string start;
  std::string params;
  std::uint64_t steps = 0;
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  double mean_density = 0.0;
  std::vector<DensityEstimate> run_estimates;
  double std_err = 0.0;
  double reference = 0.0;  // 1/zeta(k) at tail tolerance 1e-9
  double deviation = 0.0;  // |mean - reference|
  std::optional<double> paper_density;
};

struct TableReport {
  std::vector<TableRow> rows;
};

/// 1/zeta(k) at tail tolerance 1e-9, memoized per k (thread-safe).
double reference_density(int k);

/// Runs the batch and fills a row; no I/O.
TableRow run_row(const ExperimentSpec& spec, std::string label = {});

/// Runs the batch and, when spec.output_path is set, writes it in spec.output_format.
/// Throws std::runtime_error on I/O failure.
TableRow run_experiment(const ExperimentSpec& spec);

/// Byte-exact serializations.
std::string csv_summary(const TableReport& report);
std::string csv_runs(const TableReport& report);
std::string json_report(const TableReport& report);

/// Csv writes the summary to `path` and per-run densities to runs_path_for(path);
/// Json writes a single document.
void write_report(const TableReport& report, const std::string& path, OutputFormat format);
/// "out.csv" -> "out.runs.csv"; any other name gets ".runs.csv" appended.
std::string runs_path_for(const std::string& path);

struct FixtureRow {
  int table = 0;
  std::string mode;
  WalkConfig config;
  double paper_density = 0.0;
};

/// Location of the bundled table fixture.
std::string default_fixture_path();

std::vector<FixtureRow> load_table_fixture(const std::string& path);

struct TableRunOptions {
  std::set<int> which{1, 2, 3, 4};
  std::uint64_t base_seed = kDefaultSeed;
  std::uint64_t steps = kDefaultSteps;
  std::uint64_t runs = kDefaultRuns;
  unsigned threads = 1;
  std::string fixture_path = default_fixture_path();
};

/// Every fixture row of the selected tables. Row i of the fixture is seeded
/// with derive_run_seed(base_seed ^ kTableSeedSalt, i), so a row's numbers do
/// not depend on which other tables were selected.
TableReport reproduce_tables(const TableRunOptions& options);

inline constexpr std::uint64_t kTableSeedSalt = 0x7ab1e5eed5eed000ull;

}  // namespace polyavis
