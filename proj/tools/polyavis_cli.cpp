// polyavis: visible-step densities of perturbed and twisted Pólya walks.
//
//   polyavis simulate --mode perturbed --start 2,4 --beta=-0.3,0.3 --steps 100000 --runs 10
//   polyavis exact --start 2,2 --n 16 --what expected
//   polyavis lemma --op characters --n 40 --alpha 0.3 --d 5 --c 2
//   polyavis tables --which 1,2 --output tables.csv
//   polyavis verify --suite all
//
// Exit status: 0 success, 1 verification failure, 2 invalid input or I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "polyavis/compositions.hpp"
#include "polyavis/errors.hpp"
#include "polyavis/exact.hpp"
#include "polyavis/harness.hpp"
#include "polyavis/lemma_lab.hpp"
#include "polyavis/verify.hpp"

namespace {

using namespace polyavis;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalid = 2;

std::string counts_to_string(const StepCountVector& u) {
  std::string out;
  for (std::size_t r = 0; r < u.size(); ++r) {
    if (r) out += ';';
    out += std::to_string(u[r]);
  }
  return out;
}

void print_table(const OccupancyTable& table) {
  std::printf("u,probability\n");
  for (const auto& [u, p] : table.entries) std::printf("%s,%.17g\n", counts_to_string(u).c_str(), p);
  std::printf("# total,%.17g\n", table.total());
}

void print_rows(const TableReport& report) {
  std::printf("%-14s %-9s %-9s %-30s %-10s %-10s %-10s %-10s\n", "label", "mode", "start", "params",
              "mean", "published", "reference", "deviation");
  for (const auto& r : report.rows) {
    std::printf("%-14s %-9s %-9s %-30s %-10.6f %-10s %-10.6f %-10.6f\n", r.label.c_str(), r.mode.c_str(),
                r.start.c_str(), r.params.c_str(), r.mean_density,
                r.paper_density ? std::to_string(*r.paper_density).c_str() : "-", r.reference,
                r.deviation);
  }
}

std::vector<std::uint64_t> parse_grid(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (double x : parse_reals(text, "grid")) {
    if (x < 0 || x != static_cast<double>(static_cast<std::uint64_t>(x)))
      throw ConfigError("grid", "entries must be nonnegative integers");
    out.push_back(static_cast<std::uint64_t>(x));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visible lattice points along perturbed and twisted Polya walks"};
  app.require_subcommand(1);

  // simulate
  ExperimentInput sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo density of visible steps");
  simulate->add_option("--mode", sim.mode, "standard | perturbed | twisted")->capture_default_str();
  simulate->add_option("--k", sim.k, "Dimension (checked against --start)");
  simulate->add_option("--start", sim.start, "Start point, e.g. 2,4")->required();
  simulate->add_option("--beta", sim.beta, "Perturbation, e.g. -0.3,0.3 (perturbed)");
  simulate->add_option("--B", sim.bound, "Perturbation bound B (perturbed)");
  simulate->add_option("--gamma", sim.gamma, "Rows gamma_r separated by ';', e.g. '0,1;1,0' (twisted)");
  simulate->add_option("--steps", sim.steps, "Steps N per run")->capture_default_str();
  simulate->add_option("--runs", sim.runs, "Independent runs")->capture_default_str();
  simulate->add_option("--seed", sim.base_seed, "Base seed")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)")->capture_default_str();
  simulate->add_option("--output", sim.output_path, "Output file");
  simulate->add_option("--format", sim.output_format, "csv | json")->capture_default_str();

  // exact
  std::string ex_mode = "standard", ex_start, ex_beta, ex_bound, ex_gamma, ex_what = "expected";
  std::uint64_t ex_n = 1, ex_m = 0;
  auto* exact = app.add_subcommand("exact", "Exact occupancy laws and visibility expectations");
  exact->add_option("--mode", ex_mode, "standard | perturbed | twisted (twisted: oracle only)")->capture_default_str();
  exact->add_option("--start", ex_start, "Start point")->required();
  exact->add_option("--beta", ex_beta, "Perturbation");
  exact->add_option("--B", ex_bound, "Perturbation bound B");
  exact->add_option("--gamma", ex_gamma, "Twist rows");
  exact->add_option("--n", ex_n, "Step index n")->capture_default_str();
  exact->add_option("--m", ex_m, "Second step index m > n (what=pair)");
  exact->add_option("--what", ex_what, "table | oracle | expected | pair")->capture_default_str();

  // lemma
  std::string lm_op = "characters", lm_alpha = "0.5", lm_c = "0", lm_grid, lm_lambdas = "0.3";
  std::uint64_t lm_n = 10, lm_d = 2, lm_l = 2, lm_m = 10;
  double lm_delta = 0.25, lm_a = 0.5;
  auto* lemma = app.add_subcommand("lemma", "Character sums and trigonometric bounds");
  lemma->add_option("--op", lm_op, "direct | characters | profile | cosine | hsum | jsum | binomial")
      ->capture_default_str();
  lemma->add_option("--n", lm_n, "n")->capture_default_str();
  lemma->add_option("--alpha", lm_alpha, "alpha_1..alpha_{k-1}")->capture_default_str();
  lemma->add_option("--d", lm_d, "Modulus d")->capture_default_str();
  lemma->add_option("--c", lm_c, "Residues c_1..c_{k-1}")->capture_default_str();
  lemma->add_option("--grid", lm_grid, "n grid for profile, e.g. 16,32,64");
  lemma->add_option("--l", lm_l, "l (cosine power / J-sum dimension)")->capture_default_str();
  lemma->add_option("--delta", lm_delta, "delta for hsum")->capture_default_str();
  lemma->add_option("--lambdas", lm_lambdas, "lambdas for jsum")->capture_default_str();
  lemma->add_option("--m", lm_m, "m for binomial")->capture_default_str();
  lemma->add_option("--a", lm_a, "alpha for binomial")->capture_default_str();

  // tables
  TableRunOptions tab;
  std::string tab_which = "1,2,3,4", tab_output, tab_format = "csv";
  auto* tables = app.add_subcommand("tables", "Reproduce the bundled density tables");
  tables->add_option("--which", tab_which, "Subset of 1,2,3,4")->capture_default_str();
  tables->add_option("--seed", tab.base_seed, "Base seed")->capture_default_str();
  tables->add_option("--steps", tab.steps, "Steps N per run")->capture_default_str();
  tables->add_option("--runs", tab.runs, "Runs per row")->capture_default_str();
  tables->add_option("--threads", tab.threads, "Worker threads (0 = all cores)")->capture_default_str();
  tables->add_option("--fixture", tab.fixture_path, "Table fixture")->capture_default_str();
  tables->add_option("--output", tab_output, "Output file");
  tables->add_option("--format", tab_format, "csv | json")->capture_default_str();

  // verify
  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run invariant suites");
  verify->add_option("--suite", suite, "numtheory | exact | lemma | walks | all")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*simulate) {
      const ExperimentSpec spec = parse_experiment(sim);
      const TableRow row = run_experiment(spec);
      std::cout << csv_summary(TableReport{{row}});
      return kExitOk;
    }

    if (*exact) {
      ExperimentInput in;
      in.mode = ex_mode;
      in.start = ex_start;
      in.beta = ex_beta;
      in.bound = ex_bound;
      in.gamma = ex_gamma;
      const ExperimentSpec spec = parse_experiment(in);
      if (ex_what == "oracle") {
        print_table(dp_oracle(ex_n, spec.config));
        return kExitOk;
      }
      const auto* cfg = std::get_if<PerturbedConfig>(&spec.config);
      if (!cfg) throw ConfigError("what", "twisted walks only support --what oracle");
      if (ex_what == "table") {
        print_table(occupancy_table(ex_n, *cfg));
      } else if (ex_what == "expected") {
        const auto e = expected_visible(ex_n, *cfg);
        std::printf("n,exact,main_term,difference\n%llu,%.17g,%.17g,%.17g\n",
                    static_cast<unsigned long long>(ex_n), e.exact, e.main_term, e.difference);
      } else if (ex_what == "pair") {
        const auto e = pair_expected_visible(ex_n, ex_m, *cfg);
        std::printf("n,m,exact,main_term_product\n%llu,%llu,%.17g,%.17g\n",
                    static_cast<unsigned long long>(ex_n), static_cast<unsigned long long>(ex_m), e.exact,
                    e.main_term_product);
      } else {
        throw ConfigError("what", "expected table, oracle, expected or pair");
      }
      return kExitOk;
    }

    if (*lemma) {
      if (lm_op == "cosine") {
        const auto r = cosine_power_sum(lm_l, lm_d);
        std::printf("l,d,value,ratio\n%llu,%llu,%.17g,%.17g\n", static_cast<unsigned long long>(lm_l),
                    static_cast<unsigned long long>(lm_d), r.value, r.ratio);
      } else if (lm_op == "hsum") {
        std::printf("n,delta,d,value\n%llu,%g,%llu,%.17g\n", static_cast<unsigned long long>(lm_n), lm_delta,
                    static_cast<unsigned long long>(lm_d), h_sum(lm_n, lm_delta, lm_d));
      } else if (lm_op == "jsum") {
        const auto lambdas = parse_reals(lm_lambdas, "lambdas");
        std::printf("n,d,l,value\n%llu,%llu,%llu,%.17g\n", static_cast<unsigned long long>(lm_n),
                    static_cast<unsigned long long>(lm_d), static_cast<unsigned long long>(lm_l),
                    j_sum(lm_n, lambdas, lm_d, lm_l));
      } else if (lm_op == "binomial") {
        const auto r = binomial_max_check(lm_m, lm_a);
        std::printf("m,alpha,max_term,ratio\n%llu,%g,%.17g,%.17g\n", static_cast<unsigned long long>(lm_m),
                    lm_a, r.max_term, r.ratio);
      } else {
        const AlphaVector alpha(parse_reals(lm_alpha, "alpha"));
        std::vector<std::int64_t> c;
        for (double x : parse_reals(lm_c, "c")) c.push_back(static_cast<std::int64_t>(x));
        const ResidueConstraint rc(lm_d, c);
        if (lm_op == "direct") {
          std::printf("%.17g\n", constrained_sum_direct(lm_n, alpha, rc));
        } else if (lm_op == "characters") {
          std::printf("%.17g\n", constrained_sum_characters(lm_n, alpha, rc));
        } else if (lm_op == "profile") {
          const auto grid = parse_grid(lm_grid.empty() ? "16,64,256,1024,4096,16384,65536" : lm_grid);
          std::printf("n,normalized_error\n");
          for (auto [n, e] : key_lemma_error_profile(alpha, rc, grid))
            std::printf("%llu,%.17g\n", static_cast<unsigned long long>(n), e);
        } else {
          throw ConfigError("op", "unknown lemma operation '" + lm_op + "'");
        }
      }
      return kExitOk;
    }

    if (*tables) {
      tab.which.clear();
      for (double x : parse_reals(tab_which, "which")) {
        const int t = static_cast<int>(x);
        if (t < 1 || t > 4 || t != x) throw ConfigError("which", "tables are numbered 1..4");
        tab.which.insert(t);
      }
      const OutputFormat format = parse_format(tab_format);
      const TableReport report = reproduce_tables(tab);
      print_rows(report);
      if (!tab_output.empty()) write_report(report, tab_output, format);
      return kExitOk;
    }

    if (*verify) {
      const auto results = run_verification(suite);
      bool ok = true;
      for (const auto& r : results) {
        std::printf("%s  [%s] %s: measured %.6g, tolerance %.6g%s%s\n", r.passed ? "PASS" : "FAIL",
                    r.suite.c_str(), r.name.c_str(), r.measured, r.tolerance, r.detail.empty() ? "" : " | ",
                    r.detail.c_str());
        ok = ok && r.passed;
      }
      return ok ? kExitOk : kExitVerifyFailed;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
  return kExitOk;
}
