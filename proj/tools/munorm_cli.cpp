// Command-line surface: ingest operator specs, run computations and check
// suites, emit machine-readable tables and reports.
//
// Exit codes: 0 success, 1 invalid input, 2 check failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "munorm/bistochastic.hpp"
#include "munorm/finite.hpp"
#include "munorm/koopman.hpp"
#include "munorm/omega.hpp"
#include "munorm/operator_json.hpp"
#include "munorm/report.hpp"
#include "munorm/suite.hpp"

namespace {

using namespace munorm;

struct Options {
  std::string op_file;
  std::string inline_json;
  std::string intervals = "64,256,1024";
  std::string format = "json";
  std::string out;
  std::string partition;
  std::string kernel_out;
  int J = 0;
  int grid = 512;
  int n_max = 4;
  int trials = 200;
  int parallel = 1;
  index_t M = 4;
  index_t band = -1;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  bool tol_given = false;
  bool intervals_given = false;
  bool kernel_grid = false;
};

std::vector<index_t> parse_intervals(const std::string& text) {
  std::vector<index_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoll(item));
  if (out.empty()) throw std::invalid_argument("--intervals: empty list");
  return out;
}

ParsedOperator load_operator(const Options& o) {
  if (o.op_file.empty() == o.inline_json.empty())
    throw std::invalid_argument("exactly one of --op or --inline is required");
  ParsedOperator p = o.op_file.empty() ? parse_operator_string(o.inline_json)
                                       : parse_operator_file(o.op_file);
  if (p.domain == ParsedOperator::Domain::torus) {
    if (o.band >= 0 && p.lattice_op->band() > o.band)
      throw std::invalid_argument("operator band exceeds --band");
  } else if (o.J > 0) {
    const int J = p.permutation ? p.permutation->points() : p.finite_op->points();
    if (J != o.J) throw std::invalid_argument("operator size disagrees with --J");
  }
  return p;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file " + o.out);
  f << text;
}

Partition parse_partition(const std::string& text, int J) {
  if (text.empty()) {
    // Default: split into halves (leading half gets the extra point).
    std::vector<int> labels(J, 1);
    for (int x = 0; x < (J + 1) / 2; ++x) labels[x] = 0;
    return Partition::from_labels(labels);
  }
  std::vector<SubsetMask> blocks;
  std::stringstream ss(text);
  std::string blocktext;
  while (std::getline(ss, blocktext, '|')) {
    std::vector<int> members;
    std::stringstream bs(blocktext);
    std::string item;
    while (std::getline(bs, item, ','))
      if (!item.empty()) members.push_back(std::stoi(item));
    blocks.emplace_back(J, members);
  }
  return Partition(J, blocks);
}

// ---------------------------------------------------------------------------

int cmd_mu_norm(const Options& o) {
  const ParsedOperator p = load_operator(o);
  JsonObject report;
  report.add("command", "mu-norm");
  report.add("seed", static_cast<long long>(o.seed));
  bool mismatch = false;

  if (p.domain == ParsedOperator::Domain::torus) {
    const LatticeOperator& W = *p.lattice_op;
    double value_sq;
    try {
      const OmegaTable table = omega_exact(W, o.M);
      value_sq = table.omega(0, 0).real();
      report.add("source", "exact");
    } catch (const NoClosedForm&) {
      const std::vector<index_t> lens = parse_intervals(o.intervals);
      const index_t len = *std::max_element(lens.begin(), lens.end());
      value_sq = omega_window(W, IntInterval::starting(0, len), 0, 0).real();
      report.add("source", "estimated");
      report.add("interval_len", static_cast<long long>(len));
    }
    report.add("eq", "eq:dim=omega");
    report.add("dt_norm", W.dt_norm());
    report.add("mu_norm_sq", value_sq);
    report.add("mu_norm", std::sqrt(std::max(0.0, value_sq)));
    {
      // Item-(16) cross-check: quadrature of the windowed rho(L_a).
      const std::vector<index_t> lens = parse_intervals(o.intervals);
      const index_t len = *std::max_element(lens.begin(), lens.end());
      JsonObject integral;
      integral.add("eq", "eq:||W||_mu=int");
      integral.add("a_grid", o.grid);
      integral.add("interval_len", static_cast<long long>(len));
      integral.add("value",
                   mu_norm_integral_estimate(W, o.grid, IntInterval::starting(0, len)));
      report.add("integral_estimate", integral.done());
    }
  } else {
    const FiniteOperator W =
        p.permutation ? koopman(*p.permutation) : *p.finite_op;
    const double value = mu_norm(W);
    report.add("eq", "eq:|.|mu(finite)");
    report.add("J", W.points());
    report.add("mu_norm", value);
    report.add("mu_norm_sq", value * value);
    if (W.points() <= PartitionEnumerator::default_partition_guard()) {
      const MuNormSearch search = mu_norm_by_partition_search(W);
      const double diff = std::max(std::abs(search.minimum - value),
                                   std::abs(search.singleton_value - value));
      mismatch = diff > o.tol;
      JsonObject oracle;
      oracle.add("eq", "eq:mumeasure");
      oracle.add("minimum", search.minimum);
      oracle.add("singleton", search.singleton_value);
      oracle.add("partitions", static_cast<long long>(search.partitions_visited));
      oracle.add("max_diff", diff);
      oracle.add("tol", o.tol);
      oracle.add("pass", !mismatch);
      report.add("oracle", oracle.done());
    }
  }

  if (o.format == "csv") {
    // Flat two-column rendering of the same report.
    std::string csv = "key,value\n";
    csv += "command,mu-norm\n";
    emit(o, csv + "json," + report.str() + "\n");
  } else {
    emit(o, report.str() + "\n");
  }
  return mismatch ? 2 : 0;
}

int cmd_entropy(const Options& o) {
  const ParsedOperator p = load_operator(o);
  if (p.domain != ParsedOperator::Domain::permutation)
    throw std::invalid_argument("entropy requires a permutation spec");
  const Permutation& F = *p.permutation;
  const Partition chi = parse_partition(o.partition, F.points());
  const FiniteOperator U = koopman(F);

  std::string csv = "# eq:hUchiN eq:UF=F\n";
  csv += "n,ks_stage,quantum_stage,ratio\n";
  std::string json_rows;
  JsonArray rows;
  for (int n = 1; n <= o.n_max; ++n) {
    const double ks = ks_entropy_stage(F, chi, n - 1);
    const double quantum = quantum_entropy_stage(U, chi, n - 1);
    const std::string ratio = ks > 0.0 ? format_double(quantum / ks) : "";
    csv += std::to_string(n) + "," + format_double(ks) + "," +
           format_double(quantum) + "," + ratio + "\n";
    JsonObject row;
    row.add("n", n);
    row.add("ks_stage", ks);
    row.add("quantum_stage", quantum);
    if (ks > 0.0) row.add("ratio", quantum / ks);
    rows.push(row.done());
  }
  if (o.format == "json") {
    JsonObject report;
    report.add("command", "entropy");
    report.add("eq", "eq:hUchiN eq:UF=F");
    report.add("rows", rows.done());
    emit(o, report.str() + "\n");
  } else {
    emit(o, csv);
  }
  return 0;
}

int cmd_omega(const Options& o) {
  const ParsedOperator p = load_operator(o);
  if (p.domain != ParsedOperator::Domain::torus)
    throw std::invalid_argument("omega requires a circle operator spec");
  const LatticeOperator& W = *p.lattice_op;

  bool closed_form = true;
  try {
    omega_closed_form(W, 0, 0);
  } catch (const NoClosedForm&) {
    closed_form = false;
  }

  if (o.kernel_grid) {
    // Truncated-kernel evaluations for external plotting.
    const OmegaTable table =
        closed_form
            ? omega_exact(W, o.M)
            : omega_estimated(W, o.M,
                              IntInterval::starting(0, parse_intervals(o.intervals).back()),
                              o.parallel);
    std::string csv = "# eq:nu=sum\n";
    csv += "x,a,re,im\n";
    for (int i = 0; i < o.grid; ++i)
      for (int j = 0; j < o.grid; ++j) {
        const double x = kTwoPi * i / o.grid;
        const double a = kTwoPi * j / o.grid;
        const cplx v = nu_eval(table, x, a);
        csv += format_double(x) + "," + format_double(a) + "," +
               format_double(v.real()) + "," + format_double(v.imag()) + "\n";
      }
    emit(o, csv);
    return 0;
  }

  std::string csv = "# eq:limomega eq:dim=omega lem:per=>reg\n";
  csv += "m,n,re,im,source,interval_len\n";
  const std::vector<index_t> lens = parse_intervals(o.intervals);
  if (closed_form) {
    const OmegaTable table = omega_exact(W, o.M);
    for (index_t m = -o.M; m <= o.M; ++m)
      for (index_t n = -o.M; n <= o.M; ++n) {
        const cplx v = table.omega(m, n);
        csv += std::to_string(m) + "," + std::to_string(n) + "," +
               format_double(v.real()) + "," + format_double(v.imag()) +
               ",exact,\n";
      }
    if (o.intervals_given) {
      csv += "# convergence lem:per=>reg\n";
      csv += "m,n,interval_len,abs_error,bound\n";
      for (index_t m = -o.M; m <= o.M; ++m)
        for (index_t n = -o.M; n <= o.M; ++n)
          for (const ConvergenceRow& row : omega_convergence_report(W, m, n, lens))
            csv += std::to_string(m) + "," + std::to_string(n) + "," +
                   std::to_string(row.interval_len) + "," +
                   format_double(row.abs_error) + "," + format_double(row.bound) +
                   "\n";
    }
  } else {
    for (index_t len : lens) {
      const OmegaTable table =
          omega_estimated(W, o.M, IntInterval::starting(0, len), o.parallel);
      for (index_t m = -o.M; m <= o.M; ++m)
        for (index_t n = -o.M; n <= o.M; ++n) {
          const cplx v = table.omega(m, n);
          csv += std::to_string(m) + "," + std::to_string(n) + "," +
                 format_double(v.real()) + "," + format_double(v.imag()) +
                 ",estimated," + std::to_string(len) + "\n";
        }
    }
  }
  emit(o, csv);
  return 0;
}

int cmd_bistochastic(const Options& o) {
  const ParsedOperator p = load_operator(o);
  BistochasticKernel kernel = [&] {
    if (p.domain == ParsedOperator::Domain::torus) {
      const LatticeOperator& W = *p.lattice_op;
      bool unitary = false;
      if (const ConvolutionSymbol* sym = W.as_convolution()) {
        unitary = sym->form() != ConvolutionSymbol::Form::table;
        if (!unitary) {
          // A table symbol is unitary only if every lattice value is
          // unimodular, which a finite window cannot provide.
          unitary = false;
        }
      } else if (const FourierPolynomial* g = W.as_multiplication()) {
        double lo = 1e300, hi = 0.0;
        for (int t = 0; t < 1024; ++t) {
          const double v = std::abs(g->evaluate(kTwoPi * t / 1024));
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        unitary = std::abs(lo - 1.0) < 1e-10 && std::abs(hi - 1.0) < 1e-10;
      }
      return BistochasticKernel::from_table(omega_exact(W, o.M), unitary);
    }
    const FiniteOperator W =
        p.permutation ? koopman(*p.permutation) : *p.finite_op;
    return BistochasticKernel::from_finite(W);
  }();

  Rng rng(o.seed ^ 0x5eedf00d);
  const NonnegativityReport nn = check_nonnegativity(kernel, o.trials, o.seed);
  const ResidualReport unit = check_unit(kernel);
  ResidualReport mass;
  if (kernel.source_unitary()) {
    const index_t size = kernel.mode() == BistochasticKernel::Mode::finite
                             ? kernel.size_param()
                             : 2 * kernel.size_param() + 1;
    Eigen::VectorXcd f(size);
    for (index_t i = 0; i < size; ++i) f(i) = rng.complex_normal();
    mass = check_mass(kernel, f);
  }
  const L1BoundReport l1 = l1_bound(kernel);
  const bool l1_ok = l1.slack >= -1e-9;

  if (!o.kernel_out.empty()) {
    JsonObject exported;
    exported.add("mode", kernel.mode() == BistochasticKernel::Mode::finite
                             ? "finite"
                             : "torus");
    exported.add("size_param", static_cast<long long>(kernel.size_param()));
    JsonArray entries;
    const index_t lo =
        kernel.mode() == BistochasticKernel::Mode::finite ? 0 : -kernel.size_param();
    const index_t hi = kernel.mode() == BistochasticKernel::Mode::finite
                           ? kernel.size_param() - 1
                           : kernel.size_param();
    for (index_t m = lo; m <= hi; ++m)
      for (index_t n = lo; n <= hi; ++n) {
        const cplx v = kernel.omega(m, n);
        JsonArray row;
        row.push(JsonValue::integer(m));
        row.push(JsonValue::integer(n));
        row.push(JsonValue::number(v.real()));
        row.push(JsonValue::number(v.imag()));
        entries.push(row.done());
      }
    exported.add("omega", entries.done());
    std::ofstream f(o.kernel_out, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open " + o.kernel_out);
    f << exported.str() << "\n";
  }

  JsonObject report;
  report.add("command", "bistochastic");
  report.add("eq", "lem:bistochastic eq:norm_calW");
  report.add("mode",
             kernel.mode() == BistochasticKernel::Mode::finite ? "finite" : "torus");
  report.add("size_param", static_cast<long long>(kernel.size_param()));
  report.add("source_unitary", kernel.source_unitary());
  report.add("seed", static_cast<long long>(o.seed));
  {
    JsonObject c;
    c.add("trials", nn.trials);
    c.add("min_value", nn.min_value);
    c.add("pass", nn.pass);
    report.add("nonnegativity", c.done());
  }
  if (kernel.source_unitary()) {
    JsonObject cu;
    cu.add("residual", unit.residual);
    cu.add("pass", unit.pass);
    report.add("unit_preservation", cu.done());
    JsonObject cm;
    cm.add("residual", mass.residual);
    cm.add("pass", mass.pass);
    report.add("mass_preservation", cm.done());
  } else {
    report.add("unit_preservation", "skipped: source is not unitary");
    report.add("mass_preservation", "skipped: source is not unitary");
  }
  {
    JsonObject c;
    c.add("value", l1.value);
    c.add("bound", l1.bound);
    c.add("slack", l1.slack);
    c.add("pass", l1_ok);
    report.add("l1_bound", c.done());
  }
  emit(o, report.str() + "\n");

  const bool fail = !nn.pass || !l1_ok ||
                    (kernel.source_unitary() && (!unit.pass || !mass.pass));
  return fail ? 2 : 0;
}

int cmd_suite(const Options& o) {
  SuiteOptions so;
  so.seed = o.seed;
  if (o.tol_given) so.tol_override = o.tol;
  std::vector<CriterionResult> results = run_acceptance_criteria(so);
  const std::string first = format_suite_report(results);
  results.push_back(run_determinism_criterion(so, &first));

  if (o.format == "json") {
    JsonArray arr;
    for (const CriterionResult& r : results) {
      JsonObject item;
      item.add("id", r.id);
      item.add("name", r.name);
      item.add("eq", r.eq_tags);
      item.add("pass", r.pass);
      item.add("details", r.details);
      arr.push(item.done());
    }
    JsonObject report;
    report.add("command", "suite");
    report.add("seed", static_cast<long long>(o.seed));
    report.add("criteria", arr.done());
    report.add("pass", all_pass(results));
    emit(o, report.str() + "\n");
  } else {
    emit(o, format_suite_report(results));
  }
  return all_pass(results) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mu-norm operator toolkit"};
  app.fallthrough();
  app.require_subcommand(1);

  Options o;
  app.add_option("--op", o.op_file, "operator spec file (JSON)");
  app.add_option("--inline", o.inline_json, "operator spec as inline JSON");
  app.add_option("--J", o.J, "expected finite-space size (validated)");
  app.add_option("--M", o.M, "window radius for omega tables");
  app.add_option("--band", o.band, "maximum allowed band of circle operators");
  auto* intervals_opt =
      app.add_option("--intervals", o.intervals, "comma-separated interval lengths");
  app.add_option("--grid", o.grid, "evaluation grid size");
  app.add_option("--seed", o.seed, "seed for randomized checks");
  auto* tol_opt = app.add_option("--tol", o.tol, "comparison tolerance");
  app.add_option("--format", o.format, "output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "output path (default stdout)");
  app.add_option("--partition", o.partition, "partition blocks, e.g. \"0,1|2,3\"");
  app.add_option("--n", o.n_max, "number of entropy stages");
  app.add_option("--trials", o.trials, "randomized trial count");
  app.add_option("--parallel", o.parallel, "worker threads for windowed sweeps")
      ->check(CLI::PositiveNumber);
  app.add_flag("--kernel", o.kernel_grid, "emit nu(x,a) evaluations instead of a table");
  app.add_option("--kernel-out", o.kernel_out, "write the kernel omega export to a file");

  auto* sub_mu = app.add_subcommand("mu-norm", "mu-norm of an operator");
  auto* sub_entropy = app.add_subcommand("entropy", "entropy stage table");
  auto* sub_omega = app.add_subcommand("omega", "omega coefficient table");
  auto* sub_bisto = app.add_subcommand("bistochastic", "bistochastic operator checks");
  auto* sub_suite = app.add_subcommand("suite", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  o.tol_given = tol_opt->count() > 0;
  o.intervals_given = intervals_opt->count() > 0;

  try {
    if (sub_mu->parsed()) return cmd_mu_norm(o);
    if (sub_entropy->parsed()) return cmd_entropy(o);
    if (sub_omega->parsed()) return cmd_omega(o);
    if (sub_bisto->parsed()) return cmd_bistochastic(o);
    if (sub_suite->parsed()) return cmd_suite(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
