#include "munorm/suite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "munorm/bistochastic.hpp"
#include "munorm/finite.hpp"
#include "munorm/koopman.hpp"
#include "munorm/localized.hpp"
#include "munorm/omega.hpp"
#include "munorm/operator_json.hpp"
#include "munorm/report.hpp"

namespace munorm {

namespace {

double tol_of(const SuiteOptions& o, double stated) {
  return o.tol_override ? std::min(stated, *o.tol_override) : stated;
}

// Tracks the worst residual of a batch of "value must be <= tol" checks.
struct Worst {
  double value = 0.0;
  void feed(double v) { value = std::max(value, v); }
  bool within(double tol) const { return value <= tol; }
};

std::string detail(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += " ";
    out += std::string(k) + "=" + v;
  }
  return out;
}

FourierPolynomial random_poly(Rng& rng, index_t degree) {
  FourierPolynomial g;
  for (index_t k = -degree; k <= degree; ++k) g.set(k, rng.complex_normal());
  return g;
}

Partition random_partition(Rng& rng, int J, int blocks) {
  while (true) {
    std::vector<int> labels(J);
    for (int x = 0; x < J; ++x) labels[x] = rng.uniform_int(0, blocks - 1);
    std::vector<char> used(blocks, 0);
    for (int l : labels) used[l] = 1;
    if (std::all_of(used.begin(), used.end(), [](char c) { return c != 0; }))
      return Partition::from_labels(labels);
  }
}

// Closed-form corpus shared by the omega criteria. Names are stable so the
// report is deterministic.
struct CorpusEntry {
  std::string name;
  LatticeOperator op;
};

std::vector<CorpusEntry> closed_form_corpus(std::uint64_t seed) {
  Rng rng(seed ^ 0x6f6d656761ull);
  std::vector<CorpusEntry> corpus;
  corpus.push_back({"mult-deg4", LatticeOperator::multiplication(random_poly(rng, 4))});
  corpus.push_back({"mult-deg2", LatticeOperator::multiplication(random_poly(rng, 2))});
  for (index_t tau : {2, 3}) {
    std::map<std::pair<index_t, index_t>, cplx> block;
    for (index_t r = 0; r < tau; ++r)
      for (index_t s = -2; s <= 2; ++s) block[{r, s}] = 0.5 * rng.complex_normal();
    corpus.push_back({"periodic-tau" + std::to_string(tau),
                      LatticeOperator::periodic(tau, std::move(block))});
  }
  corpus.push_back(
      {"rotation", LatticeOperator::convolution(ConvolutionSymbol::rotation(0.9))});
  corpus.push_back({"quadratic-pi2", LatticeOperator::convolution(
                                         ConvolutionSymbol::quadratic_phase(kPi / 2))});
  corpus.push_back({"quadratic-pi3", LatticeOperator::convolution(
                                         ConvolutionSymbol::quadratic_phase(kPi / 3))});
  corpus.push_back({"quadratic-0.7", LatticeOperator::convolution(
                                         ConvolutionSymbol::quadratic_phase(0.7))});
  return corpus;
}

// Largest |m+n| with omega_{m,n} != 0, for exact-kind operators.
index_t omega_diag_support(const LatticeOperator& W) {
  switch (W.kind()) {
    case LatticeOperator::Kind::multiplication:
    case LatticeOperator::Kind::periodic:
      return 2 * W.band();
    default:
      return 0;  // convolution kinds sit on m + n = 0
  }
}

// ---------------------------------------------------------------------------
// Criterion 1: partition-infimum oracle.

CriterionResult criterion_partition_oracle(const SuiteOptions& o) {
  const double tol = tol_of(o, 1e-9);
  Rng rng(o.seed ^ 0x01);
  Worst worst;
  int cases = 0;
  for (int J = 2; J <= 6; ++J) {
    for (int trial = 0; trial < 50; ++trial) {
      const FiniteOperator w(random_complex_matrix(J, rng), Basis::value);
      const double formula = mu_norm(w);
      const MuNormSearch search = mu_norm_by_partition_search(w);
      worst.feed(std::abs(search.minimum - formula));
      worst.feed(std::abs(search.singleton_value - search.minimum));
      ++cases;
    }
  }
  return {1, "partition-infimum-oracle", "eq:mumeasure eq:|.|mu(finite)",
          worst.within(tol),
          detail({{"cases", std::to_string(cases)},
                  {"max_residual", format_double(worst.value)},
                  {"tol", format_double(tol)}})};
}

// ---------------------------------------------------------------------------
// Criterion 2: projector law over every subset, J <= 12.

CriterionResult criterion_projector_law(const SuiteOptions& o) {
  const double tol = tol_of(o, 1e-12);
  Worst worst;
  long long cases = 0;
  for (int J = 1; J <= 12; ++J) {
    const FiniteSpace space(J);
    for (unsigned mask = 0; mask < (1u << J); ++mask) {
      std::vector<int> members;
      for (int x = 0; x < J; ++x)
        if (mask & (1u << x)) members.push_back(x);
      const SubsetMask X(J, members);
      const double mu_sq = std::pow(mu_norm(projector(space, X)), 2);
      worst.feed(std::abs(mu_sq - X.measure()));
      ++cases;
    }
  }
  return {2, "projector-law", "item:1", worst.within(tol),
          detail({{"subsets", std::to_string(cases)},
                  {"max_residual", format_double(worst.value)},
                  {"tol", format_double(tol)}})};
}

// ---------------------------------------------------------------------------
// Criterion 3: seminorm and invariance properties at J = 8.

CriterionResult criterion_seminorm(const SuiteOptions& o) {
  const double tol = tol_of(o, 1e-10);
  const int J = 8;
  Rng rng(o.seed ^ 0x03);
  Worst worst;
  for (int trial = 0; trial < 100; ++trial) {
    const FiniteOperator w1(random_complex_matrix(J, rng), Basis::value);
    const FiniteOperator w2(random_complex_matrix(J, rng), Basis::value);
    const FiniteOperator u(random_unitary(J, rng), Basis::value);
    const cplx lambda = rng.complex_normal();

    const FiniteOperator sum(w1.entries + w2.entries, Basis::value);
    worst.feed(mu_norm(sum) - mu_norm(w1) - mu_norm(w2));  // triangle

    const FiniteOperator scaledv(lambda * w1.entries, Basis::value);
    worst.feed(std::abs(mu_norm(scaledv) - std::abs(lambda) * mu_norm(w1)));

    const FiniteOperator uw(u.entries * w1.entries, Basis::value);
    worst.feed(std::abs(mu_norm(uw) - mu_norm(w1)));

    const FiniteOperator w1w2(w1.entries * w2.entries, Basis::value);
    worst.feed(mu_norm(w1w2) - operator_norm(w1) * mu_norm(w2));

    const FiniteOperator diff(w1.entries - w2.entries, Basis::value);
    worst.feed(std::abs(mu_norm(w1) - mu_norm(w2)) - operator_norm(diff));
  }
  return {3, "seminorm-invariance", "item:3 eq:lambdaW eq:UWWU eq:WW eq:|1|",
          worst.within(tol),
          detail({{"trials", "100"},
                  {"max_violation", format_double(worst.value)},
                  {"tol", format_double(tol)}})};
}

// ---------------------------------------------------------------------------
// Criterion 4: Koopman entropy equality at J = 8.
//
// Per word the mu-norm identity pairs the projector word with the refined
// cell of the REVERSED word (moving U_F through the projectors reverses the
// temporal order); the stage sums then agree term-by-term after that
// bijection. Both facts are checked.

CriterionResult criterion_koopman_entropy(const SuiteOptions& o) {
  const double word_tol = tol_of(o, 1e-12);
  const double stage_tol = tol_of(o, 1e-10);
  const int J = 8;
  const int max_letters = 5;  // N <= 4
  Rng rng(o.seed ^ 0x04);

  std::vector<Permutation> perms;
  for (int i = 0; i < 200; ++i) perms.push_back(Permutation::random(J, rng));
  std::vector<Partition> partitions;
  for (int i = 0; i < 10; ++i) partitions.push_back(random_partition(rng, J, 2));
  for (int i = 0; i < 10; ++i) partitions.push_back(random_partition(rng, J, 3));

  Worst worst_word, worst_stage;
  long long words = 0;
  for (const Permutation& F : perms) {
    const FiniteOperator u = koopman(F);
    for (const Partition& chi : partitions) {
      std::vector<double> quantum(max_letters, 0.0);
      walk_projector_words(
          u, chi, max_letters,
          [&](const PartitionWord& word, const Eigen::MatrixXcd& mat) {
            const double mu_sq = mat.squaredNorm() / J;
            PartitionWord reversed(word.rbegin(), word.rend());
            const double cell_mass = preimage_cell(F, chi, reversed).measure();
            worst_word.feed(std::abs(mu_sq - cell_mass));
            quantum[word.size() - 1] += mu_sq > 0.0 ? -mu_sq * std::log(mu_sq) : 0.0;
            ++words;
          });
      for (int n = 1; n <= max_letters; ++n)
        worst_stage.feed(std::abs(quantum[n - 1] - ks_entropy_stage(F, chi, n - 1)));
    }
  }
  const bool pass = worst_word.within(word_tol) && worst_stage.within(stage_tol);
  return {4, "koopman-entropy-equality", "eq:UF=F eq:frakX eq:hUchiN", pass,
          detail({{"words", std::to_string(words)},
                  {"max_word_residual", format_double(worst_word.value)},
                  {"max_stage_residual", format_double(worst_stage.value)},
                  {"tols", format_double(word_tol) + "/" + format_double(stage_tol)}})};
}

// ---------------------------------------------------------------------------
// Criterion 5: KS subadditivity, exhaustive for J <= 6, n+m <= 6.

CriterionResult criterion_ks_subadditivity(const SuiteOptions& o) {
  const double tol = tol_of(o, 1e-10);
  Worst worst;
  long long checks = 0;
  for (int J = 2; J <= 6; ++J) {
    // All permutations of J points.
    std::vector<int> image(J);
    for (int i = 0; i < J; ++i) image[i] = i;
    do {
      const Permutation F(image);
      PartitionEnumerator en(J);
      Partition chi = Partition::trivial(J);
      while (en.next(chi)) {
        double stage[7];
        for (int n = 1; n <= 6; ++n) stage[n] = ks_entropy_stage(F, chi, n - 1);
        for (int n = 1; n <= 5; ++n)
          for (int m = 1; n + m <= 6; ++m) {
            worst.feed(stage[n + m] - stage[n] - stage[m]);
            ++checks;
          }
      }
    } while (std::next_permutation(image.begin(), image.end()));
  }
  return {5, "ks-subadditivity", "eq:h_subadditive", worst.within(tol),
          detail({{"checks", std::to_string(checks)},
                  {"max_violation", format_double(worst.value)},
                  {"tol", format_double(tol)}})};
}

// ---------------------------------------------------------------------------
// Criterion 6: closed-form omega vs windowed estimates.

CriterionResult criterion_omega_closed_forms(const SuiteOptions& o) {
  const double exact_tol = tol_of(o, 1e-12);
  const std::vector<index_t> lengths = {64, 256, 1024};
  Worst worst_bound_excess;  // error - bound, must stay <= 0
  Worst worst_exact;
  int comparisons = 0;
  for (const CorpusEntry& entry : closed_form_corpus(o.seed)) {
    const LatticeOperator& W = entry.op;
    const double c2 = W.dt_norm() * W.dt_norm();
    for (index_t m = -2; m <= 2; ++m)
      for (index_t n = -2; n <= 2; ++n) {
        const cplx exact = omega_closed_form(W, m, n);
        for (index_t len : lengths) {
          const cplx est = omega_window(W, IntInterval::starting(1, len), m, n);
          const double err = std::abs(est - exact);
          double bound;
          bool telescopes = false;
          if (W.period()) {
            const double tau = static_cast<double>(*W.period());
            bound = tau * c2 * (1.0 / len + 1.0 / (len - tau));
            telescopes = (len % *W.period()) == 0;
          } else {
            bound = 2.0 * c2 / static_cast<double>(len);
            const ConvolutionSymbol& sym = *W.as_convolution();
            if (sym.form() == ConvolutionSymbol::Form::rotation) telescopes = true;
            if (sym.form() == ConvolutionSymbol::Form::quadratic_phase) {
              const double q = sym.parameter() * static_cast<double>(m) / kPi;
              telescopes = std::abs(q - std::round(q)) <= 1e-9 || m + n != 0;
            }
          }
          worst_bound_excess.feed(err - bound);
          if (telescopes) worst_exact.feed(err);
          ++comparisons;
        }
      }
  }
  const bool pass = worst_bound_excess.within(0.0) && worst_exact.within(exact_tol);
  return {6, "omega-closed-forms", "eq:limomega lem:su lem:per=>reg eq:omega(g)", pass,
          detail({{"comparisons", std::to_string(comparisons)},
                  {"max_error_minus_bound", format_double(worst_bound_excess.value)},
                  {"max_telescoping_error", format_double(worst_exact.value)},
                  {"exact_tol", format_double(exact_tol)}})};
}

// ---------------------------------------------------------------------------
// Criterion 7: omega table structure (symmetry, l1 bounds, tail bound).

CriterionResult criterion_omega_structure(const SuiteOptions& o) {
  const double sym_tol = tol_of(o, 1e-12);
  const double slack_tol = tol_of(o, 1e-9);
  Worst worst_sym, worst_l1_excess, worst_tail_deficit;
  int tables = 0;
  for (const CorpusEntry& entry : closed_form_corpus(o.seed)) {
    const LatticeOperator& W = entry.op;
    const OmegaTable table = omega_exact(W, 8);
    const double c2 = table.dt_bound() * table.dt_bound();
    worst_sym.feed(table.hermitian_defect());
    worst_l1_excess.feed(table.max_row_l1() - c2);
    worst_l1_excess.feed(table.max_col_l1() - c2);
    for (index_t m = -2; m <= 2; ++m)
      for (index_t M : {1, 2, 4}) {
        const TailBoundCheck tb = omega_tail_bound_check(W, m, M);
        worst_tail_deficit.feed(-tb.slack);
      }
    ++tables;
  }
  const bool pass = worst_sym.within(sym_tol) && worst_l1_excess.within(slack_tol) &&
                    worst_tail_deficit.within(slack_tol);
  return {7, "omega-structure", "lem:omegabaromega eq:sumomega lem:sumomega", pass,
          detail({{"tables", std::to_string(tables)},
                  {"max_symmetry_defect", format_double(worst_sym.value)},
                  {"max_l1_excess", format_double(worst_l1_excess.value)},
                  {"max_tail_deficit", format_double(worst_tail_deficit.value)}})};
}

// ---------------------------------------------------------------------------
// Criterion 8: mu-norm consistency for multiplication and quadratic phase.

CriterionResult criterion_mu_norm_consistency(const SuiteOptions& o) {
  const double tol = tol_of(o, 1e-10);
  const double integral_tol = tol_of(o, 1e-3);
  Rng rng(o.seed ^ 0x08);
  Worst worst_value, worst_integral;
  for (int trial = 0; trial < 20; ++trial) {
    const FourierPolynomial g = random_poly(rng, 1 + trial % 8);
    const LatticeOperator W = LatticeOperator::multiplication(g);
    const OmegaTable table = omega_exact(W, g.degree() * 2 + 1);
    const double expected = g.l2_norm_sq();
    worst_value.feed(std::abs(table.omega(0, 0).real() - expected));
    worst_value.feed(std::abs(table.omega(0, 0).imag()));
    worst_value.feed(
        std::abs(std::pow(mu_norm_regular(table), 2) - expected));
    if (trial < 5) {
      const double est =
          mu_norm_integral_estimate(W, 256, IntInterval::starting(1, 1024));
      worst_integral.feed(std::abs(est - expected));
    }
  }
  {
    const LatticeOperator W =
        LatticeOperator::convolution(ConvolutionSymbol::quadratic_phase(kPi / 2));
    const OmegaTable table = omega_exact(W, 4);
    worst_value.feed(std::abs(mu_norm_regular(table) - 1.0));
    const double est = mu_norm_integral_estimate(W, 256, IntInterval::starting(1, 1024));
    worst_integral.feed(std::abs(est - 1.0));
  }
  const bool pass = worst_value.within(tol) && worst_integral.within(integral_tol);
  return {8, "mu-norm-consistency", "eq:dim=omega item:7 item:11 eq:||W||_mu=int", pass,
          detail({{"max_value_residual", format_double(worst_value.value)},
                  {"max_integral_residual", format_double(worst_integral.value)},
                  {"tols", format_double(tol) + "/" + format_double(integral_tol)}})};
}

// ---------------------------------------------------------------------------
// Criterion 9: product formulas vs the windowed oracle on composed entries.

CriterionResult criterion_product_formulas(const SuiteOptions& o) {
  Rng rng(o.seed ^ 0x09);
  Worst worst_excess;  // |omega_tilde - oracle| - tol, must stay <= 0
  int cases = 0;
  const index_t interval_len = 1024;
  for (int trial = 0; trial < 20; ++trial) {
    LatticeOperator W = LatticeOperator::identity();
    switch (trial % 4) {
      case 0:
        W = LatticeOperator::multiplication(random_poly(rng, 2));
        break;
      case 1: {
        std::map<std::pair<index_t, index_t>, cplx> block;
        for (index_t r = 0; r < 2; ++r)
          for (index_t s = -1; s <= 1; ++s) block[{r, s}] = 0.5 * rng.complex_normal();
        W = LatticeOperator::periodic(2, std::move(block));
        break;
      }
      case 2:
        W = LatticeOperator::convolution(
            ConvolutionSymbol::rotation(kTwoPi * rng.uniform01()));
        break;
      default:
        W = LatticeOperator::convolution(ConvolutionSymbol::quadratic_phase(kPi / 2));
    }
    const FourierPolynomial g1 = random_poly(rng, 1 + rng.uniform_int(0, 3));
    const FourierPolynomial g2 = random_poly(rng, 1 + rng.uniform_int(0, 3));
    const index_t d = std::max(g1.autocorrelation().degree(),
                               g2.autocorrelation().degree());
    const index_t out_window = 2;
    const OmegaTable base = omega_exact(W, out_window + d);
    const OmegaTable composed_table = product_omega_both(g1, base, g2);

    const LatticeOperator composed = LatticeOperator::multiplication(g1) * W *
                                     LatticeOperator::multiplication(g2);
    const double c2 = W.dt_norm() * W.dt_norm();
    const double g1dt = g1.acf_norm(), g2dt = g2.acf_norm();
    const double tol = tol_of(o, 5.0 * c2 * (1.0 + g1dt * g1dt) *
                                     (1.0 + g2dt * g2dt) /
                                     static_cast<double>(interval_len));
    const IntInterval I = IntInterval::starting(1, interval_len);
    // Snapshot the rows the windowed sums touch; the lazy product rule would
    // otherwise be re-evaluated per (m, n).
    const index_t B = composed.band();
    const BandBlock block(composed,
                          IntInterval(I.lo - out_window, I.hi + out_window));
    for (index_t m = -out_window; m <= out_window; ++m)
      for (index_t n = -out_window; n <= out_window; ++n) {
        cplx oracle = 0.0;
        for (index_t l = I.lo; l <= I.hi; ++l) {
          const index_t jlo = std::max(l + m - B, l - n - B);
          const index_t jhi = std::min(l + m + B, l - n + B);
          for (index_t j = jlo; j <= jhi; ++j)
            oracle += block.entry(l + m, j) * std::conj(block.entry(l, j + n));
        }
        oracle /= static_cast<double>(interval_len);
        worst_excess.feed(std::abs(composed_table.omega(m, n) - oracle) - tol);
      }
    ++cases;
  }
  return {9, "product-formulas", "eq:tildeomega_e eq:breveomega eq:gWg",
          worst_excess.within(0.0),
          detail({{"cases", std::to_string(cases)},
                  {"max_error_minus_tol", format_double(worst_excess.value)}})};
}

// ---------------------------------------------------------------------------
// Criterion 10: bistochasticity of kernels from unitary sources.

CriterionResult criterion_bistochasticity(const SuiteOptions& o) {
  const double nonneg_tol = tol_of(o, 1e-9);
  const double unit_tol = tol_of(o, 1e-10);
  const double l1_tol = tol_of(o, 1e-9);
  Rng rng(o.seed ^ 0x0a);

  struct Source {
    std::string name;
    BistochasticKernel kernel;
  };
  std::vector<Source> sources;
  for (int J : {4, 8, 16}) {
    for (int i = 0; i < 2; ++i) {
      sources.push_back({"unitary-J" + std::to_string(J) + "-" + std::to_string(i),
                         BistochasticKernel::from_finite(
                             FiniteOperator(random_unitary(J, rng), Basis::value))});
      sources.push_back({"koopman-J" + std::to_string(J) + "-" + std::to_string(i),
                         BistochasticKernel::from_finite(
                             koopman(Permutation::random(J, rng)))});
    }
  }
  for (index_t M : {16, 32, 64}) {
    sources.push_back(
        {"rotation-M" + std::to_string(M),
         BistochasticKernel::from_table(
             omega_exact(LatticeOperator::convolution(ConvolutionSymbol::rotation(0.9)),
                         M),
             true)});
    sources.push_back({"quadratic-M" + std::to_string(M),
                       BistochasticKernel::from_table(
                           omega_exact(LatticeOperator::convolution(
                                           ConvolutionSymbol::quadratic_phase(kPi / 2)),
                                       M),
                           true)});
  }

  Worst worst_nonneg, worst_unit, worst_mass, worst_l1;
  for (const Source& s : sources) {
    const NonnegativityReport nn =
        check_nonnegativity(s.kernel, 200, o.seed ^ 0xfeed, nonneg_tol);
    worst_nonneg.feed(-nn.min_value);

    const ResidualReport unit = check_unit(s.kernel, unit_tol);
    if (unit.applicable) worst_unit.feed(unit.residual);

    for (int i = 0; i < 5; ++i) {
      Eigen::VectorXcd f;
      if (s.kernel.mode() == BistochasticKernel::Mode::finite) {
        f.resize(s.kernel.size_param());
      } else {
        f.resize(2 * s.kernel.size_param() + 1);
      }
      for (index_t k = 0; k < f.size(); ++k) f(k) = rng.complex_normal();
      const ResidualReport mass = check_mass(s.kernel, f, unit_tol);
      if (mass.applicable) worst_mass.feed(mass.residual);
    }

    const L1BoundReport l1 = l1_bound(s.kernel);
    worst_l1.feed(-l1.slack);
  }
  const bool pass = worst_nonneg.within(nonneg_tol) && worst_unit.within(unit_tol) &&
                    worst_mass.within(unit_tol) && worst_l1.within(l1_tol);
  return {10, "bistochasticity", "lem:bistochastic eq:norm_calW eq:1finite", pass,
          detail({{"sources", std::to_string(sources.size())},
                  {"max_negativity", format_double(worst_nonneg.value)},
                  {"max_unit_residual", format_double(worst_unit.value)},
                  {"max_mass_residual", format_double(worst_mass.value)},
                  {"max_l1_deficit", format_double(worst_l1.value)}})};
}

// ---------------------------------------------------------------------------
// Criterion 11: localized-Fourier inequalities for seeded bumps.

CriterionResult criterion_localized_fourier(const SuiteOptions& o) {
  const double margin_tol = tol_of(o, 1e-6);
  Rng rng(o.seed ^ 0x0b);
  const int grid = 1 << 12;
  const double eps_values[3] = {0.2, 0.1, 0.05};
  Worst worst_deficit;  // -margin, must stay <= margin_tol
  int checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double eps = eps_values[trial % 3];
    const double a = kTwoPi * rng.uniform01();
    std::vector<cplx> modulation(4);
    for (cplx& c : modulation) c = rng.complex_normal();
    const GridFunction f = bump_function(grid, a, eps, modulation);
    for (int m = -5; m <= 5; ++m)
      for (int l = -5; l <= 5; ++l) {
        const LocalizedChecks c = localized_fourier_checks(f, a, eps, m, l);
        worst_deficit.feed(-c.modulation.margin);
        worst_deficit.feed(-c.coeff_shift.margin);
        worst_deficit.feed(-c.autocorrelation.margin);
        ++checks;
      }
  }
  return {11, "localized-fourier", "lem:YfJ eq:f-ef eq:f-fe eq:ff-f",
          worst_deficit.within(margin_tol),
          detail({{"checks", std::to_string(checks)},
                  {"max_margin_deficit", format_double(worst_deficit.value)},
                  {"tol", format_double(margin_tol)}})};
}

// ---------------------------------------------------------------------------
// Criterion 12: kernel positivity after Fejer smoothing; marginal bounds.

CriterionResult criterion_kernel_positivity(const SuiteOptions& o) {
  const double fejer_tol = tol_of(o, 1e-8);
  const double phi_tol = tol_of(o, 1e-9);
  Worst worst_fejer, worst_phi;
  int tables = 0;
  for (const CorpusEntry& entry : closed_form_corpus(o.seed)) {
    const LatticeOperator& W = entry.op;
    const index_t support = omega_diag_support(W);
    const index_t fejer_len = 8;
    const OmegaTable table = omega_exact(W, fejer_len + support);
    const double c2 = table.dt_bound() * table.dt_bound();
    for (int ai = 0; ai < 8; ++ai) {
      const double a = kTwoPi * ai / 8;
      worst_fejer.feed(-fejer_kernel_min(table, a, 512, fejer_len));
    }
    for (int t = 0; t < 512; ++t) {
      const cplx phi = v_from_table(table, 0, kTwoPi * t / 512);
      worst_phi.feed(std::abs(phi.imag()));
      worst_phi.feed(-phi.real());
      worst_phi.feed(phi.real() - c2);
    }
    ++tables;
  }
  const bool pass = worst_fejer.within(fejer_tol) && worst_phi.within(phi_tol);
  return {12, "kernel-positivity", "lem:regular eq:|mu| eq:nu=sum", pass,
          detail({{"tables", std::to_string(tables)},
                  {"max_fejer_negativity", format_double(worst_fejer.value)},
                  {"max_phi_violation", format_double(worst_phi.value)}})};
}

}  // namespace

std::vector<CriterionResult> run_acceptance_criteria(const SuiteOptions& options) {
  std::vector<CriterionResult> results;
  results.push_back(criterion_partition_oracle(options));
  results.push_back(criterion_projector_law(options));
  results.push_back(criterion_seminorm(options));
  results.push_back(criterion_koopman_entropy(options));
  results.push_back(criterion_ks_subadditivity(options));
  results.push_back(criterion_omega_closed_forms(options));
  results.push_back(criterion_omega_structure(options));
  results.push_back(criterion_mu_norm_consistency(options));
  results.push_back(criterion_product_formulas(options));
  results.push_back(criterion_bistochasticity(options));
  results.push_back(criterion_localized_fourier(options));
  results.push_back(criterion_kernel_positivity(options));
  return results;
}

CriterionResult run_determinism_criterion(const SuiteOptions& options,
                                          const std::string* first_report) {
  const std::string first =
      first_report ? *first_report
                   : format_suite_report(run_acceptance_criteria(options));
  const std::string second = format_suite_report(run_acceptance_criteria(options));
  const bool pass = first == second;
  return {13, "determinism", "reports", pass,
          detail({{"bytes", std::to_string(first.size())},
                  {"identical", pass ? "yes" : "no"}})};
}

std::string format_suite_report(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  for (const CriterionResult& r : results) {
    out << "A" << (r.id < 10 ? "0" : "") << r.id << " "
        << (r.pass ? "PASS" : "FAIL") << " " << r.name << " [" << r.eq_tags << "] "
        << r.details << "\n";
  }
  out << "SUITE " << (all_pass(results) ? "PASS" : "FAIL") << "\n";
  return out.str();
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace munorm
