#include "pretlab/rotation.hpp"

#include <algorithm>
#include <cmath>

#include "pretlab/error.hpp"
#include "pretlab/parallel.hpp"

namespace pretlab {

namespace {

// A set of disjoint intervals on [0, 2pi), kept sorted.
using IntervalList = std::vector<std::pair<double, double>>;

IntervalList arc_intervals(double center, double half_width) {
  double lo = reduce_angle(center - half_width);
  double hi = lo + 2.0 * half_width;
  if (2.0 * half_width >= kTwoPi - 1e-15) return {{0.0, kTwoPi}};
  if (hi <= kTwoPi) return {{lo, hi}};
  return {{0.0, hi - kTwoPi}, {lo, kTwoPi}};
}

IntervalList intersect(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  for (const auto& [alo, ahi] : a) {
    for (const auto& [blo, bhi] : b) {
      double lo = std::max(alo, blo), hi = std::min(ahi, bhi);
      if (hi > lo) out.emplace_back(lo, hi);
    }
  }
  return out;
}

double total_length(const IntervalList& a) {
  double len = 0.0;
  for (const auto& [lo, hi] : a) len += hi - lo;
  return len;
}

}  // namespace

ArcSet make_arc_set(const std::vector<Arc>& arcs) {
  if (arcs.empty()) raise("DomainError", "arc set needs at least one coordinate");
  for (const Arc& a : arcs)
    if (!(a.half_width > 0.0 && a.half_width <= std::numbers::pi))
      raise("DomainError", "arc half-width must lie in (0, pi]");
  return ArcSet{arcs};
}

double arc_measure(const ArcSet& A) {
  double m = 1.0;
  for (const Arc& a : A.arcs) m *= a.half_width / std::numbers::pi;
  return m;
}

namespace {

double joint_measure_impl(const std::vector<FastEval>& evals, const ArcSet& A, const Int& x,
                          const Int& y, const Int& z) {
  double measure = 1.0;
  for (std::size_t j = 0; j < evals.size(); ++j) {
    const Arc& arc = A.arcs[j];
    IntervalList acc = arc_intervals(arc.center, arc.half_width);
    for (const Int* w : {&x, &y, &z}) {
      double rot = evals[j](*w).angle();
      acc = intersect(acc, arc_intervals(arc.center - rot, arc.half_width));
      if (acc.empty()) return 0.0;
    }
    measure *= total_length(acc) / kTwoPi;
  }
  return measure;
}

std::vector<FastEval> system_evals(const RotationSystem& sys) {
  std::vector<FastEval> evals;
  evals.reserve(sys.functions.size());
  for (const auto& f : sys.functions) evals.emplace_back(f);
  return evals;
}

}  // namespace

double joint_measure(const RotationSystem& sys, const ArcSet& A, const Int& x, const Int& y,
                     const Int& z) {
  if (sys.dimension() != A.arcs.size())
    raise("DomainError", "system dimension and arc set dimension differ");
  if (x < 1 || y < 1 || z < 1) raise("DomainError", "x, y, z must be >= 1");
  return joint_measure_impl(system_evals(sys), A, x, y, z);
}

std::optional<RecurrenceWitness> recurrence_search(const RotationSystem& sys, const ArcSet& A,
                                                   const RadoTriple& triple, double eps,
                                                   long k_max, long m_max,
                                                   const std::optional<GridRestriction>& grid) {
  if (triple.cls == RadoClass::NotRado) raise("NotRadoTriple", "search needs a Rado triple");
  if (eps <= 0.0) raise("DomainError", "eps must be positive");
  if (sys.dimension() != A.arcs.size())
    raise("DomainError", "system dimension and arc set dimension differ");
  double target = std::pow(arc_measure(A), 4) - eps;
  std::vector<FastEval> evals = system_evals(sys);
  SearchStats stats;
  for (long k = 1; k <= k_max; ++k) {
    for (long m = 1; m <= m_max; ++m) {
      for (long n = 1; n <= m_max; ++n) {
        ++stats.candidates;
        Int mm(m), nn(n);
        if (grid) {
          mm = grid->Q * m + 1;
          nn = grid->Q * n + grid->shift;
        }
        SolutionValue s = solution(triple, Int(k), mm, nn);
        if (!s.positive || !s.distinct) continue;
        ++stats.solutions_seen;
        double jm = joint_measure_impl(evals, A, s.x, s.y, s.z);
        if (jm >= target - 1e-10) return RecurrenceWitness{s.x, s.y, s.z, jm, stats};
      }
    }
  }
  return std::nullopt;
}

namespace {

Int primorial(long K) {
  Int out = 1;
  for (std::uint64_t p : sieve_primes(static_cast<std::uint64_t>(K))) out *= Int(p);
  return out;
}

bool prime_factors_within(const Int& Q, long K) {
  Int rest = Q;
  for (std::uint64_t p : sieve_primes(static_cast<std::uint64_t>(K))) {
    while (rest % Int(p) == 0) rest /= Int(p);
  }
  return rest == 1;
}

}  // namespace

ConcentrationResult concentration_linear(const MultiplicativeFunction& f,
                                         const DirichletCharacter& chi, double t, const Int& Q,
                                         const Int& a, long K, long N, double truncation) {
  if (K < 1 || N < 1) raise("DomainError", "K, N must be >= 1");
  if (Q % primorial(K) != 0)
    raise("HypothesisViolation", "prod_{p<=K} p does not divide Q");
  if (Q % Int(chi.modulus()) != 0) raise("HypothesisViolation", "q does not divide Q");
  if (!prime_factors_within(Q, K))
    raise("HypothesisViolation", "Q has a prime factor above K");
  if (gcd(a, Q) != 1) raise("HypothesisViolation", "(a, Q) != 1");

  std::complex<double> osc = std::exp(f_partial(f, chi, t, static_cast<double>(K),
                                                static_cast<double>(N)));
  std::complex<double> chi_a = chi.value_or_zero(a);
  FastEval fe(f);
  double sum = 0.0;
  for (long n = 1; n <= N; ++n) {
    Int arg = Q * n + a;
    std::complex<double> lhs = fe(arg).value();
    std::complex<double> model =
        chi_a * std::polar(1.0, t * log_int(Q * n)) * osc;
    sum += std::abs(lhs - model);
  }
  ConcentrationResult out;
  out.lhs = sum / static_cast<double>(N);
  out.truncation = truncation;
  out.distance_term =
      distance_to_target(f, chi, t, static_cast<double>(K), truncation);
  out.rhs = out.distance_term + 1.0 / std::sqrt(static_cast<double>(K));
  out.audited_rhs = 10.0 * out.rhs;
  out.pretension_distance = distance_to_target(f, chi, t, 1.0, truncation);
  out.within_audit = out.lhs <= out.audited_rhs;
  return out;
}

ConcentrationResult concentration_quadratic(const MultiplicativeFunction& f,
                                            const DirichletCharacter& chi, double t,
                                            const BinaryQuadraticForm& P, const Int& Q,
                                            const Int& a, const Int& b, long K, long N,
                                            double truncation) {
  if (K < 1 || N < 1) raise("DomainError", "K, N must be >= 1");
  if (!is_irreducible(P)) raise("HypothesisViolation", "P must be irreducible");
  if (!prime_factors_within(Q, K))
    raise("HypothesisViolation", "Q has a prime factor above K");
  Int pab = P(a, b);
  if (pab == 0) raise("HypothesisViolation", "P(a, b) = 0");
  Int c = gcd(abs(pab), Q);
  Int Qc = Q / c;
  if (Qc % Int(chi.modulus()) != 0) raise("HypothesisViolation", "q does not divide Q/c");
  if (Qc % primorial(K) != 0)
    raise("HypothesisViolation", "prod_{p<=K} p does not divide Q/c");
  double dist = distance_to_target(f, chi, t, static_cast<double>(K), truncation);
  if (dist > 1.0)
    raise("HypothesisViolation", "D(f, chi n^it; K, X) > 1");

  std::complex<double> osc = std::exp(g_partial(f, chi, t, P, static_cast<double>(K),
                                                static_cast<double>(N)));
  Int pc_ab = pab / c;
  std::complex<double> chi_pc = chi.value_or_zero(abs(pc_ab));
  double logc = log_int(c);
  double log_q2 = log_int(Q * Q);
  FastEval fe(f);
  double sum = parallel_row_sum(N, [&](long row) {
    long m = row + 1;
    double row_acc = 0.0;
    for (long n = 1; n <= N; ++n) {
      Int value = P(Q * m + a, Q * n + b);
      // P_c on the grid is exactly integral.
      Int pc = value / c;
      std::complex<double> lhs = fe(abs(pc)).value();
      // (P_c(Qm, Qn))^{it} via |Q^2 P(m,n) / c|.
      Int pmn = P(Int(m), Int(n));
      double log_pc_grid = log_q2 + log_int(abs(pmn)) - logc;
      std::complex<double> model = chi_pc * std::polar(1.0, t * log_pc_grid) * osc;
      row_acc += std::abs(lhs - model);
    }
    return row_acc;
  });
  ConcentrationResult out;
  out.lhs = sum / (static_cast<double>(N) * static_cast<double>(N));
  out.truncation = truncation;
  out.distance_term = dist;
  out.rhs = dist + 1.0 / std::sqrt(static_cast<double>(K));
  Int coeff_sum_int = abs(P.alpha) + abs(P.beta) + abs(P.gamma);
  double coeff_sum = mpz_get_d(coeff_sum_int.get_mpz_t());
  out.audited_rhs = 10.0 * (1.0 + coeff_sum) * out.rhs;
  out.pretension_distance = distance_to_target(f, chi, t, 1.0, truncation);
  out.within_audit = out.lhs <= out.audited_rhs;
  return out;
}

FactorCriterionResult factor_criterion(const MultiplicativeFunction& f, FactorKind kind, long r,
                                       long K, long N,
                                       const std::optional<BinaryQuadraticForm>& P,
                                       std::uint64_t family_cap, std::uint64_t seed) {
  if (N < 1) raise("DomainError", "N must be >= 1");
  FolnerSpec spec = [&] {
    switch (kind) {
      case FactorKind::Archimedean:
        return FolnerSpec::phi_r(r);
      case FactorKind::FinSupp:
        return FolnerSpec::phi_rk(r, K);
      case FactorKind::FinSuppP:
        if (!P) raise("DomainError", "FinSuppP needs a form");
        return FolnerSpec::phi_rkp(r, K, *P);
    }
    raise("InternalError", "bad kind");
  }();
  std::vector<FolnerElement> family;
  FactorCriterionResult out;
  if (spec.cardinality_log() <= std::log(static_cast<double>(family_cap))) {
    family = enumerate_folner(spec, family_cap);
  } else {
    family = sample_folner(spec, family_cap, seed);
    out.sampled = true;
  }
  out.family_size = family.size();

  Int QK = kind == FactorKind::Archimedean ? Int(0) : q_L(K);
  FastEval fe(f);
  double worst = 0.0;
  for (const FolnerElement& Q : family) {
    Int shift = kind == FactorKind::Archimedean ? Int(0) : factor_shift(r, K, Q);
    double sum = parallel_row_sum(N, [&](long row) {
      long n = row + 1;
      UnitComplex val;
      if (kind == FactorKind::Archimedean) {
        val = fe.rational(Q.value * n + 1, Q.value * n);
      } else {
        Int num = Q.value * (QK * Q.value * n + shift);
        Int den = QK * Q.value * Q.value * n + 1;
        val = fe.rational(num, den);
      }
      return val.chord_to_one();
    });
    worst = std::max(worst, sum / static_cast<double>(N));
  }
  out.statistic = worst;
  return out;
}

ChuResult chu_check(const FiniteProbSpace& space) {
  std::size_t n = space.weights.size();
  if (space.F.size() != n) raise("DomainError", "weights and F must have equal length");
  double wsum = 0.0;
  for (double w : space.weights) {
    if (w < 0.0) raise("DomainError", "weights must be nonnegative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) raise("DomainError", "weights must sum to 1");
  for (double v : space.F)
    if (v < 0.0) raise("DomainError", "F must be nonnegative");

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += space.weights[i] * space.F[i];

  // Conditional expectations per partition, atomwise.
  std::vector<std::vector<double>> cond(space.partitions.size(), std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < space.partitions.size(); ++k) {
    const auto& cells = space.partitions[k];
    if (cells.size() != n) raise("DomainError", "partition size mismatch");
    int max_cell = 0;
    for (int c : cells) max_cell = std::max(max_cell, c);
    std::vector<double> cw(max_cell + 1, 0.0), cf(max_cell + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      cw[cells[i]] += space.weights[i];
      cf[cells[i]] += space.weights[i] * space.F[i];
    }
    for (std::size_t i = 0; i < n; ++i)
      cond[k][i] = cw[cells[i]] > 0.0 ? cf[cells[i]] / cw[cells[i]] : 0.0;
  }

  double lhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double term = space.weights[i] * space.F[i];
    for (std::size_t k = 0; k < space.partitions.size(); ++k) term *= cond[k][i];
    lhs += term;
  }
  double rhs = std::pow(mean, static_cast<double>(space.partitions.size() + 1));
  bool equality = std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs));
  return ChuResult{lhs, rhs, lhs >= rhs - 1e-10, equality};
}

BilinearResult bilinear_defect(const std::vector<UnitComplex>& values, const UnitComplex& v_N,
                               long l1, long l2, long N) {
  if (l1 == 0 && l2 == 0) raise("BothZero", "l1 and l2 must not both vanish");
  if (N < 1) raise("DomainError", "N must be >= 1");
  long reach = (std::abs(l1) + std::abs(l2)) * N;
  if (static_cast<long>(values.size()) <= std::max(reach, N))
    raise("DomainError", "values must cover indices up to (|l1|+|l2|) N");
  auto at = [&](long k) -> const UnitComplex& { return values[static_cast<std::size_t>(std::abs(k))]; };

  BilinearResult out;
  double single = 0.0;
  for (long n = 1; n <= N; ++n) single += at(n).chord_to(v_N);
  single /= static_cast<double>(N);

  double dbl = 0.0;
  for (long m = 1; m <= N; ++m)
    for (long n = 1; n <= N; ++n) dbl += at(l1 * m + l2 * n).chord_to(v_N);
  dbl /= static_cast<double>(N) * static_cast<double>(N);

  out.single_average = single;
  out.double_average = dbl;
  out.ratio = single > 0.0 ? dbl / single : 0.0;
  double bound = 4.0 * static_cast<double>(std::abs(l1) + std::abs(l2)) * single + 1e-9;
  out.bound_holds = dbl <= bound;
  return out;
}

}  // namespace pretlab
