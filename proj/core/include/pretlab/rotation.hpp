#pragma once

#include <optional>
#include <vector>

#include "pretlab/equations.hpp"
#include "pretlab/folner.hpp"
#include "pretlab/gridwitness.hpp"
#include "pretlab/multfun.hpp"

namespace pretlab {

// Product rotation action on (S^1)^s: T_n multiplies coordinate j by f_j(n).
struct RotationSystem {
  std::vector<MultiplicativeFunction> functions;
  std::size_t dimension() const { return functions.size(); }
};

struct Arc {
  double center = 0.0;
  double half_width = 1.0;  // in (0, pi]
};

struct ArcSet {
  std::vector<Arc> arcs;  // one per coordinate
};

ArcSet make_arc_set(const std::vector<Arc>& arcs);  // validates widths

// Haar measure of the product arc set.
double arc_measure(const ArcSet& A);

// mu(A  intersect  T_x^-1 A  intersect  T_y^-1 A  intersect  T_z^-1 A),
// exact circular interval arithmetic per coordinate.
double joint_measure(const RotationSystem& sys, const ArcSet& A, const Int& x, const Int& y,
                     const Int& z);

struct RecurrenceWitness {
  Int x, y, z;
  double measure = 0.0;
  SearchStats stats;
};

// Optional grid restriction: (m, n) -> (Q m + 1, Q n + shift).
struct GridRestriction {
  Int Q;
  Int shift;
};

// Search parametrized solutions for distinct (x, y, z) with
// joint_measure >= arc_measure(A)^4 - eps (compared at 1e-10 tolerance).
std::optional<RecurrenceWitness> recurrence_search(const RotationSystem& sys, const ArcSet& A,
                                                   const RadoTriple& triple, double eps,
                                                   long k_max, long m_max,
                                                   const std::optional<GridRestriction>& grid =
                                                       std::nullopt);

struct ConcentrationResult {
  double lhs = 0.0;             // empirical average of the concentration error
  double distance_term = 0.0;   // D(f, chi n^it; K, X), truncated
  double rhs = 0.0;             // distance_term + K^{-1/2}
  double audited_rhs = 0.0;     // audit constant * rhs
  double truncation = 0.0;      // the X used for the distance tail
  // D(f, chi n^it; 1, X): large values flag a mistaken pretension target.
  double pretension_distance = 0.0;
  bool within_audit = false;
};

// Prop-2.5-style linear concentration experiment:
//   E_{n<=N} | f(Qn+a) - chi(a) (Qn)^{it} exp(F_N(f,K)) |.
// Hypotheses (prod_{p<=K} p | Q, q | Q, prime factors of Q in [1,K],
// (a, Q) = 1) are enforced; violations raise HypothesisViolation naming the
// failed hypothesis. Audit constant 10.
ConcentrationResult concentration_linear(const MultiplicativeFunction& f,
                                         const DirichletCharacter& chi, double t, const Int& Q,
                                         const Int& a, long K, long N, double truncation = 1e5);

// Prop-2.6-style quadratic concentration experiment over [N]^2 with
// c = (P(a,b), Q) and P_c = P/c. Audit constant 10 (1 + sum |coefficients|).
ConcentrationResult concentration_quadratic(const MultiplicativeFunction& f,
                                            const DirichletCharacter& chi, double t,
                                            const BinaryQuadraticForm& P, const Int& Q,
                                            const Int& a, const Int& b, long K, long N,
                                            double truncation = 1e5);

enum class FactorKind { Archimedean, FinSupp, FinSuppP };

struct FactorCriterionResult {
  double statistic = 0.0;       // max over Q of E_{n<=N} |...|
  std::uint64_t family_size = 0;
  bool sampled = false;
};

// Finite-stage factor-membership statistic for rank-one rotations, where
// ||T_r F - F|| = |f(r) - 1|:
//  Archimedean:  max_{Q in Phi_r}     E_n |f((Qn+1)/(Qn)) - 1|
//  FinSupp:      max_{Q in Phi_{r,K}} E_n |f(Q(Q_K Q n + v)/(Q_K Q^2 n + 1)) - 1|
//  FinSuppP(P):  same over Phi_{r,K,P} with the shift u.
FactorCriterionResult factor_criterion(const MultiplicativeFunction& f, FactorKind kind, long r,
                                       long K, long N,
                                       const std::optional<BinaryQuadraticForm>& P = std::nullopt,
                                       std::uint64_t family_cap = 64, std::uint64_t seed = 1);

struct FiniteProbSpace {
  std::vector<double> weights;            // nonnegative, sum 1 (1e-12)
  std::vector<double> F;                  // nonnegative
  std::vector<std::vector<int>> partitions;  // each: cell id per atom
};

struct ChuResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;     // lhs >= rhs - 1e-10
  bool equality = false;  // |lhs - rhs| <= 1e-12 relative
};

// Chu inequality: int F * prod_i E(F | X_i) dmu >= (int F dmu)^(l+1).
ChuResult chu_check(const FiniteProbSpace& space);

struct BilinearResult {
  double single_average = 0.0;  // E_{n<=N} |v(n) - v_N|
  double double_average = 0.0;  // E_{m,n<=N} |v(l1 m + l2 n) - v_N|
  double ratio = 0.0;           // double / single (0 when single = 0)
  bool bound_holds = false;     // double <= 4(|l1|+|l2|) single + 1e-9
};

// values[k] is v(k) for k >= 0, extended evenly to negative indices; needs
// size > (|l1|+|l2|) N. Throws BothZero when l1 = l2 = 0.
BilinearResult bilinear_defect(const std::vector<UnitComplex>& values, const UnitComplex& v_N,
                               long l1, long l2, long N);

}  // namespace pretlab
