#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pretlab/multfun.hpp"
#include "pretlab/quadform.hpp"

namespace pretlab {

enum class RadoClass { AC, BC, APlusB, NotRado };
std::string rado_class_name(RadoClass c);

struct RadoTriple {
  long a = 1, b = 1, c = 1;
  RadoClass cls = RadoClass::NotRado;
};

// Def: (a, b, c) is a Rado triple iff a = c, b = c, or a + b = c.
// a = c wins ties with b = c.
RadoTriple classify_rado(long a, long b, long c);

enum class Coordinate { X, Y, Z };

// The three-form family of the triple's class, with the coordinate each form
// parametrizes. Constructing it verifies a X^2 + b Y^2 = c Z^2 symbolically.
struct FormTriple {
  RadoTriple triple;
  BinaryQuadraticForm P1, P2, P3;
  Coordinate coord[3];

  const BinaryQuadraticForm& form_for(Coordinate c) const;
};

FormTriple forms_for(const RadoTriple& triple);  // throws NotRadoTriple

struct SolutionValue {
  Int x, y, z;
  bool positive = false;
  bool distinct = false;
};

// The parametrized solution at (k, m, n); the identity holds exactly as
// signed integers, non-positive coordinates are flagged, not errors.
SolutionValue solution(const RadoTriple& triple, const Int& k, const Int& m, const Int& n);

// Cone slope alpha = max(lin, sqrt(quad)); both tests run exactly on integers:
//   m > alpha n  iff  m > lin * n  and  m^2 > quad * n^2.
struct ConeSlope {
  Int lin = 0;   // rational part (integer in every case used here)
  Int quad = 0;  // alpha includes sqrt(quad)

  bool admits(const Int& m, const Int& n) const {
    return m > lin * n && m * m > quad * n * n;
  }
  double approx() const;
};

struct SDeltaSpec {
  FormTriple forms;
  ConeSlope alpha;
  double delta = 0.5;
};

// The witness-level S_delta cone of the triple's case: 2*sqrt(ab) for the
// a=c family, 2*max{4b, sqrt(2ab)} for the a+b=c family.
SDeltaSpec s_delta_spec_for(const RadoTriple& triple, double delta);

// Membership: exact cone test, then |(P_j(m,n))^i - 1| <= delta for all j.
// Throws NonpositiveFormValue if a form is non-positive inside the cone.
bool s_delta_contains(const SDeltaSpec& spec, const Int& m, const Int& n);

struct DensityResult {
  std::uint64_t count = 0;
  double ratio = 0.0;
};

// Exact count of S_delta over [1,N]^2.
DensityResult s_delta_density(const SDeltaSpec& spec, long N);

// Lattice count of the bare cone {m > alpha n} over [1,N]^2 (the delta = 2
// closed form).
std::uint64_t cone_count(const ConeSlope& alpha, long N);

struct SearchStats {
  std::uint64_t candidates = 0;
  std::uint64_t solutions_seen = 0;  // positive + distinct, before arc tests
};

struct MonoWitness {
  Int x, y, z;
  SearchStats stats;
};

// Arc membership for the coloring: f(n) lies in I_delta = { e(t) : |t| < delta }
// (delta as a fraction of the full circle); boundary hits within 1e-12 are
// rejected.
bool in_arc_I_delta(const UnitComplex& value, double delta_arc);

// Scan parametrized solutions, k <= k_max outer, (m, n) row-major with
// m, n <= m_max; first (x, y, z) with all function values inside I_delta.
std::optional<MonoWitness> monochromatic_search(const RadoTriple& triple,
                                                const std::vector<MultiplicativeFunction>& fs,
                                                double delta_arc, long k_max, long m_max);

// Raw-triple fallback: x, y <= bound row-major, z recovered by integrality.
// Cross-validates the parametrized search (which need not be surjective).
std::optional<MonoWitness> monochromatic_search_raw(const RadoTriple& triple,
                                                    const std::vector<MultiplicativeFunction>& fs,
                                                    double delta_arc, long bound);

}  // namespace pretlab
