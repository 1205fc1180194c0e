#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pretlab/folner.hpp"
#include "pretlab/quadform.hpp"

namespace pretlab {

// The five constructive cases of the main recurrence theorem, split by the
// Rado class and the reducibility of the quadratic forms.
enum class WitnessCase {
  AcP2Reducible,      // a = c, ab a perfect square
  AcP2Irreducible,    // a = c, ab not a perfect square
  ApbAllIrreducible,  // a + b = c, P2 and P3 irreducible
  ApbP2Reducible,     // a + b = c, P2 reducible, P3 irreducible
  ApbBothReducible,   // a + b = c, P2 and P3 reducible
};

std::string witness_case_name(WitnessCase c);
WitnessCase witness_case_from_name(const std::string& name);

struct CaseTag {
  WitnessCase kind;
  long a, b, c;
};

// Validates the Rado class and reducibility pattern; throws on mismatch.
CaseTag make_case_tag(WitnessCase kind, long a, long b, long c);
// Infers the case from the triple alone.
CaseTag infer_case_tag(long a, long b, long c);

// The three forms of the case in family order (P1, P2, P3).
struct CaseForms {
  BinaryQuadraticForm P1, P2, P3;
};
CaseForms case_forms(const CaseTag& tag);

// kappa / gamma / lambda parameters fixed by the case, chosen canonically
// (smallest admissible kappa; splits ordered ascending).
struct CaseParameters {
  Int kappa;                               // AC cases
  Int gamma;                               // AC reducible: sqrt(ab)
  std::optional<ReducibleSplit> p2_split;  // APB reducible cases
  std::optional<ReducibleSplit> p3_split;  // APB both-reducible
};
CaseParameters choose_parameters(const CaseTag& tag);

// Largest prime dividing the case's excluded constant, merged with the
// omega-exceptional primes (primes dividing 2*discriminant) of the case's
// forms. Any r (or s, for a+b=c cases) strictly greater is admissible.
Int admissibility_threshold(const CaseTag& tag);

// The Folner families the case's lemma draws (Q1, Q2, Q3) from.
struct CaseFamilies {
  FolnerSpec f1, f2, f3;
};
CaseFamilies case_families(const CaseTag& tag, long s, long r, long K, long L);

struct GridParams {
  CaseTag tag;
  double delta = 1.9;
  long s = 0;  // APB cases only; 0 for AC
  long r = 0, K = 0, L = 0;
  FolnerElement Q1, Q2, Q3;
  QDeltaL qdl;
};

// Assembles params, drawing Q_j by enumeration index or by sampling; checks
// ordering, threshold and families.
GridParams make_grid_params(const CaseTag& tag, long s, long r, long K, long L, double delta,
                            const FolnerElement& Q1, const FolnerElement& Q2,
                            const FolnerElement& Q3);

struct WitnessCondition {
  std::string name;
  bool pass = false;
  std::string detail;  // computed gcd / residue certificates
};

struct HenselRecord {
  Int p;
  int j = 0;  // which Q_j's window the prime belongs to
  unsigned long theta = 0;
  Int seed;  // chosen root of P_j(1, x) mod p (smaller of the two)
  Int zeta;
};

struct GridWitness {
  Int v;
  CaseParameters parameters;
  std::vector<HenselRecord> hensel_roots;
  std::vector<WitnessCondition> report;
  bool all_pass() const;
};

// Builds the shift v for the case via the lemma's CRT list, Hensel-lifting a
// seed root at every supported prime, then verifies every condition exactly.
// Throws BelowThreshold / BadOrdering / WrongFamily / HenselFailure.
GridWitness construct_v(const GridParams& params);

// Re-evaluates the case's condition list (exact arithmetic) for an arbitrary
// v; failures are report entries, never exceptions.
std::vector<WitnessCondition> verify_witness(const GridParams& params, const Int& v);

struct CofactorValue {
  int j = 0;
  Int m, n;
  Int value;  // R_j with Q_j * R_j = P_j(Q m + 1, Q n + v) exactly
};

// Exact cofactor extraction; for the AC reducible case R1 and R2 are also
// recomputed from their closed forms and compared. Throws IndexOutOfRange,
// DivisibilityFailure.
CofactorValue cofactor(const GridParams& params, const GridWitness& witness, int j, const Int& m,
                       const Int& n);

// The closed-form cofactors of the AC reducible case.
Int cofactor_closed_form_r1(const GridParams& params, const GridWitness& witness, const Int& m,
                            const Int& n);
Int cofactor_closed_form_r2(const GridParams& params, const GridWitness& witness, const Int& m,
                            const Int& n);

// The small shift used by the factor-membership criteria: v (or u) with
//   v = Q^{-1} (mod p^r) for p <= r,   v = 1 (mod p) for r < p <= K,
// minimal nonnegative; postconditions re-verified exactly.
Int factor_shift(long r, long K, const FolnerElement& Q);

// JSON export/import of a witness record (case, params, v, certificates).
std::string witness_to_json(const GridParams& params, const GridWitness& witness);
// Parses the record and re-verifies all conditions against the embedded v.
std::vector<WitnessCondition> witness_verify_json(const std::string& json_text);

}  // namespace pretlab
