#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pretlab/quadform.hpp"
#include "pretlab/unitcomplex.hpp"

namespace pretlab {

// Dirichlet character mod q with exact root-of-unity values: table[n mod q]
// holds k such that chi(n) = e(k/order), or -1 where chi vanishes.
class DirichletCharacter {
 public:
  DirichletCharacter() = default;
  DirichletCharacter(long q, long order, std::vector<long> table, long index = -1)
      : q_(q), order_(order), table_(std::move(table)), index_(index) {}

  long modulus() const { return q_; }
  long order() const { return order_; }
  long index() const { return index_; }
  const std::vector<long>& table() const { return table_; }

  bool is_zero_at(const Int& n) const { return table_[residue(n)] < 0; }
  // Value at n; requires gcd(n, q) = 1.
  UnitComplex value(const Int& n) const;
  std::complex<double> value_or_zero(const Int& n) const;
  bool is_principal() const;

  DirichletCharacter conjugate() const;
  DirichletCharacter power(long k) const;

  bool operator==(const DirichletCharacter& o) const {
    return q_ == o.q_ && same_values(o);
  }

 private:
  std::size_t residue(const Int& n) const { return mod_floor(n, Int(q_)).get_ui(); }
  bool same_values(const DirichletCharacter& o) const;

  long q_ = 1;
  long order_ = 1;
  std::vector<long> table_{0};
  long index_ = 0;
};

// All phi(q) characters mod q, deterministic order; index 0 is principal.
const std::vector<DirichletCharacter>& characters_mod(long q);

// chi1 * chi2 as a character mod lcm(q1, q2).
DirichletCharacter product_character(const DirichletCharacter& a, const DirichletCharacter& b);

// The smallest period of the value sequence chi(1), chi(2), ... on N,
// zeros included (this is the notion of conductor used throughout).
long conductor(const DirichletCharacter& chi);

// The classical conductor: the smallest d | q such that chi is induced by a
// character mod d. Equals q exactly when chi is primitive.
long classical_conductor(const DirichletCharacter& chi);

enum class PrimeRule {
  // p -> e(1 / log log p) for p >= 3; the rule maps 2 to 1 (log log 2 < 0,
  // outside the rule's domain).
  EInvLogLog,
};

UnitComplex prime_rule_value(PrimeRule rule, const Int& p);
std::string prime_rule_name(PrimeRule rule);
PrimeRule prime_rule_from_name(const std::string& name);

// S^1-valued completely multiplicative function, described by a small
// expression tree and evaluated via prime factorization (or a fast path for
// pretentious shapes, see canonical_form).
class MFNode;
using MultiplicativeFunction = std::shared_ptr<const MFNode>;

class MFNode {
 public:
  enum class Kind { One, Archimedean, CharacterLift, PrimeFormula, Tweaked, Product, Power, Conjugate };

  Kind kind;
  double t = 0.0;                            // Archimedean
  DirichletCharacter chi;                    // CharacterLift
  std::map<Int, UnitComplex> fill;           // CharacterLift: values at p | q
  PrimeRule rule = PrimeRule::EInvLogLog;    // PrimeFormula
  MultiplicativeFunction base, other;        // Tweaked / Product / Power / Conjugate
  std::map<Int, UnitComplex> overrides;      // Tweaked
  long exponent = 1;                         // Power
};

MultiplicativeFunction mf_one();
MultiplicativeFunction mf_archimedean(double t);
// Throws MissingFill unless fill covers every prime dividing the modulus.
MultiplicativeFunction mf_character_lift(const DirichletCharacter& chi,
                                         const std::map<Int, UnitComplex>& fill);
MultiplicativeFunction mf_prime_formula(PrimeRule rule);
MultiplicativeFunction mf_tweaked(MultiplicativeFunction base,
                                  const std::map<Int, UnitComplex>& overrides);
MultiplicativeFunction mf_product(MultiplicativeFunction f, MultiplicativeFunction g);
MultiplicativeFunction mf_power(MultiplicativeFunction f, long k);
MultiplicativeFunction mf_conjugate(MultiplicativeFunction f);

// f(p) for prime p; never needs a factorization.
UnitComplex eval_at_prime(const MultiplicativeFunction& f, const Int& p);

// f(n) for n >= 1.
UnitComplex eval(const MultiplicativeFunction& f, const Int& n);

// f(num/den) = f(num) * conj(f(den)).
UnitComplex eval_rational(const MultiplicativeFunction& f, const Int& num, const Int& den);

// Pretension shape f(p) = chi(p) p^{it} away from finitely many exceptional
// primes (which always include p | q). Lets eval run on astronomically large
// arguments without factoring them.
struct PretensionForm {
  DirichletCharacter chi;
  double t = 0.0;
  std::map<Int, UnitComplex> exceptional;
};
std::optional<PretensionForm> canonical_form(const MultiplicativeFunction& f);

// Evaluator with the canonical form computed once; safe to share across
// threads once constructed.
class FastEval {
 public:
  explicit FastEval(MultiplicativeFunction f);
  UnitComplex operator()(const Int& n) const;
  UnitComplex rational(const Int& num, const Int& den) const {
    return (*this)(num) * (*this)(den).conj();
  }

 private:
  MultiplicativeFunction f_;
  std::optional<PretensionForm> form_;
};

enum class DescriptorClass {
  Archimedean,
  FiniteSupportLift,
  FiniteSupportLiftForForm,
  DeclaredOscillating,
  Unknown,
};
std::string descriptor_class_name(DescriptorClass c);

// Syntactic classification of the descriptor tree; no asymptotic analysis.
DescriptorClass classify_descriptor(const MultiplicativeFunction& f);

// Pretentious distance D(f, g; A, B) over primes A < p <= B.
double distance(const MultiplicativeFunction& f, const MultiplicativeFunction& g, double A,
                double B);

// D(f, chi * n^{it}; A, B) with the genuine character (zeros at p | q count
// with full weight 1/p).
double distance_to_target(const MultiplicativeFunction& f, const DirichletCharacter& chi,
                          double t, double A, double B);

// F_N(f, L) = sum_{L < p <= N} (1/p) (f(p) conj(chi(p)) p^{-it} - 1).
std::complex<double> f_partial(const MultiplicativeFunction& f, const DirichletCharacter& chi,
                               double t, double L, double N);

// G_{P,N}(f, L): same sum weighted by omega_P(p)/p; requires P irreducible.
std::complex<double> g_partial(const MultiplicativeFunction& f, const DirichletCharacter& chi,
                               double t, const BinaryQuadraticForm& P, double L, double N);

// JSON round-trip for descriptors (characters referenced as modulus+index).
std::string mf_to_json(const MultiplicativeFunction& f);
MultiplicativeFunction mf_from_json(const std::string& json_text);

}  // namespace pretlab
