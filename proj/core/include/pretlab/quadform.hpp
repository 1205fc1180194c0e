#pragma once

#include <string>
#include <vector>

#include "pretlab/numeric.hpp"

namespace pretlab {

// Binary quadratic form alpha*m^2 + beta*m*n + gamma*n^2 with integer
// coefficients. Evaluation is exact.
struct BinaryQuadraticForm {
  Int alpha, beta, gamma;

  Int operator()(const Int& m, const Int& n) const {
    return alpha * m * m + beta * m * n + gamma * n * n;
  }
  // P(1, x), the single-variable slice used for root counting.
  Int at_one(const Int& x) const { return alpha + beta * x + gamma * x * x; }

  bool is_zero() const { return alpha == 0 && beta == 0 && gamma == 0; }
  bool operator==(const BinaryQuadraticForm&) const = default;
  std::string str() const;
};

// Discriminant beta^2 - 4*alpha*gamma.
Int discriminant(const BinaryQuadraticForm& P);

// True iff the discriminant is not a perfect square (negative counts as
// not a perfect square).
bool is_irreducible(const BinaryQuadraticForm& P);

// omega_P(r) = #{ n in Z_r : P(1, n) = 0 (mod r) }.
unsigned long omega(const BinaryQuadraticForm& P, const Int& r);

// Residues x mod p^k with P(1, x) = 0 (mod p^k), sorted. Exhaustive scan for
// p^k <= 10^6, Hensel iteration from simple roots mod p above that; throws
// LargeModulusNonSimple when a root mod p is not simple in the large regime.
std::vector<Int> roots_mod_prime_power(const BinaryQuadraticForm& P, const Int& p,
                                       unsigned long k);

// Sum over primes p <= X of omega_P(p)/p; requires P irreducible.
double omega_partial_sum(const BinaryQuadraticForm& P, std::uint64_t X);

// Monic reducible split P = (m + lambda1 n)(m + lambda2 n), lambda1 < lambda2.
struct ReducibleSplit {
  Int lambda1, lambda2;
};

// Requires leading coefficient 1 and a positive perfect-square discriminant;
// throws NotReducible otherwise.
ReducibleSplit split_reducible(const BinaryQuadraticForm& P);

// Hensel lift of a simple root z of P(1,x) mod p to the unique zeta mod
// p^(theta+1) with P(1, zeta) = p^theta (mod p^(theta+1)).
Int hensel_lift(const BinaryQuadraticForm& P, const Int& p, unsigned long theta, const Int& z);

}  // namespace pretlab
