#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pretlab {

// Arbitrary-precision integer. Values routinely exceed 10^1000 in the
// grid-witness arithmetic, so fixed-width types are not an option.
using Int = mpz_class;

inline Int int_from(long v) { return Int(v); }
inline Int int_from_string(const std::string& s) { return Int(s); }

// Natural logarithm of a positive Int, accurate to full double precision at
// any size (mantissa + exponent, no overflow).
double log_int(const Int& n);

// floor(sqrt(n)) for n >= 0.
Int isqrt(const Int& n);
bool is_perfect_square(const Int& n);

Int pow_int(const Int& base, unsigned long exp);
Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

// Canonical representative of a mod m in [0, m), m >= 1.
Int mod_floor(const Int& a, const Int& m);

struct PrimePower {
  Int prime;
  unsigned long exponent = 0;
  bool operator==(const PrimePower&) const = default;
};

// Sorted prime-power decomposition; empty for 1.
struct Factorization {
  std::vector<PrimePower> factors;

  Int value() const;
  bool empty() const { return factors.empty(); }
  unsigned long exponent_of(const Int& p) const;
  Factorization& multiply(const Int& p, unsigned long e);
};

// Primes in [2, limit], ascending.
std::vector<std::uint64_t> sieve_primes(std::uint64_t limit);

bool is_prime(const Int& n);

// Factorization of n >= 1; rejects n = 0. Trial division backed by a
// smallest-prime-factor table for small n, Miller-Rabin + Pollard rho above.
Factorization factorize(const Int& n);

// theta_p(a): exponent of the exact power of p dividing a (a >= 1, p prime).
unsigned long valuation(const Int& p, const Int& a);

struct Congruence {
  Int residue;
  Int modulus;
};

// General CRT over possibly non-coprime moduli via pairwise merge; throws
// IncompatibleCongruences on conflict. Returns minimal residue and lcm.
Congruence crt_solve(const std::vector<Congruence>& constraints);

// Inverse of a mod m (m >= 2); throws NotInvertible when gcd(a, m) != 1.
Int mod_inverse(const Int& a, const Int& m);

// Hensel lift for the quadratic polynomial g(x) = c2 x^2 + c1 x + c0 - p^theta.
// z must be a simple root of c2 x^2 + c1 x + c0 mod p; returns the unique
// zeta mod p^(theta+1) with zeta = z (mod p) and g(zeta) = 0 (mod p^(theta+1)).
Int hensel_lift_quadratic(const Int& c2, const Int& c1, const Int& c0,
                          const Int& p, unsigned long theta, const Int& z);

}  // namespace pretlab
