#include "pretlab/quadform.hpp"

#include <algorithm>

#include "pretlab/error.hpp"

namespace pretlab {

std::string BinaryQuadraticForm::str() const {
  return alpha.get_str() + "*m^2 + " + beta.get_str() + "*m*n + " + gamma.get_str() + "*n^2";
}

Int discriminant(const BinaryQuadraticForm& P) { return P.beta * P.beta - 4 * P.alpha * P.gamma; }

bool is_irreducible(const BinaryQuadraticForm& P) {
  if (P.is_zero()) raise("DomainError", "form is identically zero");
  Int d = discriminant(P);
  if (d < 0) return true;
  return !is_perfect_square(d);
}

unsigned long omega(const BinaryQuadraticForm& P, const Int& r) {
  if (r < 1) raise("DomainError", "omega requires r >= 1");
  if (r.fits_slong_p() && P.alpha.fits_slong_p() && P.beta.fits_slong_p() &&
      P.gamma.fits_slong_p()) {
    long rr = r.get_si();
    if (rr <= (1L << 31)) {
      auto residue = [rr](long v) { return ((v % rr) + rr) % rr; };
      long a = residue(P.alpha.get_si());
      long b = residue(P.beta.get_si());
      long g = residue(P.gamma.get_si());
      unsigned long count = 0;
      for (long x = 0; x < rr; ++x) {
        __int128 val = static_cast<__int128>(g) * x % rr;
        val = (val + b) * x % rr;
        if ((val + a) % rr == 0) ++count;
      }
      return count;
    }
  }
  unsigned long count = 0;
  for (Int x = 0; x < r; ++x)
    if (mod_floor(P.at_one(x), r) == 0) ++count;
  return count;
}

std::vector<Int> roots_mod_prime_power(const BinaryQuadraticForm& P, const Int& p,
                                       unsigned long k) {
  if (!is_prime(p)) raise("NotPrime", "modulus base must be prime");
  if (k < 1) raise("DomainError", "exponent must be >= 1");
  Int pk = pow_int(p, k);
  std::vector<Int> roots;
  if (pk <= 1'000'000) {
    for (Int x = 0; x < pk; ++x)
      if (mod_floor(P.at_one(x), pk) == 0) roots.push_back(x);
    return roots;
  }
  // Large modulus: iterate Hensel lifting from the simple roots mod p.
  for (Int z = 0; z < p; ++z) {
    if (mod_floor(P.at_one(z), p) != 0) continue;
    Int deriv = mod_floor(P.beta + 2 * P.gamma * z, p);
    if (deriv == 0)
      raise("LargeModulusNonSimple",
            "root " + z.get_str() + " mod " + p.get_str() + " is not simple");
    Int inv = mod_inverse(deriv, p);
    Int zeta = z;
    Int pj = p;
    for (unsigned long j = 1; j < k; ++j) {
      Int modulus = pj * p;
      Int g = mod_floor(P.at_one(zeta), modulus);
      Int t = mod_floor(-(g / pj) * inv, p);
      zeta = mod_floor(zeta + t * pj, modulus);
      pj = modulus;
    }
    roots.push_back(zeta);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double omega_partial_sum(const BinaryQuadraticForm& P, std::uint64_t X) {
  if (!is_irreducible(P)) raise("ReducibleForm", "omega_partial_sum requires an irreducible form");
  double sum = 0.0;
  for (std::uint64_t p : sieve_primes(X))
    sum += static_cast<double>(omega(P, Int(p))) / static_cast<double>(p);
  return sum;
}

ReducibleSplit split_reducible(const BinaryQuadraticForm& P) {
  if (P.alpha != 1) raise("NotReducible", "split requires leading coefficient 1");
  Int d = discriminant(P);
  if (d <= 0 || !is_perfect_square(d))
    raise("NotReducible", "discriminant is not a positive perfect square");
  Int s = isqrt(d);
  // m^2 + beta m n + gamma n^2 = (m + l1 n)(m + l2 n) with l1 + l2 = beta,
  // l1 l2 = gamma; roots of x^2 - beta x + gamma are (beta +- s)/2.
  if (mod_floor(P.beta + s, 2) != 0)
    raise("NotReducible", "split is not integral");
  Int l1 = (P.beta - s) / 2;
  Int l2 = (P.beta + s) / 2;
  if (l1 == l2) raise("NotReducible", "double root, distinct factors required");
  return ReducibleSplit{l1, l2};
}

Int hensel_lift(const BinaryQuadraticForm& P, const Int& p, unsigned long theta, const Int& z) {
  return hensel_lift_quadratic(P.gamma, P.beta, P.alpha, p, theta, z);
}

}  // namespace pretlab
