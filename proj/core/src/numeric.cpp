#include "pretlab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "pretlab/error.hpp"

namespace pretlab {

double log_int(const Int& n) {
  if (n <= 0) raise("DomainError", "log_int requires n > 0");
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(d) + static_cast<double>(exp) * std::log(2.0);
}

Int isqrt(const Int& n) {
  if (n < 0) raise("DomainError", "isqrt of negative value");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_perfect_square(const Int& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

Int pow_int(const Int& base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Int mod_floor(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int Factorization::value() const {
  Int v = 1;
  for (const auto& f : factors) v *= pow_int(f.prime, f.exponent);
  return v;
}

unsigned long Factorization::exponent_of(const Int& p) const {
  for (const auto& f : factors)
    if (f.prime == p) return f.exponent;
  return 0;
}

Factorization& Factorization::multiply(const Int& p, unsigned long e) {
  if (e == 0) return *this;
  auto it = std::lower_bound(factors.begin(), factors.end(), p,
                             [](const PrimePower& f, const Int& q) { return f.prime < q; });
  if (it != factors.end() && it->prime == p)
    it->exponent += e;
  else
    factors.insert(it, PrimePower{p, e});
  return *this;
}

std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    if (i * i > limit) break;
  }
  // Finish collecting the remaining primes above sqrt(limit).
  for (std::uint64_t i = primes.empty() ? 2 : primes.back() + 1; i <= limit; ++i)
    if (!composite[i]) primes.push_back(i);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

namespace {

// Smallest-prime-factor table for fast factorization of small n.
constexpr std::uint32_t kSpfLimit = 1u << 21;  // ~2M
std::vector<std::uint32_t>& spf_table() {
  static std::vector<std::uint32_t> table = [] {
    std::vector<std::uint32_t> t(kSpfLimit, 0);
    for (std::uint32_t i = 2; i < kSpfLimit; ++i) {
      if (t[i] == 0) {
        for (std::uint64_t j = i; j < kSpfLimit; j += i)
          if (t[j] == 0) t[j] = i;
      }
    }
    return t;
  }();
  return table;
}

const std::vector<std::uint64_t>& trial_primes() {
  static std::vector<std::uint64_t> primes = sieve_primes(1'000'000);
  return primes;
}

Int pollard_rho(const Int& n) {
  // Brent-style rho; n odd composite, no factor below the trial bound.
  for (unsigned long c = 1;; ++c) {
    Int x = 2, y = 2, d = 1;
    auto step = [&](Int v) { return mod_floor(v * v + c, n); };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      d = gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factorize_into(Int n, Factorization& out) {
  if (n == 1) return;
  if (n < Int(static_cast<unsigned long>(kSpfLimit)) && n.fits_ulong_p()) {
    unsigned long v = n.get_ui();
    const auto& spf = spf_table();
    while (v > 1) {
      std::uint32_t p = spf[v];
      unsigned long e = 0;
      while (v % p == 0) {
        v /= p;
        ++e;
      }
      out.multiply(Int(p), e);
    }
    return;
  }
  for (std::uint64_t p : trial_primes()) {
    if (Int(p) * Int(p) > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      unsigned long e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        n /= static_cast<unsigned long>(p);
        ++e;
      }
      out.multiply(Int(p), e);
      if (n == 1) return;
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    out.multiply(n, 1);
    return;
  }
  Int d = pollard_rho(n);
  factorize_into(d, out);
  factorize_into(n / d, out);
}

}  // namespace

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

Factorization factorize(const Int& n) {
  if (n == 0) raise("DomainError", "factorize(0) is undefined");
  if (n < 0) raise("DomainError", "factorize requires n >= 1");
  // Desk-scale values carry their factorizations by construction; general
  // factoring stops at ~19 digits.
  if (mpz_sizeinbase(n.get_mpz_t(), 10) > 20)
    raise("TooLarge", "refusing to factor a " +
                          std::to_string(mpz_sizeinbase(n.get_mpz_t(), 10)) +
                          "-digit integer; supply a factorization");
  Factorization f;
  factorize_into(n, f);
  std::sort(f.factors.begin(), f.factors.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  return f;
}

unsigned long valuation(const Int& p, const Int& a) {
  if (!is_prime(p)) raise("NotPrime", "valuation requires a prime p");
  if (a < 1) raise("DomainError", "valuation requires a >= 1");
  Int r;
  return mpz_remove(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
}

Congruence crt_solve(const std::vector<Congruence>& constraints) {
  if (constraints.empty()) raise("DomainError", "crt_solve needs at least one congruence");
  Int r = 0, m = 1;
  for (const auto& c : constraints) {
    if (c.modulus < 1) raise("DomainError", "crt modulus must be >= 1");
    Int r2 = mod_floor(c.residue, c.modulus);
    Int g = gcd(m, c.modulus);
    if (mod_floor(r - r2, g) != 0)
      raise("IncompatibleCongruences", "residues " + r.get_str() + " mod " + m.get_str() +
                                           " and " + r2.get_str() + " mod " +
                                           c.modulus.get_str() + " conflict");
    Int l = lcm(m, c.modulus);
    // r + m*t = r2 (mod modulus)  =>  t = (r2 - r)/g * inv(m/g) (mod modulus/g)
    Int m2 = c.modulus / g;
    if (m2 > 1) {
      Int t = mod_floor((r2 - r) / g * mod_inverse(mod_floor(m / g, m2), m2), m2);
      r += m * t;
    }
    m = l;
    r = mod_floor(r, m);
  }
  return {r, m};
}

Int mod_inverse(const Int& a, const Int& m) {
  if (m < 2) raise("DomainError", "mod_inverse requires modulus >= 2");
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    raise("NotInvertible", a.get_str() + " has no inverse mod " + m.get_str());
  return r;
}

Int hensel_lift_quadratic(const Int& c2, const Int& c1, const Int& c0, const Int& p,
                          unsigned long theta, const Int& z) {
  if (!is_prime(p)) raise("NotPrime", "hensel lift requires a prime modulus");
  auto poly = [&](const Int& x) -> Int { return c2 * x * x + c1 * x + c0; };
  Int z0 = mod_floor(z, p);
  Int target = pow_int(p, theta);
  if (mod_floor(poly(z0) - target, p) != 0)
    raise("NotARoot", "z is not a root of the shifted polynomial mod p");
  Int deriv = mod_floor(2 * c2 * z0 + c1, p);
  if (deriv == 0) raise("NotSimpleRoot", "derivative vanishes mod p");
  Int inv = mod_inverse(deriv, p);
  // Linear lifting: zeta_k is a root of poly(x) - p^theta mod p^(k+1).
  Int zeta = z0;
  Int pk = p;  // p^(k)
  for (unsigned long k = 1; k <= theta; ++k) {
    Int modulus = pk * p;  // p^(k+1)
    Int g = mod_floor(poly(zeta) - target, modulus);
    // g is divisible by p^k; correct zeta by t*p^k with t = -(g/p^k)*inv mod p.
    Int t = mod_floor(-(g / pk) * inv, p);
    zeta = mod_floor(zeta + t * pk, modulus);
    pk = modulus;
  }
  return zeta;
}

}  // namespace pretlab
