#include <doctest.h>

#include <algorithm>
#include <cstdint>

#include "pretlab/error.hpp"
#include "pretlab/numeric.hpp"
#include "pretlab/unitcomplex.hpp"

using namespace pretlab;

namespace {

// Trial-division oracle, independent of the sieve.
bool is_prime_oracle(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t splitmix(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("sieve_primes basic values") {
  CHECK(sieve_primes(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(sieve_primes(1).empty());
  CHECK(sieve_primes(0).empty());
  CHECK(sieve_primes(2) == std::vector<std::uint64_t>{2});
}

TEST_CASE("sieve agrees with trial division up to 100 and beyond") {
  auto primes = sieve_primes(100);
  CHECK(primes.size() == 25);
  std::vector<std::uint64_t> oracle;
  for (std::uint64_t n = 2; n <= 100; ++n)
    if (is_prime_oracle(n)) oracle.push_back(n);
  CHECK(primes == oracle);

  auto big = sieve_primes(10'000);
  for (std::uint64_t p : big) CHECK(is_prime_oracle(p));
  std::uint64_t count = 0;
  for (std::uint64_t n = 2; n <= 10'000; ++n)
    if (is_prime_oracle(n)) ++count;
  CHECK(big.size() == count);
}

TEST_CASE("factorize examples") {
  CHECK(factorize(1).factors.empty());
  Factorization f12 = factorize(12);
  REQUIRE(f12.factors.size() == 2);
  CHECK(f12.factors[0] == PrimePower{2, 2});
  CHECK(f12.factors[1] == PrimePower{3, 1});
  Factorization f97 = factorize(97);
  REQUIRE(f97.factors.size() == 1);
  CHECK(f97.factors[0] == PrimePower{97, 1});
  CHECK(is_prime_oracle(97));
  CHECK_THROWS_WITH_AS(factorize(0), doctest::Contains("factorize"), Error);
}

TEST_CASE("factorize reconstructs n exactly for all n <= 10^6") {
  for (long n = 1; n <= 1'000'000; ++n) {
    Factorization f = factorize(n);
    REQUIRE(f.value() == n);
  }
}

TEST_CASE("factorize keeps primes strictly increasing") {
  std::uint64_t state = 99;
  for (int i = 0; i < 200; ++i) {
    Int n = Int(static_cast<unsigned long>(splitmix(state) % 1'000'000'000ULL + 1));
    Factorization f = factorize(n);
    for (std::size_t k = 1; k < f.factors.size(); ++k)
      CHECK(f.factors[k - 1].prime < f.factors[k].prime);
    CHECK(f.value() == n);
  }
}

TEST_CASE("valuation") {
  CHECK(valuation(2, 12) == 2);
  CHECK(valuation(5, 12) == 0);
  CHECK(valuation(3, 27) == 3);
  CHECK_THROWS_AS(valuation(4, 12), Error);
  // repeated-division oracle
  std::uint64_t state = 7;
  for (int i = 0; i < 100; ++i) {
    Int p(std::vector<long>{2, 3, 5, 7, 11}[splitmix(state) % 5]);
    Int a = Int(static_cast<unsigned long>(splitmix(state) % 100'000 + 1));
    unsigned long got = valuation(p, a);
    unsigned long want = 0;
    Int r = a;
    while (r % p == 0) {
      r /= p;
      ++want;
    }
    CHECK(got == want);
  }
}

TEST_CASE("crt_solve examples") {
  Congruence r = crt_solve({{1, 3}, {2, 5}});
  CHECK(r.residue == 7);
  CHECK(r.modulus == 15);
  r = crt_solve({{0, 4}, {2, 6}});
  CHECK(r.residue == 8);
  CHECK(r.modulus == 12);
  CHECK_THROWS_AS(crt_solve({{1, 2}, {0, 2}}), Error);
  try {
    crt_solve({{1, 2}, {0, 2}});
  } catch (const Error& e) {
    CHECK(e.name() == "IncompatibleCongruences");
  }
}

TEST_CASE("crt_solve agrees with exhaustive scan") {
  std::uint64_t state = 2024;
  int solved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Congruence> cs;
    Int lcm_all = 1;
    int k = 2 + static_cast<int>(splitmix(state) % 3);
    for (int i = 0; i < k; ++i) {
      Int mod = Int(static_cast<unsigned long>(splitmix(state) % 30 + 1));
      Int res = Int(static_cast<unsigned long>(splitmix(state) % 30));
      cs.push_back({res, mod});
      lcm_all = lcm(lcm_all, mod);
    }
    if (lcm_all > 100'000) continue;
    // oracle: first x in [0, lcm) matching everything
    Int expect = -1;
    for (Int x = 0; x < lcm_all; ++x) {
      bool ok = true;
      for (const auto& c : cs)
        if (mod_floor(x - c.residue, c.modulus) != 0) ok = false;
      if (ok) {
        expect = x;
        break;
      }
    }
    if (expect < 0) {
      CHECK_THROWS_AS(crt_solve(cs), Error);
    } else {
      Congruence got = crt_solve(cs);
      CHECK(got.residue == expect);
      CHECK(got.modulus == lcm_all);
      ++solved;
    }
  }
  CHECK(solved > 50);
}

TEST_CASE("mod_inverse") {
  CHECK(mod_inverse(3, 7) == 5);
  // scan oracle for (3, 7)
  for (Int x = 1; x < 7; ++x)
    if (mod_floor(3 * x, 7) == 1) CHECK(x == mod_inverse(3, 7));
  CHECK(mod_inverse(1, 97) == 1);
  try {
    mod_inverse(2, 4);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.name() == "NotInvertible");
  }
}

TEST_CASE("hensel_lift_quadratic on m^2+n^2") {
  // g(x) = x^2 + 1 - p^theta as (c2, c1, c0) = (1, 0, 1)
  CHECK(hensel_lift_quadratic(1, 0, 1, 5, 1, 2) == 2);
  CHECK(hensel_lift_quadratic(1, 0, 1, 5, 1, 3) == 23);
  CHECK(hensel_lift_quadratic(1, 0, 1, 13, 1, 5) == 122);
  // scan oracles mod 25 / 169
  for (Int z = 0; z < 25; ++z)
    if (mod_floor(z * z + 1 - 5, 25) == 0 && mod_floor(z - 2, 5) == 0) CHECK(z == 2);
  for (Int z = 0; z < 169; ++z)
    if (mod_floor(z * z + 1 - 13, 169) == 0 && mod_floor(z - 5, 13) == 0) CHECK(z == 122);
}

TEST_CASE("hensel_lift rejects bad inputs") {
  try {
    hensel_lift_quadratic(1, 0, 1, 5, 1, 1);  // 1 is not a root of x^2+1 mod 5
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.name() == "NotARoot");
  }
  // double root: (x-1)^2 = x^2 - 2x + 1 mod 3, z = 1
  try {
    hensel_lift_quadratic(1, -2, 1, 3, 1, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.name() == "NotSimpleRoot");
  }
}

TEST_CASE("hensel certificates on random admissible inputs") {
  std::uint64_t state = 555;
  auto primes = sieve_primes(2000);
  int done = 0;
  while (done < 500) {
    Int c2 = Int(splitmix(state) % 9) - 4;
    Int c1 = Int(splitmix(state) % 9) - 4;
    Int c0 = Int(splitmix(state) % 9) - 4;
    if (c2 == 0) continue;
    Int p(static_cast<long>(primes[splitmix(state) % primes.size()]));
    if (p < 3) continue;
    unsigned long theta = 1 + splitmix(state) % 5;
    // find a simple root mod p
    Int root = -1;
    for (Int z = 0; z < p; ++z) {
      if (mod_floor(c2 * z * z + c1 * z + c0, p) == 0 &&
          mod_floor(2 * c2 * z + c1, p) != 0) {
        root = z;
        break;
      }
    }
    if (root < 0) continue;
    Int zeta = hensel_lift_quadratic(c2, c1, c0, p, theta, root);
    Int mod = pow_int(p, theta + 1);
    // independent big-integer re-check
    CHECK(mod_floor(c2 * zeta * zeta + c1 * zeta + c0 - pow_int(p, theta), mod) == 0);
    CHECK(mod_floor(zeta - root, p) == 0);
    CHECK(zeta >= 0);
    CHECK(zeta < mod);
    ++done;
  }
}

TEST_CASE("unit_power") {
  CHECK(unit_power(1, 0.37).approx_one());
  CHECK(unit_power(12345, 0.0).approx_one());
  UnitComplex v = unit_power(2, std::numbers::pi / std::log(2.0));
  CHECK(v.value().real() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(v.value().imag()) < 1e-9);
}

TEST_CASE("UnitComplex algebra") {
  std::uint64_t state = 31;
  for (int i = 0; i < 1000; ++i) {
    double a = static_cast<double>(splitmix(state) % 100000) / 100000.0 * kTwoPi;
    double b = static_cast<double>(splitmix(state) % 100000) / 100000.0 * kTwoPi;
    double c = static_cast<double>(splitmix(state) % 100000) / 100000.0 * kTwoPi;
    UnitComplex u(a), v(b), w(c);
    CHECK(((u * v) * w).chord_to(u * (v * w)) <= 1e-12);
    CHECK((u * u.conj()).chord_to_one() <= 1e-12);
  }
  CHECK(UnitComplex(0.0).angle() == 0.0);
  CHECK(UnitComplex(kTwoPi).angle() == 0.0);
  CHECK(UnitComplex(-1.0).angle() == doctest::Approx(kTwoPi - 1.0));
}

TEST_CASE("factorize refuses out-of-scope sizes") {
  Int huge = pow_int(Int(10), 40) + 1;
  try {
    factorize(huge);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.name() == "TooLarge");
  }
}

TEST_CASE("log_int matches double log on representable values") {
  CHECK(log_int(Int(1)) == 0.0);
  CHECK(log_int(Int(1024)) == doctest::Approx(std::log(1024.0)).epsilon(1e-14));
  Int big = pow_int(Int(10), 400);
  CHECK(log_int(big) == doctest::Approx(400.0 * std::log(10.0)).epsilon(1e-12));
}
