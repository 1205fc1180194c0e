#include "pretlab/folner.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>

#include "pretlab/error.hpp"
#include "pretlab/unitcomplex.hpp"

namespace pretlab {

namespace {

constexpr mpfr_prec_t kAnglePrecision = 256;

// splitmix64: platform-stable seeded stream.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t uniform_below(std::uint64_t& state, std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection sampling, unbiased.
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = splitmix64(state);
  } while (v >= limit);
  return v % n;
}

// Angle of ln(n) mod 2pi with directed rounding; f is n's factorization.
AngleInterval log_angle_interval_impl(const Factorization& f) {
  mpfr_t lo, hi, term, two_pi_lo, two_pi_hi;
  mpfr_inits2(kAnglePrecision, lo, hi, term, two_pi_lo, two_pi_hi, nullptr);
  mpfr_set_zero(lo, 1);
  mpfr_set_zero(hi, 1);
  for (const auto& pp : f.factors) {
    mpfr_set_z(term, pp.prime.get_mpz_t(), MPFR_RNDD);
    mpfr_log(term, term, MPFR_RNDD);
    mpfr_mul_ui(term, term, pp.exponent, MPFR_RNDD);
    mpfr_add(lo, lo, term, MPFR_RNDD);
    mpfr_set_z(term, pp.prime.get_mpz_t(), MPFR_RNDU);
    mpfr_log(term, term, MPFR_RNDU);
    mpfr_mul_ui(term, term, pp.exponent, MPFR_RNDU);
    mpfr_add(hi, hi, term, MPFR_RNDU);
  }
  mpfr_const_pi(two_pi_lo, MPFR_RNDD);
  mpfr_mul_ui(two_pi_lo, two_pi_lo, 2, MPFR_RNDD);
  mpfr_const_pi(two_pi_hi, MPFR_RNDU);
  mpfr_mul_ui(two_pi_hi, two_pi_hi, 2, MPFR_RNDU);
  // Reduce by floor(lo / 2pi) turns; the enclosure stays valid because we
  // subtract the same integer multiple from both ends.
  mpfr_t turns, sub;
  mpfr_inits2(kAnglePrecision, turns, sub, nullptr);
  mpfr_div(turns, lo, two_pi_hi, MPFR_RNDD);
  mpfr_floor(turns, turns);
  mpfr_mul(sub, turns, two_pi_hi, MPFR_RNDU);
  mpfr_sub(lo, lo, sub, MPFR_RNDD);
  mpfr_mul(sub, turns, two_pi_lo, MPFR_RNDD);
  mpfr_sub(hi, hi, sub, MPFR_RNDU);
  // One more turn may remain.
  while (mpfr_cmp(lo, two_pi_lo) >= 0) {
    mpfr_sub(lo, lo, two_pi_hi, MPFR_RNDD);
    mpfr_sub(hi, hi, two_pi_lo, MPFR_RNDU);
  }
  if (mpfr_sgn(lo) < 0) mpfr_set_zero(lo, 1);
  AngleInterval out{mpfr_get_d(lo, MPFR_RNDD), mpfr_get_d(hi, MPFR_RNDU)};
  mpfr_clears(lo, hi, term, two_pi_lo, two_pi_hi, turns, sub, nullptr);
  return out;
}

double chord_of_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  return 2.0 * std::abs(std::sin(r / 2.0));
}

}  // namespace

FolnerSpec FolnerSpec::phi_r(long r) {
  if (r < 2) raise("DomainError", "Phi_r requires r >= 2");
  return FolnerSpec{Kind::PhiR, r, 0, std::nullopt};
}

FolnerSpec FolnerSpec::phi_rk(long r, long K) {
  if (r < 2 || K <= r) raise("DomainError", "Phi_{r,K} requires 2 <= r < K");
  return FolnerSpec{Kind::PhiRK, r, K, std::nullopt};
}

FolnerSpec FolnerSpec::phi_rkp(long r, long K, const BinaryQuadraticForm& P) {
  if (r < 2 || K <= r) raise("DomainError", "Phi_{r,K,P} requires 2 <= r < K");
  return FolnerSpec{Kind::PhiRKP, r, K, P};
}

std::vector<long> FolnerSpec::support() const {
  std::vector<long> out;
  if (kind == Kind::PhiR) {
    for (std::uint64_t p : sieve_primes(static_cast<std::uint64_t>(r)))
      out.push_back(static_cast<long>(p));
    return out;
  }
  for (std::uint64_t p : sieve_primes(static_cast<std::uint64_t>(K))) {
    if (static_cast<long>(p) <= r) continue;
    if (kind == Kind::PhiRKP && omega(*form, Int(p)) == 0) continue;
    out.push_back(static_cast<long>(p));
  }
  return out;
}

long FolnerSpec::theta_min() const { return (kind == Kind::PhiR ? r : K) + 1; }

long FolnerSpec::theta_max() const {
  long base = kind == Kind::PhiR ? r : K;
  return (3 * base) / 2;  // floor(3x/2), window (x, 3x/2]
}

long FolnerSpec::window_size() const { return theta_max() - theta_min() + 1; }

double FolnerSpec::cardinality_log() const {
  return static_cast<double>(support().size()) * std::log(static_cast<double>(window_size()));
}

bool FolnerSpec::operator==(const FolnerSpec& o) const {
  return kind == o.kind && r == o.r && K == o.K && form == o.form;
}

std::string FolnerSpec::str() const {
  switch (kind) {
    case Kind::PhiR:
      return "Phi_" + std::to_string(r);
    case Kind::PhiRK:
      return "Phi_{" + std::to_string(r) + "," + std::to_string(K) + "}";
    case Kind::PhiRKP:
      return "Phi_{" + std::to_string(r) + "," + std::to_string(K) + "," + form->str() + "}";
  }
  return "?";
}

FolnerElement FolnerElement::from_exponents(const FolnerSpec& spec, std::map<long, long> exps) {
  FolnerElement e;
  e.spec = spec;
  e.exponents = std::move(exps);
  e.value = 1;
  for (const auto& [p, theta] : e.exponents) {
    if (theta < spec.theta_min() || theta > spec.theta_max())
      raise("DomainError", "exponent outside the family window");
    e.value *= pow_int(Int(p), static_cast<unsigned long>(theta));
    e.factorization.multiply(Int(p), static_cast<unsigned long>(theta));
  }
  return e;
}

Factorization q_L_factorization(long L) {
  if (L < 1) raise("DomainError", "q_L requires L >= 1");
  Factorization f;
  for (std::uint64_t p : sieve_primes(static_cast<std::uint64_t>(L)))
    f.multiply(Int(p), static_cast<unsigned long>(2 * L));
  return f;
}

Int q_L(long L) { return q_L_factorization(L).value(); }

AngleInterval log_angle_interval(const Factorization& f) { return log_angle_interval_impl(f); }

double chord_upper_bound(const AngleInterval& a) {
  // Chord is 2|sin(theta/2)|; monotone up to pi then down. Bound by checking
  // endpoints and whether pi lies inside.
  double c1 = chord_of_angle(a.lo), c2 = chord_of_angle(a.hi);
  double upper = std::max(c1, c2);
  if (a.lo <= std::numbers::pi && std::numbers::pi <= a.hi) upper = 2.0;
  return upper;
}

double chord_lower_bound(const AngleInterval& a) {
  double c1 = chord_of_angle(a.lo), c2 = chord_of_angle(a.hi);
  double lower = std::min(c1, c2);
  if (a.lo <= 0.0 && 0.0 <= a.hi) lower = 0.0;
  if (a.lo <= kTwoPi && kTwoPi <= a.hi) lower = 0.0;
  return lower;
}

QDeltaL find_q_delta_L(double delta, long L, long search_cap) {
  if (delta <= 0.0 || delta > 2.0) raise("DomainError", "delta must lie in (0, 2]");
  if (search_cap < 1) raise("DomainError", "search cap must be >= 1");
  Factorization qlf = q_L_factorization(L);
  for (long n = 1; n <= search_cap; ++n) {
    Factorization f = qlf;
    f.multiply(Int(2), static_cast<unsigned long>(n));
    AngleInterval ai = log_angle_interval(f);
    if (chord_upper_bound(ai) <= delta) {
      QDeltaL out;
      out.delta = delta;
      out.L = L;
      out.n_shift = n;
      out.factorization = f;
      out.value = f.value();
      out.certificate_angle = 0.5 * (ai.lo + ai.hi);
      out.certificate_chord = chord_upper_bound(ai);
      return out;
    }
  }
  raise("NotFoundWithinCap",
        "no admissible shift n <= " + std::to_string(search_cap) + " for delta=" +
            std::to_string(delta) + ", L=" + std::to_string(L));
}

std::vector<FolnerElement> enumerate_folner(const FolnerSpec& spec, std::uint64_t cap) {
  std::vector<long> primes = spec.support();
  long w = spec.window_size();
  double log_card = static_cast<double>(primes.size()) * std::log(static_cast<double>(w));
  if (log_card > std::log(static_cast<double>(cap)) + 1e-9)
    raise("TooLarge", "family has ~exp(" + std::to_string(log_card) +
                          ") elements; use sampling instead");
  std::vector<FolnerElement> out;
  std::vector<long> theta(primes.size(), spec.theta_min());
  while (true) {
    std::map<long, long> exps;
    for (std::size_t i = 0; i < primes.size(); ++i) exps[primes[i]] = theta[i];
    out.push_back(FolnerElement::from_exponents(spec, std::move(exps)));
    // Lexicographic in the exponent map: advance the last prime fastest.
    std::size_t i = primes.size();
    while (i > 0) {
      --i;
      if (++theta[i] <= spec.theta_max()) break;
      theta[i] = spec.theta_min();
      if (i == 0) return out;
    }
    if (primes.empty()) return out;
  }
}

std::vector<FolnerElement> sample_folner(const FolnerSpec& spec, std::uint64_t count,
                                         std::uint64_t seed) {
  if (count < 1) raise("DomainError", "sample count must be >= 1");
  std::vector<long> primes = spec.support();
  long w = spec.window_size();
  std::uint64_t state = seed ^ 0xd1b54a32d192ed03ULL;
  std::vector<FolnerElement> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::map<long, long> exps;
    for (long p : primes)
      exps[p] = spec.theta_min() +
                static_cast<long>(uniform_below(state, static_cast<std::uint64_t>(w)));
    out.push_back(FolnerElement::from_exponents(spec, std::move(exps)));
  }
  return out;
}

double dilation_defect(const FolnerSpec& spec, long p, DefectMode mode, std::uint64_t samples,
                       std::uint64_t seed) {
  std::vector<long> primes = spec.support();
  if (std::find(primes.begin(), primes.end(), p) == primes.end())
    raise("PrimeNotInSupport", "prime " + std::to_string(p) + " not in the family support");
  long w = spec.window_size();
  if (mode == DefectMode::Exact) return std::min(1.0, 2.0 / static_cast<double>(w));
  // Sampled: Q in p*Phi iff theta_p(Q) - 1 lies in the window.
  std::uint64_t state = seed ^ 0x2545f4914f6cdd1dULL;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    long theta = spec.theta_min() +
                 static_cast<long>(uniform_below(state, static_cast<std::uint64_t>(w)));
    if (theta - 1 >= spec.theta_min()) ++hits;
  }
  double overlap = static_cast<double>(hits) / static_cast<double>(samples);
  return std::min(1.0, 2.0 * (1.0 - overlap));
}

}  // namespace pretlab
