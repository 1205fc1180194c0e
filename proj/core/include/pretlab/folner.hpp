#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "pretlab/quadform.hpp"

namespace pretlab {

// Multiplicative Folner box family: a set of prime-exponent windows.
//   PhiR(r):        primes p <= r,            exponents in (r, 3r/2]
//   PhiRK(r, K):    primes r < p <= K,        exponents in (K, 3K/2]
//   PhiRKP(r, K, P): as PhiRK restricted to primes with omega_P(p) > 0
struct FolnerSpec {
  enum class Kind { PhiR, PhiRK, PhiRKP };

  Kind kind;
  long r = 2;
  long K = 0;
  std::optional<BinaryQuadraticForm> form;

  static FolnerSpec phi_r(long r);
  static FolnerSpec phi_rk(long r, long K);
  static FolnerSpec phi_rkp(long r, long K, const BinaryQuadraticForm& P);

  std::vector<long> support() const;
  long theta_min() const;  // window is [theta_min, theta_max], integers
  long theta_max() const;
  // Number of exponent choices per prime.
  long window_size() const;
  // |Phi| as a double (may be astronomically large).
  double cardinality_log() const;
  bool operator==(const FolnerSpec& o) const;
  std::string str() const;
};

struct FolnerElement {
  FolnerSpec spec;
  std::map<long, long> exponents;  // prime -> theta_p
  Int value;
  Factorization factorization;

  static FolnerElement from_exponents(const FolnerSpec& spec, std::map<long, long> exps);
};

// Q_L = prod_{p <= L} p^{2L}; returns value with factorization.
Factorization q_L_factorization(long L);
Int q_L(long L);

// Q_{delta,L} = 2^{n_shift} * Q_L with |Q_{delta,L}^i - 1| <= delta.
struct QDeltaL {
  double delta = 0.0;
  long L = 0;
  long n_shift = 0;
  Int value;
  Factorization factorization;
  double certificate_angle = 0.0;  // ln(value) mod 2pi, 256-bit evaluation
  double certificate_chord = 0.0;
};

// Smallest n_shift in [1, search_cap] meeting the chord bound; throws
// NotFoundWithinCap otherwise. delta in (0, 2]; values of 1/2 and above only
// make sense for trivial/testing configurations.
QDeltaL find_q_delta_L(double delta, long L, long search_cap = 1'000'000);

// ln(n) mod 2pi from a factorization, evaluated at >= 200-bit precision;
// returns [lo, hi] enclosure of the reduced angle.
struct AngleInterval {
  double lo = 0.0;
  double hi = 0.0;
};
AngleInterval log_angle_interval(const Factorization& f);
// Upper bound for the chord |e^{i ln n} - 1| from the interval.
double chord_upper_bound(const AngleInterval& a);
double chord_lower_bound(const AngleInterval& a);

// Exhaustive enumeration in lexicographic exponent order; throws TooLarge
// when the family exceeds the cap.
std::vector<FolnerElement> enumerate_folner(const FolnerSpec& spec,
                                            std::uint64_t cap = 1'000'000);

// Seeded uniform draws over the exponent windows (deterministic in seed).
std::vector<FolnerElement> sample_folner(const FolnerSpec& spec, std::uint64_t count,
                                         std::uint64_t seed);

enum class DefectMode { Exact, Sampled };

// |p Phi  symmetric-difference  Phi| / |Phi|, capped at 1. Exact mode uses the
// window combinatorics (2 / window size); sampled mode estimates by membership
// of dilated samples.
double dilation_defect(const FolnerSpec& spec, long p, DefectMode mode = DefectMode::Exact,
                       std::uint64_t samples = 4096, std::uint64_t seed = 1);

}  // namespace pretlab
