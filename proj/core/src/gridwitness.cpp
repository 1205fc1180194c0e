#include "pretlab/gridwitness.hpp"

#include <algorithm>

#include "pretlab/error.hpp"

namespace pretlab {

std::string witness_case_name(WitnessCase c) {
  switch (c) {
    case WitnessCase::AcP2Reducible:
      return "AC_P2Reducible";
    case WitnessCase::AcP2Irreducible:
      return "AC_P2Irreducible";
    case WitnessCase::ApbAllIrreducible:
      return "APB_AllIrreducible";
    case WitnessCase::ApbP2Reducible:
      return "APB_P2Reducible";
    case WitnessCase::ApbBothReducible:
      return "APB_BothReducible";
  }
  return "?";
}

WitnessCase witness_case_from_name(const std::string& name) {
  for (WitnessCase c :
       {WitnessCase::AcP2Reducible, WitnessCase::AcP2Irreducible, WitnessCase::ApbAllIrreducible,
        WitnessCase::ApbP2Reducible, WitnessCase::ApbBothReducible})
    if (witness_case_name(c) == name) return c;
  raise("DomainError", "unknown witness case: " + name);
}

CaseForms case_forms(const CaseTag& tag) {
  Int a(tag.a), b(tag.b);
  Int ab = a * b;
  switch (tag.kind) {
    case WitnessCase::AcP2Reducible:
    case WitnessCase::AcP2Irreducible:
      return CaseForms{BinaryQuadraticForm{0, 2 * a, 0}, BinaryQuadraticForm{1, 0, -ab},
                       BinaryQuadraticForm{1, 0, ab}};
    default:
      return CaseForms{BinaryQuadraticForm{1, 0, ab}, BinaryQuadraticForm{1, -2 * b, -ab},
                       BinaryQuadraticForm{1, 2 * a, -ab}};
  }
}

CaseTag make_case_tag(WitnessCase kind, long a, long b, long c) {
  if (a < 1 || b < 1 || c < 1) raise("DomainError", "triple entries must be positive");
  CaseTag tag{kind, a, b, c};
  bool ac = kind == WitnessCase::AcP2Reducible || kind == WitnessCase::AcP2Irreducible;
  if (ac && a != c) raise("DomainError", "a = c required for the AC cases");
  if (!ac && a + b != c) raise("DomainError", "a + b = c required for the APB cases");
  CaseForms forms = case_forms(tag);
  bool p2_red = !is_irreducible(forms.P2);
  bool p3_red = tag.kind == WitnessCase::AcP2Reducible || tag.kind == WitnessCase::AcP2Irreducible
                    ? false
                    : !is_irreducible(forms.P3);
  switch (kind) {
    case WitnessCase::AcP2Reducible:
      if (!p2_red) raise("DomainError", "P2 is irreducible; wrong case tag");
      break;
    case WitnessCase::AcP2Irreducible:
      if (p2_red) raise("DomainError", "P2 is reducible; wrong case tag");
      break;
    case WitnessCase::ApbAllIrreducible:
      if (p2_red || p3_red) raise("DomainError", "P2 and P3 must be irreducible");
      break;
    case WitnessCase::ApbP2Reducible:
      if (!p2_red || p3_red)
        raise("DomainError", "requires P2 reducible and P3 irreducible (swap a and b otherwise)");
      break;
    case WitnessCase::ApbBothReducible:
      if (!p2_red || !p3_red) raise("DomainError", "P2 and P3 must both be reducible");
      break;
  }
  return tag;
}

CaseTag infer_case_tag(long a, long b, long c) {
  if (a < 1 || b < 1 || c < 1) raise("DomainError", "triple entries must be positive");
  if (a == c) {
    bool red = is_perfect_square(Int(a) * Int(b));
    return make_case_tag(red ? WitnessCase::AcP2Reducible : WitnessCase::AcP2Irreducible, a, b, c);
  }
  if (b == c) {
    // Symmetric to a = c with the roles of a and b exchanged.
    bool red = is_perfect_square(Int(a) * Int(b));
    return make_case_tag(red ? WitnessCase::AcP2Reducible : WitnessCase::AcP2Irreducible, b, a, c);
  }
  if (a + b == c) {
    CaseForms f = case_forms(CaseTag{WitnessCase::ApbAllIrreducible, a, b, c});
    bool p2_red = !is_irreducible(f.P2);
    bool p3_red = !is_irreducible(f.P3);
    if (p2_red && p3_red) return make_case_tag(WitnessCase::ApbBothReducible, a, b, c);
    if (p2_red) return make_case_tag(WitnessCase::ApbP2Reducible, a, b, c);
    if (p3_red)
      // P2 irreducible, P3 reducible: the symmetric sibling; normalize by
      // swapping a and b (which exchanges P2 and P3 up to the m,n signs).
      return make_case_tag(WitnessCase::ApbP2Reducible, b, a, c);
    return make_case_tag(WitnessCase::ApbAllIrreducible, a, b, c);
  }
  raise("NotRadoTriple", "(" + std::to_string(a) + "," + std::to_string(b) + "," +
                             std::to_string(c) + ") is not a Rado triple");
}

CaseParameters choose_parameters(const CaseTag& tag) {
  CaseParameters out;
  Int a(tag.a), b(tag.b), ab = a * b;
  CaseForms forms = case_forms(tag);
  switch (tag.kind) {
    case WitnessCase::AcP2Reducible: {
      out.gamma = isqrt(ab);
      for (Int k = 1;; ++k)
        if (1 - k * out.gamma != 0) {
          out.kappa = k;
          break;
        }
      return out;
    }
    case WitnessCase::AcP2Irreducible: {
      for (Int k = 1;; ++k)
        if (1 - ab * k * k != 0) {
          out.kappa = k;
          break;
        }
      return out;
    }
    case WitnessCase::ApbAllIrreducible:
      return out;
    case WitnessCase::ApbP2Reducible:
      out.p2_split = split_reducible(forms.P2);
      return out;
    case WitnessCase::ApbBothReducible:
      out.p2_split = split_reducible(forms.P2);
      out.p3_split = split_reducible(forms.P3);
      return out;
  }
  return out;
}

Int admissibility_threshold(const CaseTag& tag) {
  CaseParameters pars = choose_parameters(tag);
  Int a(tag.a), b(tag.b), ab = a * b;
  Int constant;
  switch (tag.kind) {
    case WitnessCase::AcP2Reducible: {
      const Int& k = pars.kappa;
      const Int& g = pars.gamma;
      constant = 2 * k * g * ab * (1 + ab) * (1 - k * g) * (1 + k * g) * (1 + k * k * ab);
      break;
    }
    case WitnessCase::AcP2Irreducible: {
      const Int& k = pars.kappa;
      constant = 2 * k * ab * (1 + ab) * (1 - ab * k * k) * (1 + ab * k * k);
      break;
    }
    case WitnessCase::ApbAllIrreducible:
      constant = 2 * ab * (a + b);
      break;
    case WitnessCase::ApbP2Reducible: {
      const Int& l1 = pars.p2_split->lambda1;
      const Int& l2 = pars.p2_split->lambda2;
      constant = 2 * ab * (a + b) * l1 * l2 * (l1 - l2) * (ab + l1 * l1);
      break;
    }
    case WitnessCase::ApbBothReducible: {
      const Int& l1 = pars.p2_split->lambda1;
      const Int& l2 = pars.p2_split->lambda2;
      const Int& l3 = pars.p3_split->lambda1;
      const Int& l4 = pars.p3_split->lambda2;
      constant = 2 * ab * (a + b) * l1 * l2 * (l1 - l2) * (ab + l1 * l1) * l3 * l4 * (l3 - l4) *
                 (ab + l3 * l3);
      break;
    }
  }
  Int threshold = 1;
  auto merge = [&threshold](const Int& n) {
    for (const auto& f : factorize(abs(n)).factors) threshold = std::max(threshold, f.prime);
  };
  merge(constant);
  CaseForms forms = case_forms(tag);
  for (const auto* P : {&forms.P1, &forms.P2, &forms.P3}) {
    Int twod = 2 * discriminant(*P);
    if (twod != 0) merge(twod);
  }
  return threshold;
}

CaseFamilies case_families(const CaseTag& tag, long s, long r, long K, long L) {
  CaseForms forms = case_forms(tag);
  switch (tag.kind) {
    case WitnessCase::AcP2Reducible:
      return {FolnerSpec::phi_r(r), FolnerSpec::phi_rk(r, K), FolnerSpec::phi_rkp(K, L, forms.P3)};
    case WitnessCase::AcP2Irreducible:
      return {FolnerSpec::phi_r(r), FolnerSpec::phi_rkp(r, K, forms.P2),
              FolnerSpec::phi_rkp(K, L, forms.P3)};
    case WitnessCase::ApbAllIrreducible:
      return {FolnerSpec::phi_rkp(s, r, forms.P1), FolnerSpec::phi_rkp(r, K, forms.P2),
              FolnerSpec::phi_rkp(K, L, forms.P3)};
    case WitnessCase::ApbP2Reducible:
      return {FolnerSpec::phi_rkp(s, r, forms.P1), FolnerSpec::phi_rk(r, K),
              FolnerSpec::phi_rkp(K, L, forms.P3)};
    case WitnessCase::ApbBothReducible:
      return {FolnerSpec::phi_rkp(s, r, forms.P1), FolnerSpec::phi_rk(r, K),
              FolnerSpec::phi_rk(K, L)};
  }
  raise("InternalError", "bad case");
}

namespace {

bool is_apb(const CaseTag& tag) {
  return tag.kind == WitnessCase::ApbAllIrreducible || tag.kind == WitnessCase::ApbP2Reducible ||
         tag.kind == WitnessCase::ApbBothReducible;
}

void validate_params(const GridParams& p) {
  bool apb = is_apb(p.tag);
  if (apb) {
    if (!(2 <= p.s && p.s < p.r && p.r < p.K && 2 * p.K < p.L))
      raise("BadOrdering", "need 2 <= s < r < K < L/2");
  } else {
    if (!(2 <= p.r && p.r < p.K && 2 * p.K < p.L))
      raise("BadOrdering", "need 2 <= r < K < L/2");
  }
  Int threshold = admissibility_threshold(p.tag);
  Int floor_param(apb ? p.s : p.r);
  if (floor_param <= threshold)
    raise("BelowThreshold", std::string(apb ? "s" : "r") + " must exceed the admissibility " +
                                "threshold " + threshold.get_str());
  CaseFamilies fams = case_families(p.tag, p.s, p.r, p.K, p.L);
  if (!(p.Q1.spec == fams.f1)) raise("WrongFamily", "Q1 not drawn from " + fams.f1.str());
  if (!(p.Q2.spec == fams.f2)) raise("WrongFamily", "Q2 not drawn from " + fams.f2.str());
  if (!(p.Q3.spec == fams.f3)) raise("WrongFamily", "Q3 not drawn from " + fams.f3.str());
}

unsigned long theta_of(const FolnerElement& Q, long p) {
  auto it = Q.exponents.find(p);
  if (it == Q.exponents.end())
    raise("WrongFamily", "prime " + std::to_string(p) + " missing from element support");
  return static_cast<unsigned long>(it->second);
}

// Hensel row for a support prime of Q_j: lift the smaller root of P(1,x) mod p.
Congruence hensel_row(const BinaryQuadraticForm& P, long p, unsigned long theta,
                      std::vector<HenselRecord>& records, int j) {
  Int pp(p);
  std::vector<Int> roots;
  try {
    roots = roots_mod_prime_power(P, pp, 1);
  } catch (const Error& e) {
    raise("HenselFailure", e.what());
  }
  if (roots.size() != 2)
    raise("HenselFailure", "omega_P(" + std::to_string(p) + ") = " +
                               std::to_string(roots.size()) + ", inadmissible prime in window");
  Int seed = roots[0];
  Int zeta;
  try {
    zeta = hensel_lift(P, pp, theta, seed);
  } catch (const Error& e) {
    raise("HenselFailure", e.what());
  }
  records.push_back(HenselRecord{pp, j, theta, seed, zeta});
  return Congruence{zeta, pow_int(pp, theta + 1)};
}

std::vector<long> primes_up_to(long x) {
  std::vector<long> out;
  for (std::uint64_t p : sieve_primes(static_cast<std::uint64_t>(std::max<long>(x, 0))))
    out.push_back(static_cast<long>(p));
  return out;
}

std::vector<long> primes_in(long lo_exclusive, long hi_inclusive) {
  std::vector<long> out;
  for (long p : primes_up_to(hi_inclusive))
    if (p > lo_exclusive) out.push_back(p);
  return out;
}

struct ConditionBuilder {
  std::vector<WitnessCondition> list;

  void gcd_is(const std::string& name, const Int& modulus, const Int& x, const Int& expected) {
    Int g = gcd(modulus, x);
    list.push_back({name, g == expected,
                    "gcd=" + g.get_str() + " expected=" + expected.get_str()});
  }
  // (x / divisor) = inverse(divisor) mod m, with exact divisibility.
  void quotient_is_inverse(const std::string& name, const Int& x, const Int& divisor,
                           const Int& m) {
    if (divisor == 0 || x % divisor != 0) {
      list.push_back({name, false, "quotient not integral"});
      return;
    }
    Int got = mod_floor(x / divisor, m);
    Int want = m == 1 ? Int(0) : mod_inverse(mod_floor(divisor, m), m);
    list.push_back({name, got == want, "residue=" + got.get_str() + " expected=" + want.get_str()});
  }
  // (x / divisor) = 1 mod m, with exact divisibility.
  void quotient_is_one(const std::string& name, const Int& x, const Int& divisor, const Int& m) {
    if (divisor == 0 || x % divisor != 0) {
      list.push_back({name, false, "quotient not integral"});
      return;
    }
    Int got = mod_floor(x / divisor, m);
    Int want = mod_floor(Int(1), m);
    list.push_back({name, got == want, "residue=" + got.get_str() + " expected=1"});
  }
  void residue_is_one(const std::string& name, const Int& x, const Int& m) {
    Int got = mod_floor(x, m);
    Int want = mod_floor(Int(1), m);
    list.push_back({name, got == want, "residue=" + got.get_str() + " expected=1"});
  }
  void divides(const std::string& name, const Int& d, const Int& x) {
    bool ok = d != 0 && x % d == 0;
    list.push_back({name, ok, ok ? "exact" : "remainder nonzero"});
  }
};

}  // namespace

bool GridWitness::all_pass() const {
  return std::all_of(report.begin(), report.end(),
                     [](const WitnessCondition& c) { return c.pass; });
}

GridParams make_grid_params(const CaseTag& tag, long s, long r, long K, long L, double delta,
                            const FolnerElement& Q1, const FolnerElement& Q2,
                            const FolnerElement& Q3) {
  GridParams p;
  p.tag = tag;
  p.delta = delta;
  p.s = s;
  p.r = r;
  p.K = K;
  p.L = L;
  p.Q1 = Q1;
  p.Q2 = Q2;
  p.Q3 = Q3;
  p.qdl = find_q_delta_L(delta, L);
  return p;
}

std::vector<WitnessCondition> verify_witness(const GridParams& p, const Int& v) {
  ConditionBuilder cb;
  const Int& Qdl = p.qdl.value;
  CaseForms forms = case_forms(p.tag);
  CaseParameters pars = choose_parameters(p.tag);
  const Int& Q1 = p.Q1.value;
  const Int& Q2 = p.Q2.value;
  const Int& Q3 = p.Q3.value;

  cb.list.push_back({"range 0 <= v <= Q_dL - 1", v >= 0 && v <= Qdl - 1,
                     "v has " + std::to_string(mpz_sizeinbase(v.get_mpz_t(), 10)) + " digits"});

  switch (p.tag.kind) {
    case WitnessCase::AcP2Reducible: {
      const Int& g = pars.gamma;
      Int one_minus = 1 - g * v;
      Int one_plus = 1 + g * v;
      Int p3v = forms.P3.at_one(v);
      cb.gcd_is("(i) gcd(Q_dL, v) = Q1", Qdl, v, Q1);
      cb.quotient_is_one("(i) v/Q1 = 1 mod Q1", v, Q1, Q1);
      cb.gcd_is("(ii) gcd(Q_dL, 1 - gamma v) = Q2", Qdl, abs(one_minus), Q2);
      cb.quotient_is_inverse("(ii) (1 - gamma v)/Q2 = Q2^-1 mod Q1", one_minus, Q2, Q1);
      cb.gcd_is("(iii) gcd(Q_dL, 1 + gamma v) = 1", Qdl, one_plus, Int(1));
      cb.residue_is_one("(iii) 1 + gamma v = 1 mod Q1", one_plus, Q1);
      cb.gcd_is("(iv) gcd(Q_dL, P3(1,v)) = Q3", Qdl, p3v, Q3);
      cb.quotient_is_inverse("(iv) P3(1,v)/Q3 = Q3^-1 mod Q1", p3v, Q3, Q1);
      cb.divides("Q1 | P1(1,v)", Q1, forms.P1.at_one(v));
      cb.divides("Q2 | P2(1,v)", Q2, forms.P2.at_one(v));
      cb.divides("Q3 | P3(1,v)", Q3, p3v);
      break;
    }
    case WitnessCase::AcP2Irreducible: {
      Int p2v = forms.P2.at_one(v);
      Int p3v = forms.P3.at_one(v);
      cb.gcd_is("(i) gcd(Q_dL, v) = Q1", Qdl, v, Q1);
      cb.quotient_is_one("(i) v/Q1 = 1 mod Q1", v, Q1, Q1);
      cb.gcd_is("(ii) gcd(Q_dL, P2(1,v)) = Q2", Qdl, p2v, Q2);
      cb.quotient_is_inverse("(ii) P2(1,v)/Q2 = Q2^-1 mod Q1", p2v, Q2, Q1);
      cb.gcd_is("(iii) gcd(Q_dL, P3(1,v)) = Q3", Qdl, p3v, Q3);
      cb.quotient_is_inverse("(iii) P3(1,v)/Q3 = Q3^-1 mod Q1", p3v, Q3, Q1);
      cb.divides("Q1 | P1(1,v)", Q1, forms.P1.at_one(v));
      break;
    }
    case WitnessCase::ApbAllIrreducible: {
      Int Qs = q_L(p.s);
      int idx = 0;
      for (const auto& [P, Qj] :
           {std::pair{&forms.P1, &Q1}, std::pair{&forms.P2, &Q2}, std::pair{&forms.P3, &Q3}}) {
        ++idx;
        Int pv = P->at_one(v);
        std::string tagname = "(" + std::to_string(idx) + ")";
        cb.gcd_is(tagname + " gcd(Q_dL, P" + std::to_string(idx) + "(1,v)) = Q" +
                      std::to_string(idx),
                  Qdl, abs(pv), *Qj);
        cb.quotient_is_inverse(tagname + " P" + std::to_string(idx) + "(1,v)/Q" +
                                   std::to_string(idx) + " = Q" + std::to_string(idx) +
                                   "^-1 mod Q_s",
                               pv, *Qj, Qs);
      }
      break;
    }
    case WitnessCase::ApbP2Reducible: {
      Int Qs = q_L(p.s);
      const Int& l1 = pars.p2_split->lambda1;
      const Int& l2 = pars.p2_split->lambda2;
      Int p1v = forms.P1.at_one(v);
      Int f1 = 1 + l1 * v;
      Int f2 = 1 + l2 * v;
      Int p3v = forms.P3.at_one(v);
      cb.gcd_is("(i) gcd(Q_dL, P1(1,v)) = Q1", Qdl, abs(p1v), Q1);
      cb.quotient_is_inverse("(i) P1(1,v)/Q1 = Q1^-1 mod Q_s", p1v, Q1, Qs);
      cb.gcd_is("(ii) gcd(Q_dL, 1 + lambda1 v) = Q2", Qdl, abs(f1), Q2);
      cb.quotient_is_inverse("(ii) (1 + lambda1 v)/Q2 = Q2^-1 mod Q_s", f1, Q2, Qs);
      cb.gcd_is("(iii) gcd(Q_dL, 1 + lambda2 v) = 1", Qdl, abs(f2), Int(1));
      cb.residue_is_one("(iii) 1 + lambda2 v = 1 mod Q_s", f2, Qs);
      cb.gcd_is("(iv) gcd(Q_dL, P3(1,v)) = Q3", Qdl, abs(p3v), Q3);
      cb.quotient_is_inverse("(iv) P3(1,v)/Q3 = Q3^-1 mod Q_s", p3v, Q3, Qs);
      cb.divides("Q2 | P2(1,v)", Q2, forms.P2.at_one(v));
      break;
    }
    case WitnessCase::ApbBothReducible: {
      Int Qs = q_L(p.s);
      const Int& l1 = pars.p2_split->lambda1;
      const Int& l2 = pars.p2_split->lambda2;
      const Int& l3 = pars.p3_split->lambda1;
      const Int& l4 = pars.p3_split->lambda2;
      Int p1v = forms.P1.at_one(v);
      Int f1 = 1 + l1 * v, f2 = 1 + l2 * v, f3 = 1 + l3 * v, f4 = 1 + l4 * v;
      cb.gcd_is("(i) gcd(Q_dL, P1(1,v)) = Q1", Qdl, abs(p1v), Q1);
      cb.quotient_is_inverse("(i) P1(1,v)/Q1 = Q1^-1 mod Q_s", p1v, Q1, Qs);
      cb.gcd_is("(ii) gcd(Q_dL, 1 + lambda1 v) = Q2", Qdl, abs(f1), Q2);
      cb.quotient_is_inverse("(ii) (1 + lambda1 v)/Q2 = Q2^-1 mod Q_s", f1, Q2, Qs);
      cb.gcd_is("(iii) gcd(Q_dL, 1 + lambda2 v) = 1", Qdl, abs(f2), Int(1));
      cb.residue_is_one("(iii) 1 + lambda2 v = 1 mod Q_s", f2, Qs);
      cb.gcd_is("(iv) gcd(Q_dL, 1 + lambda3 v) = Q3", Qdl, abs(f3), Q3);
      cb.quotient_is_inverse("(iv) (1 + lambda3 v)/Q3 = Q3^-1 mod Q_s", f3, Q3, Qs);
      cb.gcd_is("(v) gcd(Q_dL, 1 + lambda4 v) = 1", Qdl, abs(f4), Int(1));
      cb.residue_is_one("(v) 1 + lambda4 v = 1 mod Q_s", f4, Qs);
      cb.divides("Q2 | P2(1,v)", Q2, forms.P2.at_one(v));
      cb.divides("Q3 | P3(1,v)", Q3, forms.P3.at_one(v));
      break;
    }
  }
  return cb.list;
}

GridWitness construct_v(const GridParams& p) {
  validate_params(p);
  CaseForms forms = case_forms(p.tag);
  CaseParameters pars = choose_parameters(p.tag);
  GridWitness w;
  w.parameters = pars;
  std::vector<Congruence> crt;

  auto add_simple = [&crt](const Int& residue, const Int& modulus) {
    crt.push_back({residue, modulus});
  };

  switch (p.tag.kind) {
    case WitnessCase::AcP2Reducible: {
      const Int& g = pars.gamma;
      for (long q : primes_up_to(p.r)) {
        unsigned long th = theta_of(p.Q1, q);
        add_simple(mod_floor(p.Q1.value, pow_int(Int(q), 2 * th)), pow_int(Int(q), 2 * th));
      }
      for (long q : primes_in(p.r, p.K)) {
        unsigned long th = theta_of(p.Q2, q);
        Int mod = pow_int(Int(q), th + 1);
        Int ginv = mod_inverse(mod_floor(g, mod), mod);
        add_simple(mod_floor(ginv * (1 - pow_int(Int(q), th)), mod), mod);
      }
      for (long q : primes_in(p.K, p.L)) {
        unsigned long om = omega(forms.P3, Int(q));
        if (om == 0) {
          add_simple(mod_floor(pars.kappa, Int(q)), Int(q));
        } else {
          crt.push_back(hensel_row(forms.P3, q, theta_of(p.Q3, q), w.hensel_roots, 3));
        }
      }
      break;
    }
    case WitnessCase::AcP2Irreducible: {
      for (long q : primes_up_to(p.r)) {
        unsigned long th = theta_of(p.Q1, q);
        add_simple(mod_floor(p.Q1.value, pow_int(Int(q), 2 * th)), pow_int(Int(q), 2 * th));
      }
      for (long q : primes_in(p.r, p.K)) {
        unsigned long om = omega(forms.P2, Int(q));
        if (om == 0)
          add_simple(mod_floor(pars.kappa, Int(q)), Int(q));
        else
          crt.push_back(hensel_row(forms.P2, q, theta_of(p.Q2, q), w.hensel_roots, 2));
      }
      for (long q : primes_in(p.K, p.L)) {
        unsigned long om = omega(forms.P3, Int(q));
        if (om == 0)
          add_simple(mod_floor(pars.kappa, Int(q)), Int(q));
        else
          crt.push_back(hensel_row(forms.P3, q, theta_of(p.Q3, q), w.hensel_roots, 3));
      }
      break;
    }
    case WitnessCase::ApbAllIrreducible: {
      for (long q : primes_up_to(p.s))
        add_simple(Int(0), pow_int(Int(q), static_cast<unsigned long>(2 * p.s)));
      for (long q : primes_in(p.s, p.r)) {
        unsigned long om = omega(forms.P1, Int(q));
        if (om == 0)
          add_simple(Int(0), Int(q));
        else
          crt.push_back(hensel_row(forms.P1, q, theta_of(p.Q1, q), w.hensel_roots, 1));
      }
      for (long q : primes_in(p.r, p.K)) {
        unsigned long om = omega(forms.P2, Int(q));
        if (om == 0)
          add_simple(Int(0), Int(q));
        else
          crt.push_back(hensel_row(forms.P2, q, theta_of(p.Q2, q), w.hensel_roots, 2));
      }
      for (long q : primes_in(p.K, p.L)) {
        unsigned long om = omega(forms.P3, Int(q));
        if (om == 0)
          add_simple(Int(0), Int(q));
        else
          crt.push_back(hensel_row(forms.P3, q, theta_of(p.Q3, q), w.hensel_roots, 3));
      }
      break;
    }
    case WitnessCase::ApbP2Reducible:
    case WitnessCase::ApbBothReducible: {
      for (long q : primes_up_to(p.s))
        add_simple(Int(0), pow_int(Int(q), static_cast<unsigned long>(2 * p.s)));
      for (long q : primes_in(p.s, p.r)) {
        unsigned long om = omega(forms.P1, Int(q));
        if (om == 0)
          add_simple(Int(0), Int(q));
        else
          crt.push_back(hensel_row(forms.P1, q, theta_of(p.Q1, q), w.hensel_roots, 1));
      }
      const Int& l1 = pars.p2_split->lambda1;
      for (long q : primes_in(p.r, p.K)) {
        unsigned long th = theta_of(p.Q2, q);
        Int mod = pow_int(Int(q), th + 1);
        Int linv = mod_inverse(mod_floor(l1, mod), mod);
        add_simple(mod_floor(linv * (pow_int(Int(q), th) - 1), mod), mod);
      }
      if (p.tag.kind == WitnessCase::ApbP2Reducible) {
        for (long q : primes_in(p.K, p.L)) {
          unsigned long om = omega(forms.P3, Int(q));
          if (om == 0)
            add_simple(Int(0), Int(q));
          else
            crt.push_back(hensel_row(forms.P3, q, theta_of(p.Q3, q), w.hensel_roots, 3));
        }
      } else {
        const Int& l3 = pars.p3_split->lambda1;
        for (long q : primes_in(p.K, p.L)) {
          unsigned long th = theta_of(p.Q3, q);
          Int mod = pow_int(Int(q), th + 1);
          Int linv = mod_inverse(mod_floor(l3, mod), mod);
          add_simple(mod_floor(linv * (pow_int(Int(q), th) - 1), mod), mod);
        }
      }
      break;
    }
  }

  Congruence solved = crt_solve(crt);
  if (solved.modulus > p.qdl.value)
    raise("BadOrdering", "combined CRT modulus exceeds Q_{delta,L}");
  if (!is_apb(p.tag)) {
    // Explicit cap for the a = c cases: the CRT moduli must fit under Q_{delta,L}.
    Int bound = 1;
    for (long q : primes_up_to(p.K)) bound *= pow_int(Int(q), static_cast<unsigned long>(4 * p.K));
    for (long q : primes_in(p.K, p.L))
      bound *= pow_int(Int(q), static_cast<unsigned long>(1 + (3 * p.L) / 2));
    if (bound > p.qdl.value) raise("BadOrdering", "a=c modulus cap exceeds Q_{delta,L}");
  }
  w.v = solved.residue;
  w.report = verify_witness(p, w.v);
  // Hensel certificates: P_j(1, zeta) = p^theta (mod p^(theta+1)).
  CaseForms f2 = case_forms(p.tag);
  for (const auto& h : w.hensel_roots) {
    const BinaryQuadraticForm& P = h.j == 1 ? f2.P1 : (h.j == 2 ? f2.P2 : f2.P3);
    Int mod = pow_int(h.p, h.theta + 1);
    bool ok = mod_floor(P.at_one(h.zeta) - pow_int(h.p, h.theta), mod) == 0 &&
              mod_floor(h.zeta - h.seed, h.p) == 0;
    w.report.push_back({"hensel certificate p=" + h.p.get_str() + " j=" + std::to_string(h.j), ok,
                        "zeta=" + h.zeta.get_str()});
  }
  return w;
}

CofactorValue cofactor(const GridParams& p, const GridWitness& w, int j, const Int& m,
                       const Int& n) {
  if (j < 1 || j > 3) raise("IndexOutOfRange", "j must be 1, 2 or 3");
  if (m < 1 || n < 1) raise("DomainError", "m, n must be >= 1");
  CaseForms forms = case_forms(p.tag);
  const BinaryQuadraticForm& P = j == 1 ? forms.P1 : (j == 2 ? forms.P2 : forms.P3);
  const Int& Qj = j == 1 ? p.Q1.value : (j == 2 ? p.Q2.value : p.Q3.value);
  Int value = P(p.qdl.value * m + 1, p.qdl.value * n + w.v);
  if (Qj == 0 || value % Qj != 0)
    raise("DivisibilityFailure", "Q" + std::to_string(j) + " does not divide P" +
                                     std::to_string(j) + " on the grid");
  CofactorValue out{j, m, n, value / Qj};
  if (p.tag.kind == WitnessCase::AcP2Reducible && (j == 1 || j == 2)) {
    Int closed = j == 1 ? cofactor_closed_form_r1(p, w, m, n) : cofactor_closed_form_r2(p, w, m, n);
    if (closed != out.value)
      raise("DivisibilityFailure", "closed-form cofactor mismatch for R" + std::to_string(j));
  }
  return out;
}

Int cofactor_closed_form_r1(const GridParams& p, const GridWitness& w, const Int& m,
                            const Int& n) {
  // R1 = 2a (Q m + 1)((Q/Q1) n + v/Q1)
  const Int& Q = p.qdl.value;
  const Int& Q1 = p.Q1.value;
  return 2 * Int(p.tag.a) * (Q * m + 1) * ((Q / Q1) * n + w.v / Q1);
}

Int cofactor_closed_form_r2(const GridParams& p, const GridWitness& w, const Int& m,
                            const Int& n) {
  // R2 = ((Q/Q2)(m - gamma n) + (1 - gamma v)/Q2) (Q (m + gamma n) + 1 + gamma v)
  const Int& Q = p.qdl.value;
  const Int& Q2 = p.Q2.value;
  const Int& g = w.parameters.gamma;
  return ((Q / Q2) * (m - g * n) + (1 - g * w.v) / Q2) * (Q * (m + g * n) + 1 + g * w.v);
}

Int factor_shift(long r, long K, const FolnerElement& Q) {
  if (Q.spec.kind == FolnerSpec::Kind::PhiR)
    raise("WrongFamily", "factor shift needs an element of Phi_{r,K} or Phi_{r,K,P}");
  if (Q.spec.r != r || Q.spec.K != K)
    raise("WrongFamily", "element parameters do not match (r, K)");
  std::vector<Congruence> crt;
  for (long q : primes_up_to(r)) {
    Int mod = pow_int(Int(q), static_cast<unsigned long>(r));
    crt.push_back({mod_inverse(mod_floor(Q.value, mod), mod), mod});
  }
  for (long q : primes_in(r, K)) crt.push_back({Int(1), Int(q)});
  Int v = crt_solve(crt).residue;
  // Postconditions, re-checked exactly.
  Int prim = 1;
  for (long q : primes_up_to(K)) prim *= q;
  if (gcd(v, prim) != 1) raise("InternalError", "factor shift postcondition (coprimality) failed");
  Int mod_r = 1;
  for (long q : primes_up_to(r)) mod_r *= pow_int(Int(q), static_cast<unsigned long>(r));
  if (mod_floor(v * Q.value, mod_r) != mod_floor(Int(1), mod_r))
    raise("InternalError", "factor shift postcondition (inverse congruence) failed");
  return v;
}

}  // namespace pretlab
