#include <doctest.h>

#include "pretlab/error.hpp"
#include "pretlab/gridwitness.hpp"

using namespace pretlab;

namespace {

GridParams demo_params_case1(long r = 7, long K = 11, long L = 29) {
  CaseTag tag = make_case_tag(WitnessCase::AcP2Reducible, 1, 1, 1);
  CaseFamilies fams = case_families(tag, 0, r, K, L);
  FolnerElement q1 = sample_folner(fams.f1, 1, 11)[0];
  FolnerElement q2 = sample_folner(fams.f2, 1, 12)[0];
  FolnerElement q3 = sample_folner(fams.f3, 1, 13)[0];
  return make_grid_params(tag, 0, r, K, L, 1.9, q1, q2, q3);
}

}  // namespace

TEST_CASE("admissibility thresholds from the excluded constants") {
  CHECK(admissibility_threshold(make_case_tag(WitnessCase::AcP2Reducible, 1, 1, 1)) == 5);
  CHECK(admissibility_threshold(make_case_tag(WitnessCase::ApbAllIrreducible, 1, 1, 2)) == 2);
  CHECK(admissibility_threshold(make_case_tag(WitnessCase::ApbBothReducible, 9, 16, 25)) == 5);
  // oracle for the first: factor 2*kappa*gamma*ab*(1+ab)*(1-kg)*(1+kg)*(1+k^2 ab)
  // with kappa=2,gamma=1: |constant| = 2*2*1*1*2*1*3*5 = 120 = 2^3 * 3 * 5
  CHECK(factorize(120).factors.back().prime == 5);
}

TEST_CASE("choose_parameters") {
  CaseParameters p = choose_parameters(make_case_tag(WitnessCase::AcP2Reducible, 1, 1, 1));
  CHECK(p.gamma == 1);
  CHECK(p.kappa == 2);  // kappa = 1 would give 1 - kappa*gamma = 0
  p = choose_parameters(make_case_tag(WitnessCase::AcP2Irreducible, 1, 2, 1));
  CHECK(p.kappa == 1);
  p = choose_parameters(make_case_tag(WitnessCase::ApbBothReducible, 9, 16, 25));
  REQUIRE(p.p2_split.has_value());
  CHECK(p.p2_split->lambda1 == -36);
  CHECK(p.p2_split->lambda2 == 4);
  REQUIRE(p.p3_split.has_value());
  CHECK(p.p3_split->lambda1 == -6);
  CHECK(p.p3_split->lambda2 == 24);
}

TEST_CASE("case tags validate the triple and reducibility") {
  CHECK_THROWS_AS(make_case_tag(WitnessCase::AcP2Reducible, 1, 2, 1), Error);   // ab not square
  CHECK_THROWS_AS(make_case_tag(WitnessCase::AcP2Irreducible, 1, 1, 1), Error); // ab square
  CHECK_THROWS_AS(make_case_tag(WitnessCase::ApbAllIrreducible, 3, 1, 4), Error);
  CHECK(infer_case_tag(1, 1, 1).kind == WitnessCase::AcP2Reducible);
  CHECK(infer_case_tag(1, 1, 2).kind == WitnessCase::ApbAllIrreducible);
  CHECK(infer_case_tag(3, 1, 4).kind == WitnessCase::ApbP2Reducible);
  // the symmetric sibling normalizes by swapping a and b
  CaseTag swapped = infer_case_tag(1, 3, 4);
  CHECK(swapped.kind == WitnessCase::ApbP2Reducible);
  CHECK(swapped.a == 3);
  CHECK(swapped.b == 1);
  CHECK(infer_case_tag(9, 16, 25).kind == WitnessCase::ApbBothReducible);
  CHECK_THROWS_AS(infer_case_tag(1, 1, 4), Error);
}

TEST_CASE("construct_v at the demo parameters passes every condition") {
  GridParams params = demo_params_case1();
  GridWitness w = construct_v(params);
  CHECK(w.all_pass());
  CHECK(w.v >= 0);
  CHECK(w.v <= params.qdl.value - 1);
  // Hensel certificates recorded for every support prime of Q3
  CHECK(w.hensel_roots.size() == params.Q3.exponents.size());
}

TEST_CASE("construct_v errors") {
  CaseTag tag = make_case_tag(WitnessCase::AcP2Reducible, 1, 1, 1);
  // r = 2 is at or below the threshold 5
  {
    CaseFamilies fams = case_families(tag, 0, 2, 11, 29);
    GridParams p = make_grid_params(tag, 0, 2, 11, 29, 1.9, sample_folner(fams.f1, 1, 1)[0],
                                    sample_folner(fams.f2, 1, 2)[0],
                                    sample_folner(fams.f3, 1, 3)[0]);
    try {
      construct_v(p);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.name() == "BelowThreshold");
    }
  }
  // K = 11, L = 20 violates K < L/2
  {
    CaseFamilies fams = case_families(tag, 0, 7, 11, 20);
    GridParams p = make_grid_params(tag, 0, 7, 11, 20, 1.9, sample_folner(fams.f1, 1, 1)[0],
                                    sample_folner(fams.f2, 1, 2)[0],
                                    sample_folner(fams.f3, 1, 3)[0]);
    try {
      construct_v(p);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.name() == "BadOrdering");
    }
  }
  // Q2 drawn from the wrong family
  {
    GridParams p = demo_params_case1();
    p.Q2 = sample_folner(FolnerSpec::phi_rk(7, 13), 1, 5)[0];
    try {
      construct_v(p);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.name() == "WrongFamily");
    }
  }
}

TEST_CASE("verify_witness flags mutations") {
  GridParams params = demo_params_case1();
  GridWitness w = construct_v(params);
  auto mutated = verify_witness(params, w.v + 1);
  bool any_fail = false;
  for (const auto& c : mutated) any_fail = any_fail || !c.pass;
  CHECK(any_fail);
  // range clamp sanity on the constructed witness
  for (const auto& c : w.report)
    if (c.name.rfind("range", 0) == 0) CHECK(c.pass);
}

TEST_CASE("cofactors: exact division and closed forms") {
  GridParams params = demo_params_case1();
  GridWitness w = construct_v(params);
  CHECK_THROWS_AS(cofactor(params, w, 4, 1, 1), Error);
  try {
    cofactor(params, w, 0, 1, 1);
  } catch (const Error& e) {
    CHECK(e.name() == "IndexOutOfRange");
  }
  CaseForms forms = case_forms(params.tag);
  for (int j = 1; j <= 3; ++j) {
    CofactorValue cv = cofactor(params, w, j, 1, 1);
    const BinaryQuadraticForm& P = j == 1 ? forms.P1 : (j == 2 ? forms.P2 : forms.P3);
    const Int& Qj = j == 1 ? params.Q1.value : (j == 2 ? params.Q2.value : params.Q3.value);
    CHECK(Qj * cv.value == P(params.qdl.value + 1, params.qdl.value + w.v));
  }
  // closed forms for R1, R2 on 100 random (m, n)
  std::uint64_t state = 4242;
  for (int i = 0; i < 100; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    Int m = Int(static_cast<unsigned long>((state >> 33) % 1000 + 1));
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    Int n = Int(static_cast<unsigned long>((state >> 33) % 1000 + 1));
    CofactorValue r1 = cofactor(params, w, 1, m, n);
    CHECK(r1.value == cofactor_closed_form_r1(params, w, m, n));
    CofactorValue r2 = cofactor(params, w, 2, m, n);
    CHECK(r2.value == cofactor_closed_form_r2(params, w, m, n));
  }
}

TEST_CASE("grid divisibility at sampled (m, n)") {
  GridParams params = demo_params_case1();
  GridWitness w = construct_v(params);
  CaseForms forms = case_forms(params.tag);
  for (long m = 1; m <= 10; ++m) {
    for (long n = 1; n <= 10; ++n) {
      CHECK(forms.P1(params.qdl.value * m + 1, params.qdl.value * n + w.v) % params.Q1.value == 0);
      CHECK(forms.P2(params.qdl.value * m + 1, params.qdl.value * n + w.v) % params.Q2.value == 0);
      CHECK(forms.P3(params.qdl.value * m + 1, params.qdl.value * n + w.v) % params.Q3.value == 0);
    }
  }
}

TEST_CASE("one witness per case tag at small admissible parameters") {
  struct Row {
    WitnessCase kind;
    long a, b, c, s, r, K, L;
  };
  for (const Row& row : std::vector<Row>{{WitnessCase::AcP2Reducible, 1, 1, 1, 0, 6, 7, 15},
                                         {WitnessCase::AcP2Irreducible, 1, 2, 1, 0, 4, 7, 15},
                                         {WitnessCase::ApbAllIrreducible, 1, 1, 2, 3, 5, 7, 17},
                                         {WitnessCase::ApbP2Reducible, 3, 1, 4, 4, 7, 11, 23},
                                         {WitnessCase::ApbBothReducible, 9, 16, 25, 6, 13, 17, 35}}) {
    CaseTag tag = make_case_tag(row.kind, row.a, row.b, row.c);
    CaseFamilies fams = case_families(tag, row.s, row.r, row.K, row.L);
    GridParams p = make_grid_params(tag, row.s, row.r, row.K, row.L, 1.9,
                                    sample_folner(fams.f1, 1, 21)[0],
                                    sample_folner(fams.f2, 1, 22)[0],
                                    sample_folner(fams.f3, 1, 23)[0]);
    GridWitness w = construct_v(p);
    CHECK(w.all_pass());
  }
}

TEST_CASE("factor_shift") {
  auto q81 = FolnerElement::from_exponents(FolnerSpec::phi_rk(2, 3), {{3, 4}});
  CHECK(factor_shift(2, 3, q81) == 1);
  auto q56 = FolnerElement::from_exponents(
      FolnerSpec::phi_rkp(2, 5, BinaryQuadraticForm{1, 0, 1}), {{5, 6}});
  CHECK(factor_shift(2, 5, q56) == 1);
  // postconditions on 100 sampled elements
  auto spec = FolnerSpec::phi_rk(3, 7);
  Int prim = 2 * 3 * 5 * 7;
  Int mod_r = pow_int(2, 3) * pow_int(3, 3);
  for (const auto& Q : sample_folner(spec, 100, 31)) {
    Int v = factor_shift(3, 7, Q);
    CHECK(gcd(v, prim) == 1);
    CHECK(mod_floor(v * Q.value, mod_r) == 1);
  }
  try {
    factor_shift(2, 3, FolnerElement::from_exponents(FolnerSpec::phi_r(3), {{2, 4}, {3, 4}}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.name() == "WrongFamily");
  }
}

TEST_CASE("witness JSON export re-verifies") {
  GridParams params = demo_params_case1(6, 7, 15);
  GridWitness w = construct_v(params);
  std::string payload = witness_to_json(params, w);
  auto report = witness_verify_json(payload);
  CHECK(!report.empty());
  for (const auto& c : report) CHECK(c.pass);
}

TEST_CASE("tampered witness records are rejected on re-verification") {
  GridParams params = demo_params_case1(6, 7, 15);
  GridWitness w = construct_v(params);
  std::string payload = witness_to_json(params, w);
  // bump the last digit of v inside the record
  std::string needle = "\"v\": \"";
  auto pos = payload.find(needle);
  REQUIRE(pos != std::string::npos);
  auto end = payload.find('"', pos + needle.size());
  char& last = payload[end - 1];
  last = last == '7' ? '8' : '7';
  auto report = witness_verify_json(payload);
  bool any_fail = false;
  for (const auto& c : report) any_fail = any_fail || !c.pass;
  CHECK(any_fail);
}
