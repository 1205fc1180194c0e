#include <doctest.h>

#include "pretlab/equations.hpp"
#include "pretlab/error.hpp"

using namespace pretlab;

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MultiplicativeFunction chi8_lift() {
  // n -> (-1)^((n^2-1)/8): the character mod 8 with chi(7) = 1, chi(3) = chi(5) = -1.
  for (const auto& chi : characters_mod(8)) {
    if (chi.value_or_zero(3).real() < 0 && chi.value_or_zero(5).real() < 0 &&
        chi.value_or_zero(7).real() > 0)
      return mf_character_lift(chi, {{Int(2), UnitComplex(0.0)}});
  }
  throw std::logic_error("character not found");
}

}  // namespace

TEST_CASE("classify_rado") {
  CHECK(classify_rado(1, 1, 1).cls == RadoClass::AC);
  CHECK(classify_rado(1, 1, 4).cls == RadoClass::NotRado);
  CHECK(classify_rado(9, 16, 25).cls == RadoClass::APlusB);
  CHECK(classify_rado(2, 3, 3).cls == RadoClass::BC);
  CHECK(classify_rado(5, 2, 5).cls == RadoClass::AC);  // AC wins ties
}

TEST_CASE("forms_for families and coordinate maps") {
  // (1,1,1): classical Pythagorean presentation, P1 -> x
  FormTriple f = forms_for(classify_rado(1, 1, 1));
  CHECK(f.P1 == BinaryQuadraticForm{0, 2, 0});
  CHECK(f.P2 == BinaryQuadraticForm{1, 0, -1});
  CHECK(f.P3 == BinaryQuadraticForm{1, 0, 1});
  CHECK(f.coord[0] == Coordinate::X);
  CHECK(f.coord[1] == Coordinate::Y);
  CHECK(f.coord[2] == Coordinate::Z);

  // (1,1,2): family (m^2+n^2, m^2-2mn-n^2, m^2+2mn-n^2) mapped to (z,x,y)
  f = forms_for(classify_rado(1, 1, 2));
  CHECK(f.P1 == BinaryQuadraticForm{1, 0, 1});
  CHECK(f.P2 == BinaryQuadraticForm{1, -2, -1});
  CHECK(f.P3 == BinaryQuadraticForm{1, 2, -1});
  CHECK(f.coord[0] == Coordinate::Z);
  CHECK(f.coord[1] == Coordinate::X);
  CHECK(f.coord[2] == Coordinate::Y);

  // (1,2,1): x = m^2-2n^2, y = 2mn, z = m^2+2n^2
  f = forms_for(classify_rado(1, 2, 1));
  CHECK(f.form_for(Coordinate::X) == BinaryQuadraticForm{1, 0, -2});
  CHECK(f.form_for(Coordinate::Y) == BinaryQuadraticForm{0, 2, 0});
  CHECK(f.form_for(Coordinate::Z) == BinaryQuadraticForm{1, 0, 2});

  CHECK_THROWS_AS(forms_for(classify_rado(1, 1, 4)), Error);
}

TEST_CASE("form triples construct for every class, identity checked symbolically") {
  for (auto [a, b, c] : {std::tuple<long, long, long>{1, 1, 1}, {7, 3, 7}, {2, 5, 5},
                         {4, 9, 13}, {9, 16, 25}, {3, 1, 4}}) {
    FormTriple ft = forms_for(classify_rado(a, b, c));
    // spot-check the identity numerically as well
    for (long m = 1; m <= 5; ++m)
      for (long n = 1; n <= 5; ++n) {
        Int X = ft.form_for(Coordinate::X)(m, n);
        Int Y = ft.form_for(Coordinate::Y)(m, n);
        Int Z = ft.form_for(Coordinate::Z)(m, n);
        CHECK(Int(a) * X * X + Int(b) * Y * Y == Int(c) * Z * Z);
      }
  }
}

TEST_CASE("solution examples") {
  SolutionValue s = solution(classify_rado(1, 1, 1), 1, 2, 1);
  CHECK(s.x == 3);
  CHECK(s.y == 4);
  CHECK(s.z == 5);
  CHECK(s.positive);
  CHECK(s.distinct);

  s = solution(classify_rado(1, 2, 1), 1, 2, 1);
  CHECK(s.x == 2);
  CHECK(s.y == 4);
  CHECK(s.z == 6);

  s = solution(classify_rado(1, 1, 2), 1, 3, 1);
  CHECK(s.x == 2);
  CHECK(s.y == 14);
  CHECK(s.z == 10);

  // non-positive coordinates flagged, not errors
  s = solution(classify_rado(1, 1, 1), 1, 1, 1);
  CHECK_FALSE(s.positive);
}

TEST_CASE("parametrization identity on random triples") {
  std::uint64_t state = 7;
  for (int i = 0; i < 1000; ++i) {
    long cls = splitmix(state) % 3;
    long a, b, c;
    if (cls == 0) {
      a = 1 + splitmix(state) % 50;
      b = 1 + splitmix(state) % 50;
      c = a;
    } else if (cls == 1) {
      a = 1 + splitmix(state) % 50;
      b = 1 + splitmix(state) % 50;
      c = b;
    } else {
      a = 1 + splitmix(state) % 49;
      b = 1 + splitmix(state) % (50 - a);
      c = a + b;
    }
    RadoTriple t = classify_rado(a, b, c);
    Int k(1 + splitmix(state) % 1000), m(1 + splitmix(state) % 1000),
        n(1 + splitmix(state) % 1000);
    SolutionValue s = solution(t, k, m, n);
    CHECK(Int(a) * s.x * s.x + Int(b) * s.y * s.y == Int(c) * s.z * s.z);
  }
}

TEST_CASE("S_delta membership") {
  RadoTriple py = classify_rado(1, 1, 1);
  SDeltaSpec wide = s_delta_spec_for(py, 2.0);
  // inside the cone, delta = 2 always passes
  CHECK(s_delta_contains(wide, 7, 1));
  CHECK(s_delta_contains(wide, 1000, 3));
  // cone violated
  CHECK_FALSE(s_delta_contains(wide, 3, 2));
  CHECK_FALSE(s_delta_contains(wide, 2, 1));  // m = 2n is not m > 2n

  // the smallest admissible point at delta = 0.3 in row-major order matches a scan
  SDeltaSpec tight = s_delta_spec_for(py, 0.3);
  long fm = 0, fn = 0;
  for (long m = 1; m <= 400 && fm == 0; ++m)
    for (long n = 1; n <= 400 && fm == 0; ++n) {
      if (!tight.alpha.admits(Int(m), Int(n))) continue;
      if (s_delta_contains(tight, m, n)) {
        fm = m;
        fn = n;
      }
    }
  REQUIRE(fm > 0);
  // reproducible
  CHECK(s_delta_contains(tight, fm, fn));
  for (long n = 1; n < fn; ++n)
    if (tight.alpha.admits(Int(fm), Int(n))) CHECK_FALSE(s_delta_contains(tight, fm, n));
}

TEST_CASE("NonpositiveFormValue flags a bad cone") {
  // A cone slope that is too shallow lets P2 = m^2 - n^2 go nonpositive.
  SDeltaSpec broken = s_delta_spec_for(classify_rado(1, 1, 1), 2.0);
  broken.alpha = ConeSlope{0, 0};  // admits every (m, n)
  try {
    s_delta_contains(broken, 1, 2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.name() == "NonpositiveFormValue");
  }
}

TEST_CASE("S_delta density: delta = 2 equals the closed-form cone count") {
  RadoTriple py = classify_rado(1, 1, 1);
  SDeltaSpec wide = s_delta_spec_for(py, 2.0);
  for (long N : {1L, 7L, 100L, 500L}) {
    DensityResult res = s_delta_density(wide, N);
    // exact count of {m > 2n} over [N]^2: sum over n < N/2 of (N - 2n)
    std::uint64_t closed = 0;
    for (long n = 1; 2 * n < N; ++n) closed += static_cast<std::uint64_t>(N - 2 * n);
    CHECK(res.count == closed);
    CHECK(res.count == cone_count(wide.alpha, N));
  }
  DensityResult tiny = s_delta_density(wide, 1);
  CHECK(tiny.count == 0);  // (1,1) fails m > 2n
}

TEST_CASE("dilation slack: chord(P(k0 m, k0 n)) <= chord(P(m,n)) + chord(k0^2)") {
  RadoTriple py = classify_rado(1, 1, 1);
  FormTriple forms = forms_for(py);
  std::uint64_t state = 12;
  for (int i = 0; i < 500; ++i) {
    Int m(1 + splitmix(state) % 1000), n(1 + splitmix(state) % 1000);
    Int k0(1 + splitmix(state) % 50);
    for (const BinaryQuadraticForm* P : {&forms.P1, &forms.P2, &forms.P3}) {
      Int val = (*P)(m, n);
      if (val <= 0) continue;
      double chord_mn = UnitComplex(log_int(val)).chord_to_one();
      double chord_scaled = UnitComplex(log_int(val * k0 * k0)).chord_to_one();
      double chord_k2 = UnitComplex(log_int(k0 * k0)).chord_to_one();
      CHECK(chord_scaled <= chord_mn + chord_k2 + 1e-9);
    }
  }
}

TEST_CASE("monochromatic search without functions finds (3,4,5)") {
  auto hit = monochromatic_search(classify_rado(1, 1, 1), {}, 0.1, 5, 10);
  REQUIRE(hit.has_value());
  CHECK(hit->x == 3);
  CHECK(hit->y == 4);
  CHECK(hit->z == 5);
}

TEST_CASE("monochromatic search, mod-8 coloring of x^2 + y^2 = 2 z^2") {
  auto fs = std::vector<MultiplicativeFunction>{chi8_lift()};
  auto raw = monochromatic_search_raw(classify_rado(1, 1, 2), fs, 0.1, 30);
  REQUIRE(raw.has_value());
  CHECK(raw->x == 7);
  CHECK(raw->y == 23);
  CHECK(raw->z == 17);
  // independent recheck: equation and arc membership
  CHECK(raw->x * raw->x + raw->y * raw->y == 2 * raw->z * raw->z);
  for (const auto& f : fs)
    for (const Int* w : {&raw->x, &raw->y, &raw->z})
      CHECK(std::abs(eval(f, *w).signed_angle()) < kTwoPi * 0.1);

  auto param = monochromatic_search(classify_rado(1, 1, 2), fs, 0.1, 5, 30);
  REQUIRE(param.has_value());
  CHECK(Int(1) * param->x * param->x + param->y * param->y == 2 * param->z * param->z);
}

TEST_CASE("monochromatic search NotFound within tiny bounds") {
  auto res = monochromatic_search(classify_rado(1, 1, 1), {mf_one()}, 0.1, 1, 1);
  CHECK_FALSE(res.has_value());
  CHECK_THROWS_AS(monochromatic_search(classify_rado(1, 1, 4), {}, 0.1, 5, 5), Error);
}
