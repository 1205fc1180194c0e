#include "pretlab/equations.hpp"

#include <array>
#include <cmath>

#include "pretlab/error.hpp"

namespace pretlab {

std::string rado_class_name(RadoClass c) {
  switch (c) {
    case RadoClass::AC:
      return "AC";
    case RadoClass::BC:
      return "BC";
    case RadoClass::APlusB:
      return "APlusB";
    case RadoClass::NotRado:
      return "NotRado";
  }
  return "?";
}

RadoTriple classify_rado(long a, long b, long c) {
  if (a < 1 || b < 1 || c < 1) raise("DomainError", "triple entries must be positive");
  RadoTriple t{a, b, c, RadoClass::NotRado};
  if (a == c)
    t.cls = RadoClass::AC;
  else if (b == c)
    t.cls = RadoClass::BC;
  else if (a + b == c)
    t.cls = RadoClass::APlusB;
  return t;
}

namespace {

// Coefficients of the quartic (a X^2 + b Y^2 - c Z^2) on the monomial basis
// m^4, m^3 n, m^2 n^2, m n^3, n^4; must vanish identically.
std::array<Int, 5> square_coeffs(const BinaryQuadraticForm& P) {
  return {P.alpha * P.alpha, 2 * P.alpha * P.beta, P.beta * P.beta + 2 * P.alpha * P.gamma,
          2 * P.beta * P.gamma, P.gamma * P.gamma};
}

void check_identity(const FormTriple& ft) {
  const BinaryQuadraticForm& X = ft.form_for(Coordinate::X);
  const BinaryQuadraticForm& Y = ft.form_for(Coordinate::Y);
  const BinaryQuadraticForm& Z = ft.form_for(Coordinate::Z);
  auto sx = square_coeffs(X), sy = square_coeffs(Y), sz = square_coeffs(Z);
  for (int i = 0; i < 5; ++i) {
    Int coeff = Int(ft.triple.a) * sx[i] + Int(ft.triple.b) * sy[i] - Int(ft.triple.c) * sz[i];
    if (coeff != 0) raise("InternalError", "form triple identity fails symbolically");
  }
}

}  // namespace

const BinaryQuadraticForm& FormTriple::form_for(Coordinate c) const {
  for (int i = 0; i < 3; ++i)
    if (coord[i] == c) return i == 0 ? P1 : (i == 1 ? P2 : P3);
  raise("InternalError", "coordinate missing from map");
}

FormTriple forms_for(const RadoTriple& triple) {
  if (triple.cls == RadoClass::NotRado)
    raise("NotRadoTriple", "no form family for a non-Rado triple");
  FormTriple ft;
  ft.triple = triple;
  Int a(triple.a), b(triple.b);
  Int ab = a * b;
  switch (triple.cls) {
    case RadoClass::AC:
      ft.P1 = {0, 2 * a, 0};
      ft.P2 = {1, 0, -ab};
      ft.P3 = {1, 0, ab};
      if (triple.a == triple.b) {
        // a = b: both assignments solve the equation; keep the classical
        // Pythagorean presentation P1 -> x.
        ft.coord[0] = Coordinate::X;
        ft.coord[1] = Coordinate::Y;
      } else {
        ft.coord[0] = Coordinate::Y;
        ft.coord[1] = Coordinate::X;
      }
      ft.coord[2] = Coordinate::Z;
      break;
    case RadoClass::BC:
      // The a = c family with (a, b) swapped; x and y swap roles with it.
      ft.P1 = {0, 2 * b, 0};
      ft.P2 = {1, 0, -ab};
      ft.P3 = {1, 0, ab};
      ft.coord[0] = Coordinate::X;
      ft.coord[1] = Coordinate::Y;
      ft.coord[2] = Coordinate::Z;
      break;
    case RadoClass::APlusB:
      ft.P1 = {1, 0, ab};
      ft.P2 = {1, -2 * b, -ab};
      ft.P3 = {1, 2 * a, -ab};
      ft.coord[0] = Coordinate::Z;
      ft.coord[1] = Coordinate::X;
      ft.coord[2] = Coordinate::Y;
      break;
    case RadoClass::NotRado:
      break;
  }
  check_identity(ft);
  return ft;
}

SolutionValue solution(const RadoTriple& triple, const Int& k, const Int& m, const Int& n) {
  if (triple.cls == RadoClass::NotRado)
    raise("NotRadoTriple", "no parametrized solutions for a non-Rado triple");
  if (k < 1 || m < 1 || n < 1) raise("DomainError", "k, m, n must be >= 1");
  Int a(triple.a), b(triple.b), c(triple.c);
  Int ab = a * b;
  SolutionValue s;
  switch (triple.cls) {
    case RadoClass::AC:
      s.x = k * (m * m - ab * n * n);
      s.y = k * 2 * a * m * n;
      s.z = k * (m * m + ab * n * n);
      break;
    case RadoClass::BC:
      s.x = k * 2 * b * m * n;
      s.y = k * (m * m - ab * n * n);
      s.z = k * (m * m + ab * n * n);
      break;
    case RadoClass::APlusB:
      s.x = k * (m * m - 2 * b * m * n - ab * n * n);
      s.y = k * (m * m + 2 * a * m * n - ab * n * n);
      s.z = k * (m * m + ab * n * n);
      break;
    case RadoClass::NotRado:
      break;
  }
  if (a * s.x * s.x + b * s.y * s.y != c * s.z * s.z)
    raise("InternalError", "parametrization identity violated");
  s.positive = s.x > 0 && s.y > 0 && s.z > 0;
  s.distinct = s.x != s.y && s.y != s.z && s.x != s.z;
  return s;
}

double ConeSlope::approx() const {
  double l = mpz_get_d(lin.get_mpz_t());
  double q = quad > 0 ? std::sqrt(mpz_get_d(quad.get_mpz_t())) : 0.0;
  return std::max(l, q);
}

SDeltaSpec s_delta_spec_for(const RadoTriple& triple, double delta) {
  SDeltaSpec spec;
  spec.forms = forms_for(triple);
  spec.delta = delta;
  Int a(triple.a), b(triple.b);
  switch (triple.cls) {
    case RadoClass::AC:
      spec.alpha = ConeSlope{0, 4 * a * b};  // 2 sqrt(ab)
      break;
    case RadoClass::BC:
      spec.alpha = ConeSlope{0, 4 * a * b};
      break;
    case RadoClass::APlusB:
      // 2 * gamma with gamma = max{4b, sqrt(2ab)}
      spec.alpha = ConeSlope{8 * b, 8 * a * b};
      break;
    case RadoClass::NotRado:
      raise("NotRadoTriple", "no S_delta family for a non-Rado triple");
  }
  return spec;
}

bool s_delta_contains(const SDeltaSpec& spec, const Int& m, const Int& n) {
  if (m < 1 || n < 1) raise("DomainError", "m, n must be >= 1");
  if (!spec.alpha.admits(m, n)) return false;
  for (const BinaryQuadraticForm* P : {&spec.forms.P1, &spec.forms.P2, &spec.forms.P3}) {
    Int value = (*P)(m, n);
    if (value <= 0)
      raise("NonpositiveFormValue",
            "form " + P->str() + " is not positive at (" + m.get_str() + "," + n.get_str() + ")");
    double chord = UnitComplex(log_int(value)).chord_to_one();
    if (chord > spec.delta) return false;
  }
  return true;
}

namespace {

// Smallest m with m > alpha n, exact.
Int cone_m_start(const ConeSlope& alpha, const Int& n) {
  Int start = alpha.lin * n + 1;
  if (alpha.quad > 0) {
    Int root = isqrt(alpha.quad * n * n);
    // strict: m^2 > quad n^2
    Int cand = root + 1;
    if (cand * cand <= alpha.quad * n * n) ++cand;
    start = std::max(start, cand);
  }
  return std::max(start, Int(1));
}

}  // namespace

DensityResult s_delta_density(const SDeltaSpec& spec, long N) {
  if (N < 1) raise("DomainError", "N must be >= 1");
  DensityResult out;
  for (long n = 1; n <= N; ++n) {
    Int start = cone_m_start(spec.alpha, Int(n));
    if (start > N) continue;
    for (long m = static_cast<long>(start.get_si()); m <= N; ++m)
      if (s_delta_contains(spec, Int(m), Int(n))) ++out.count;
  }
  out.ratio = static_cast<double>(out.count) / (static_cast<double>(N) * static_cast<double>(N));
  return out;
}

std::uint64_t cone_count(const ConeSlope& alpha, long N) {
  std::uint64_t count = 0;
  for (long n = 1; n <= N; ++n) {
    Int start = cone_m_start(alpha, Int(n));
    if (start > N) continue;
    count += static_cast<std::uint64_t>(N - start.get_si() + 1);
  }
  return count;
}

bool in_arc_I_delta(const UnitComplex& value, double delta_arc) {
  // Open arc, boundary rejected at tolerance 1e-12.
  return std::abs(value.signed_angle()) < kTwoPi * delta_arc - 1e-12;
}

namespace {

std::vector<FastEval> make_evals(const std::vector<MultiplicativeFunction>& fs) {
  std::vector<FastEval> evals;
  evals.reserve(fs.size());
  for (const auto& f : fs) evals.emplace_back(f);
  return evals;
}

bool all_in_arc(const std::vector<FastEval>& evals, double delta_arc, const Int& x, const Int& y,
                const Int& z) {
  for (const auto& fe : evals) {
    if (!in_arc_I_delta(fe(x), delta_arc)) return false;
    if (!in_arc_I_delta(fe(y), delta_arc)) return false;
    if (!in_arc_I_delta(fe(z), delta_arc)) return false;
  }
  return true;
}

}  // namespace

std::optional<MonoWitness> monochromatic_search(const RadoTriple& triple,
                                                const std::vector<MultiplicativeFunction>& fs,
                                                double delta_arc, long k_max, long m_max) {
  if (triple.cls == RadoClass::NotRado) raise("NotRadoTriple", "search needs a Rado triple");
  if (delta_arc <= 0.0 || delta_arc >= 0.5)
    raise("DomainError", "arc half-width must lie in (0, 1/2) as a circle fraction");
  std::vector<FastEval> evals = make_evals(fs);
  SearchStats stats;
  for (long k = 1; k <= k_max; ++k) {
    for (long m = 1; m <= m_max; ++m) {
      for (long n = 1; n <= m_max; ++n) {
        ++stats.candidates;
        SolutionValue s = solution(triple, Int(k), Int(m), Int(n));
        if (!s.positive || !s.distinct) continue;
        ++stats.solutions_seen;
        if (all_in_arc(evals, delta_arc, s.x, s.y, s.z))
          return MonoWitness{s.x, s.y, s.z, stats};
      }
    }
  }
  return std::nullopt;
}

std::optional<MonoWitness> monochromatic_search_raw(const RadoTriple& triple,
                                                    const std::vector<MultiplicativeFunction>& fs,
                                                    double delta_arc, long bound) {
  if (triple.cls == RadoClass::NotRado) raise("NotRadoTriple", "search needs a Rado triple");
  std::vector<FastEval> evals = make_evals(fs);
  SearchStats stats;
  Int a(triple.a), b(triple.b), c(triple.c);
  for (long x = 1; x <= bound; ++x) {
    for (long y = 1; y <= bound; ++y) {
      ++stats.candidates;
      Int t = a * Int(x) * Int(x) + b * Int(y) * Int(y);
      if (t % c != 0) continue;
      Int zz = t / c;
      Int z = isqrt(zz);
      if (z * z != zz || z < 1) continue;
      if (Int(x) == Int(y) || Int(y) == z || Int(x) == z) continue;
      ++stats.solutions_seen;
      if (all_in_arc(evals, delta_arc, Int(x), Int(y), z))
        return MonoWitness{Int(x), Int(y), z, stats};
    }
  }
  return std::nullopt;
}

}  // namespace pretlab
