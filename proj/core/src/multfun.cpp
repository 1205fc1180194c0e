#include "pretlab/multfun.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "pretlab/error.hpp"

namespace pretlab {

namespace {

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

// One cyclic component of (Z/q)^x: a generator (embedded mod q) and its order.
struct UnitGroupComponent {
  long generator;
  long order;
};

struct UnitGroupData {
  long q;
  std::vector<UnitGroupComponent> components;
  long exponent;  // lcm of component orders
  // Discrete log of every unit: unit -> exponent tuple index products.
  // units[i] = product of generator^tuple[i][j], enumerated in odometer order.
  std::vector<long> units;
  std::vector<std::vector<long>> tuples;
};

long pow_mod_long(long base, long exp, long mod) {
  if (mod == 1) return 0;
  long long r = 1, b = base % mod;
  while (exp > 0) {
    if (exp & 1) r = r * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<long>(r);
}

long primitive_root_mod_prime_power(long p, long e) {
  long pe = 1;
  for (long i = 0; i < e; ++i) pe *= p;
  long phi = pe / p * (p - 1);
  auto fact = factorize(Int(phi));
  for (long g = 2; g < pe; ++g) {
    if (std::gcd(g, pe) != 1) continue;
    bool ok = true;
    for (const auto& f : fact.factors) {
      long fp = f.prime.get_si();
      if (pow_mod_long(g, phi / fp, pe) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  raise("InternalError", "no primitive root found");
}

// CRT-embed x (a residue mod m) so the result is x mod m and 1 mod q/m.
long embed_unit(long x, long m, long q) {
  if (m == q) return x % q;
  long rest = q / m;
  Congruence c = crt_solve({{Int(x), Int(m)}, {Int(1), Int(rest)}});
  return c.residue.get_si();
}

UnitGroupData build_unit_group(long q) {
  UnitGroupData data;
  data.q = q;
  auto fact = factorize(Int(q));
  for (const auto& f : fact.factors) {
    long p = f.prime.get_si();
    long e = static_cast<long>(f.exponent);
    long pe = 1;
    for (long i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 1) continue;  // trivial group
      if (e == 2) {
        data.components.push_back({embed_unit(3, 4, q), 2});
      } else {
        data.components.push_back({embed_unit(pe - 1, pe, q), 2});
        data.components.push_back({embed_unit(5, pe, q), pe / 4});
      }
    } else {
      long g = primitive_root_mod_prime_power(p, e);
      data.components.push_back({embed_unit(g, pe, q), pe / p * (p - 1)});
    }
  }
  data.exponent = 1;
  for (const auto& c : data.components) data.exponent = lcm_long(data.exponent, c.order);
  // Enumerate all units in odometer order over generator exponents.
  std::vector<long> tuple(data.components.size(), 0);
  while (true) {
    long long u = 1;
    for (std::size_t i = 0; i < data.components.size(); ++i)
      u = u * pow_mod_long(data.components[i].generator, tuple[i], q) % std::max(q, 1L);
    if (q == 1) u = 0;
    data.units.push_back(static_cast<long>(u));
    data.tuples.push_back(tuple);
    std::size_t i = 0;
    for (; i < tuple.size(); ++i) {
      if (++tuple[i] < data.components[i].order) break;
      tuple[i] = 0;
    }
    if (i == tuple.size()) break;
  }
  return data;
}

std::mutex g_char_mutex;
std::unordered_map<long, std::vector<DirichletCharacter>> g_char_cache;

}  // namespace

UnitComplex DirichletCharacter::value(const Int& n) const {
  long k = table_[residue(n)];
  if (k < 0) raise("DomainError", "character value requested at a non-unit");
  return UnitComplex::e(static_cast<double>(k) / static_cast<double>(order_));
}

std::complex<double> DirichletCharacter::value_or_zero(const Int& n) const {
  long k = table_[residue(n)];
  if (k < 0) return {0.0, 0.0};
  return UnitComplex::e(static_cast<double>(k) / static_cast<double>(order_)).value();
}

bool DirichletCharacter::is_principal() const {
  for (long k : table_)
    if (k > 0) return false;
  return true;
}

bool DirichletCharacter::same_values(const DirichletCharacter& o) const {
  if (table_.size() != o.table_.size()) return false;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    long a = table_[i], b = o.table_[i];
    if ((a < 0) != (b < 0)) return false;
    if (a >= 0) {
      // compare a/order == b/o.order exactly
      if (static_cast<long long>(a) * o.order_ != static_cast<long long>(b) * order_)
        return false;
    }
  }
  return true;
}

DirichletCharacter DirichletCharacter::conjugate() const {
  std::vector<long> t(table_.size(), -1);
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i] >= 0) t[i] = (order_ - table_[i]) % order_;
  return DirichletCharacter(q_, order_, std::move(t));
}

DirichletCharacter DirichletCharacter::power(long k) const {
  std::vector<long> t(table_.size(), -1);
  long kk = ((k % order_) + order_) % order_;
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i] >= 0)
      t[i] = static_cast<long>((static_cast<long long>(table_[i]) * kk) % order_);
  return DirichletCharacter(q_, order_, std::move(t));
}

const std::vector<DirichletCharacter>& characters_mod(long q) {
  if (q < 1) raise("DomainError", "modulus must be >= 1");
  std::lock_guard<std::mutex> lock(g_char_mutex);
  auto it = g_char_cache.find(q);
  if (it != g_char_cache.end()) return it->second;

  std::vector<DirichletCharacter> chars;
  UnitGroupData grp = build_unit_group(q);
  long D = grp.exponent;
  // Character tuples (a_i) in odometer order; character index is the odometer
  // position, so index 0 (all a_i = 0) is the principal character.
  std::vector<long> a(grp.components.size(), 0);
  long index = 0;
  while (true) {
    std::vector<long> table(static_cast<std::size_t>(q), -1);
    if (q == 1) table[0] = 0;
    for (std::size_t u = 0; u < grp.units.size(); ++u) {
      long long k = 0;
      for (std::size_t i = 0; i < grp.components.size(); ++i)
        k += static_cast<long long>(a[i]) * grp.tuples[u][i] * (D / grp.components[i].order);
      table[grp.units[u]] = static_cast<long>(k % D);
    }
    chars.emplace_back(q, D, std::move(table), index);
    ++index;
    std::size_t i = 0;
    for (; i < a.size(); ++i) {
      if (++a[i] < grp.components[i].order) break;
      a[i] = 0;
    }
    if (i == a.size()) break;
  }
  return g_char_cache.emplace(q, std::move(chars)).first->second;
}

DirichletCharacter product_character(const DirichletCharacter& a, const DirichletCharacter& b) {
  long q = lcm_long(a.modulus(), b.modulus());
  long D = lcm_long(a.order(), b.order());
  std::vector<long> table(static_cast<std::size_t>(q), -1);
  for (long n = 0; n < q; ++n) {
    if (std::gcd(n, q) != 1 && q != 1) continue;
    long ka = a.table()[n % a.modulus()];
    long kb = b.table()[n % b.modulus()];
    table[n] = static_cast<long>((static_cast<long long>(ka) * (D / a.order()) +
                                  static_cast<long long>(kb) * (D / b.order())) %
                                 D);
  }
  if (q == 1) table[0] = 0;
  return DirichletCharacter(q, D, std::move(table));
}

long conductor(const DirichletCharacter& chi) {
  long q = chi.modulus();
  for (long d = 1; d <= q; ++d) {
    if (q % d != 0) continue;
    bool periodic = true;
    for (long n = 0; n < q && periodic; ++n)
      periodic = chi.table()[(n + d) % q] == chi.table()[n];
    if (periodic) return d;
  }
  return q;
}

long classical_conductor(const DirichletCharacter& chi) {
  long q = chi.modulus();
  for (long d = 1; d <= q; ++d) {
    if (q % d != 0) continue;
    // chi is induced mod d iff chi(n) = 1 whenever n = 1 (mod d), (n, q) = 1.
    bool induced = true;
    for (long n = 1; n < q + 1 && induced; ++n) {
      if (n % d != 1 % d) continue;
      if (std::gcd(n % q == 0 ? q : n % q, q) != 1 && q != 1) continue;
      induced = chi.table()[n % q] == 0;
    }
    if (induced) return d;
  }
  return q;
}

UnitComplex prime_rule_value(PrimeRule rule, const Int& p) {
  switch (rule) {
    case PrimeRule::EInvLogLog: {
      if (p < 3) return UnitComplex::one();
      double lp = std::log(log_int(p));
      return UnitComplex::e(1.0 / lp);
    }
  }
  raise("InternalError", "unknown prime rule");
}

std::string prime_rule_name(PrimeRule rule) {
  switch (rule) {
    case PrimeRule::EInvLogLog:
      return "e_inv_loglog";
  }
  return "?";
}

PrimeRule prime_rule_from_name(const std::string& name) {
  if (name == "e_inv_loglog") return PrimeRule::EInvLogLog;
  raise("DomainError", "unknown prime rule: " + name);
}

namespace {
MultiplicativeFunction make_node(MFNode n) {
  return std::make_shared<const MFNode>(std::move(n));
}
}  // namespace

MultiplicativeFunction mf_one() {
  MFNode n;
  n.kind = MFNode::Kind::One;
  return make_node(std::move(n));
}

MultiplicativeFunction mf_archimedean(double t) {
  MFNode n;
  n.kind = MFNode::Kind::Archimedean;
  n.t = t;
  return make_node(std::move(n));
}

MultiplicativeFunction mf_character_lift(const DirichletCharacter& chi,
                                         const std::map<Int, UnitComplex>& fill) {
  for (const auto& f : factorize(Int(chi.modulus())).factors)
    if (!fill.contains(f.prime))
      raise("MissingFill", "no fill value at prime " + f.prime.get_str() +
                               " dividing modulus " + std::to_string(chi.modulus()));
  MFNode n;
  n.kind = MFNode::Kind::CharacterLift;
  n.chi = chi;
  n.fill = fill;
  return make_node(std::move(n));
}

MultiplicativeFunction mf_prime_formula(PrimeRule rule) {
  MFNode n;
  n.kind = MFNode::Kind::PrimeFormula;
  n.rule = rule;
  return make_node(std::move(n));
}

MultiplicativeFunction mf_tweaked(MultiplicativeFunction base,
                                  const std::map<Int, UnitComplex>& overrides) {
  for (const auto& [p, v] : overrides)
    if (!is_prime(p)) raise("DomainError", "tweak key " + p.get_str() + " is not prime");
  MFNode n;
  n.kind = MFNode::Kind::Tweaked;
  n.base = std::move(base);
  n.overrides = overrides;
  return make_node(std::move(n));
}

MultiplicativeFunction mf_product(MultiplicativeFunction f, MultiplicativeFunction g) {
  MFNode n;
  n.kind = MFNode::Kind::Product;
  n.base = std::move(f);
  n.other = std::move(g);
  return make_node(std::move(n));
}

MultiplicativeFunction mf_power(MultiplicativeFunction f, long k) {
  MFNode n;
  n.kind = MFNode::Kind::Power;
  n.base = std::move(f);
  n.exponent = k;
  return make_node(std::move(n));
}

MultiplicativeFunction mf_conjugate(MultiplicativeFunction f) {
  MFNode n;
  n.kind = MFNode::Kind::Conjugate;
  n.base = std::move(f);
  return make_node(std::move(n));
}

UnitComplex eval_at_prime(const MultiplicativeFunction& f, const Int& p) {
  switch (f->kind) {
    case MFNode::Kind::One:
      return UnitComplex::one();
    case MFNode::Kind::Archimedean:
      return unit_power(p, f->t);
    case MFNode::Kind::CharacterLift: {
      auto it = f->fill.find(p);
      if (it != f->fill.end()) return it->second;
      if (f->chi.is_zero_at(p))
        raise("MissingFill", "no fill at prime " + p.get_str());
      return f->chi.value(p);
    }
    case MFNode::Kind::PrimeFormula:
      return prime_rule_value(f->rule, p);
    case MFNode::Kind::Tweaked: {
      auto it = f->overrides.find(p);
      if (it != f->overrides.end()) return it->second;
      return eval_at_prime(f->base, p);
    }
    case MFNode::Kind::Product:
      return eval_at_prime(f->base, p) * eval_at_prime(f->other, p);
    case MFNode::Kind::Power:
      return eval_at_prime(f->base, p).pow(f->exponent);
    case MFNode::Kind::Conjugate:
      return eval_at_prime(f->base, p).conj();
  }
  raise("InternalError", "bad descriptor node");
}

namespace {

struct CanonParts {
  DirichletCharacter chi;
  double t = 0.0;
  std::set<Int> exceptional;
  bool ok = true;
};

CanonParts canon_parts(const MultiplicativeFunction& f) {
  CanonParts out;
  switch (f->kind) {
    case MFNode::Kind::One:
      out.chi = characters_mod(1)[0];
      return out;
    case MFNode::Kind::Archimedean:
      out.chi = characters_mod(1)[0];
      out.t = f->t;
      return out;
    case MFNode::Kind::CharacterLift: {
      out.chi = f->chi;
      for (const auto& [p, v] : f->fill) out.exceptional.insert(p);
      return out;
    }
    case MFNode::Kind::PrimeFormula:
      out.ok = false;
      return out;
    case MFNode::Kind::Tweaked: {
      out = canon_parts(f->base);
      for (const auto& [p, v] : f->overrides) out.exceptional.insert(p);
      return out;
    }
    case MFNode::Kind::Product: {
      CanonParts a = canon_parts(f->base);
      CanonParts b = canon_parts(f->other);
      if (!a.ok || !b.ok) {
        out.ok = false;
        return out;
      }
      out.chi = product_character(a.chi, b.chi);
      out.t = a.t + b.t;
      out.exceptional = a.exceptional;
      out.exceptional.insert(b.exceptional.begin(), b.exceptional.end());
      return out;
    }
    case MFNode::Kind::Power: {
      out = canon_parts(f->base);
      if (!out.ok) return out;
      out.chi = out.chi.power(f->exponent);
      out.t *= static_cast<double>(f->exponent);
      return out;
    }
    case MFNode::Kind::Conjugate: {
      out = canon_parts(f->base);
      if (!out.ok) return out;
      out.chi = out.chi.conjugate();
      out.t = -out.t;
      return out;
    }
  }
  out.ok = false;
  return out;
}

}  // namespace

std::optional<PretensionForm> canonical_form(const MultiplicativeFunction& f) {
  CanonParts parts = canon_parts(f);
  if (!parts.ok) return std::nullopt;
  PretensionForm form;
  form.chi = parts.chi;
  form.t = parts.t;
  for (const auto& pp : factorize(Int(parts.chi.modulus())).factors)
    parts.exceptional.insert(pp.prime);
  for (const auto& p : parts.exceptional) form.exceptional[p] = eval_at_prime(f, p);
  return form;
}

FastEval::FastEval(MultiplicativeFunction f) : f_(std::move(f)), form_(canonical_form(f_)) {}

UnitComplex FastEval::operator()(const Int& n) const {
  if (n < 1) raise("DomainError", "eval requires n >= 1");
  if (n == 1) return UnitComplex::one();
  if (form_) {
    UnitComplex acc;
    Int rest = n;
    for (const auto& [p, value] : form_->exceptional) {
      if (rest % p != 0) continue;
      unsigned long e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      acc = acc * value.pow(static_cast<long>(e));
    }
    if (rest > 1) {
      acc = acc * form_->chi.value(rest);
      if (form_->t != 0.0) acc = acc * UnitComplex(form_->t * log_int(rest));
    }
    return acc;
  }
  UnitComplex acc;
  for (const auto& pp : factorize(n).factors)
    acc = acc * eval_at_prime(f_, pp.prime).pow(static_cast<long>(pp.exponent));
  return acc;
}

UnitComplex eval(const MultiplicativeFunction& f, const Int& n) { return FastEval(f)(n); }

UnitComplex eval_rational(const MultiplicativeFunction& f, const Int& num, const Int& den) {
  if (num < 1 || den < 1) raise("DomainError", "eval_rational requires positive arguments");
  return eval(f, num) * eval(f, den).conj();
}

std::string descriptor_class_name(DescriptorClass c) {
  switch (c) {
    case DescriptorClass::Archimedean:
      return "Archimedean";
    case DescriptorClass::FiniteSupportLift:
      return "FiniteSupportLift";
    case DescriptorClass::FiniteSupportLiftForForm:
      return "FiniteSupportLiftForForm";
    case DescriptorClass::DeclaredOscillating:
      return "DeclaredOscillating";
    case DescriptorClass::Unknown:
      return "Unknown";
  }
  return "?";
}

DescriptorClass classify_descriptor(const MultiplicativeFunction& f) {
  using C = DescriptorClass;
  switch (f->kind) {
    case MFNode::Kind::One:
      return C::Archimedean;
    case MFNode::Kind::Archimedean:
      return C::Archimedean;
    case MFNode::Kind::CharacterLift:
      return f->chi.modulus() == 1 ? C::Archimedean : C::FiniteSupportLift;
    case MFNode::Kind::PrimeFormula:
      return C::DeclaredOscillating;
    case MFNode::Kind::Tweaked: {
      C base = classify_descriptor(f->base);
      if (base == C::Archimedean) return C::FiniteSupportLift;
      return base;
    }
    case MFNode::Kind::Product: {
      C a = classify_descriptor(f->base);
      C b = classify_descriptor(f->other);
      if (a == C::Archimedean && b == C::Archimedean) return C::Archimedean;
      auto lift_like = [](C c) { return c == C::Archimedean || c == C::FiniteSupportLift; };
      if (lift_like(a) && lift_like(b)) return C::FiniteSupportLift;
      return C::Unknown;
    }
    case MFNode::Kind::Power:
      if (f->exponent == 0) return C::Archimedean;
      return classify_descriptor(f->base);
    case MFNode::Kind::Conjugate:
      return classify_descriptor(f->base);
  }
  return C::Unknown;
}

double distance(const MultiplicativeFunction& f, const MultiplicativeFunction& g, double A,
                double B) {
  if (B < A) raise("DomainError", "distance requires A <= B");
  double sum = 0.0;
  for (std::uint64_t p : sieve_primes(static_cast<std::uint64_t>(B))) {
    if (static_cast<double>(p) <= A) continue;
    UnitComplex prod = eval_at_prime(f, Int(p)) * eval_at_prime(g, Int(p)).conj();
    sum += (1.0 - std::cos(prod.angle())) / static_cast<double>(p);
  }
  return std::sqrt(std::max(0.0, sum));
}

double distance_to_target(const MultiplicativeFunction& f, const DirichletCharacter& chi,
                          double t, double A, double B) {
  if (B < A) raise("DomainError", "distance requires A <= B");
  double sum = 0.0;
  for (std::uint64_t p : sieve_primes(static_cast<std::uint64_t>(B))) {
    if (static_cast<double>(p) <= A) continue;
    Int pp(p);
    if (chi.is_zero_at(pp)) {
      sum += 1.0 / static_cast<double>(p);
      continue;
    }
    UnitComplex target = chi.value(pp) * unit_power(pp, t);
    UnitComplex prod = eval_at_prime(f, pp) * target.conj();
    sum += (1.0 - std::cos(prod.angle())) / static_cast<double>(p);
  }
  return std::sqrt(std::max(0.0, sum));
}

std::complex<double> f_partial(const MultiplicativeFunction& f, const DirichletCharacter& chi,
                               double t, double L, double N) {
  if (N < L) raise("DomainError", "f_partial requires L <= N");
  std::complex<double> sum = 0.0;
  for (std::uint64_t p : sieve_primes(static_cast<std::uint64_t>(N))) {
    if (static_cast<double>(p) <= L) continue;
    Int pp(p);
    std::complex<double> term =
        eval_at_prime(f, pp).value() * std::conj(chi.value_or_zero(pp)) *
            std::polar(1.0, -t * std::log(static_cast<double>(p))) -
        1.0;
    sum += term / static_cast<double>(p);
  }
  return sum;
}

std::complex<double> g_partial(const MultiplicativeFunction& f, const DirichletCharacter& chi,
                               double t, const BinaryQuadraticForm& P, double L, double N) {
  if (!is_irreducible(P)) raise("ReducibleForm", "g_partial requires an irreducible form");
  if (N < L) raise("DomainError", "g_partial requires L <= N");
  std::complex<double> sum = 0.0;
  for (std::uint64_t p : sieve_primes(static_cast<std::uint64_t>(N))) {
    if (static_cast<double>(p) <= L) continue;
    unsigned long w = omega(P, Int(p));
    if (w == 0) continue;
    Int pp(p);
    std::complex<double> term =
        eval_at_prime(f, pp).value() * std::conj(chi.value_or_zero(pp)) *
            std::polar(1.0, -t * std::log(static_cast<double>(p))) -
        1.0;
    sum += static_cast<double>(w) * term / static_cast<double>(p);
  }
  return sum;
}

}  // namespace pretlab
