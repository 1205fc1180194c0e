#include <json.hpp>

#include "pretlab/error.hpp"
#include "pretlab/multfun.hpp"

namespace pretlab {

namespace {

using nlohmann::json;

long character_index(const DirichletCharacter& chi) {
  if (chi.index() >= 0) return chi.index();
  const auto& all = characters_mod(chi.modulus());
  for (const auto& c : all)
    if (c == chi) return c.index();
  raise("InternalError", "character not found in its own modulus family");
}

json angles_to_json(const std::map<Int, UnitComplex>& m) {
  json out = json::object();
  for (const auto& [p, v] : m) out[p.get_str()] = v.angle();
  return out;
}

std::map<Int, UnitComplex> angles_from_json(const json& j) {
  std::map<Int, UnitComplex> out;
  for (auto it = j.begin(); it != j.end(); ++it)
    out[Int(it.key())] = UnitComplex(it.value().get<double>());
  return out;
}

json to_json(const MultiplicativeFunction& f) {
  json j;
  switch (f->kind) {
    case MFNode::Kind::One:
      j["kind"] = "one";
      break;
    case MFNode::Kind::Archimedean:
      j["kind"] = "archimedean";
      j["t"] = f->t;
      break;
    case MFNode::Kind::CharacterLift:
      j["kind"] = "character_lift";
      j["chi"] = {{"q", f->chi.modulus()}, {"index", character_index(f->chi)}};
      j["fill"] = angles_to_json(f->fill);
      break;
    case MFNode::Kind::PrimeFormula:
      j["kind"] = "prime_formula";
      j["rule"] = prime_rule_name(f->rule);
      break;
    case MFNode::Kind::Tweaked:
      j["kind"] = "tweaked";
      j["base"] = to_json(f->base);
      j["overrides"] = angles_to_json(f->overrides);
      break;
    case MFNode::Kind::Product:
      j["kind"] = "product";
      j["f"] = to_json(f->base);
      j["g"] = to_json(f->other);
      break;
    case MFNode::Kind::Power:
      j["kind"] = "power";
      j["f"] = to_json(f->base);
      j["k"] = f->exponent;
      break;
    case MFNode::Kind::Conjugate:
      j["kind"] = "conjugate";
      j["f"] = to_json(f->base);
      break;
  }
  return j;
}

MultiplicativeFunction from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "one") return mf_one();
  if (kind == "archimedean") return mf_archimedean(j.at("t").get<double>());
  if (kind == "character_lift") {
    long q = j.at("chi").at("q").get<long>();
    long index = j.at("chi").at("index").get<long>();
    const auto& all = characters_mod(q);
    if (index < 0 || index >= static_cast<long>(all.size()))
      raise("DomainError", "character index out of range for modulus " + std::to_string(q));
    return mf_character_lift(all[index], angles_from_json(j.at("fill")));
  }
  if (kind == "prime_formula")
    return mf_prime_formula(prime_rule_from_name(j.at("rule").get<std::string>()));
  if (kind == "tweaked")
    return mf_tweaked(from_json(j.at("base")), angles_from_json(j.at("overrides")));
  if (kind == "product") return mf_product(from_json(j.at("f")), from_json(j.at("g")));
  if (kind == "power") return mf_power(from_json(j.at("f")), j.at("k").get<long>());
  if (kind == "conjugate") return mf_conjugate(from_json(j.at("f")));
  raise("DomainError", "unknown descriptor kind: " + kind);
}

}  // namespace

std::string mf_to_json(const MultiplicativeFunction& f) { return to_json(f).dump(); }

MultiplicativeFunction mf_from_json(const std::string& json_text) {
  return from_json(json::parse(json_text));
}

}  // namespace pretlab
