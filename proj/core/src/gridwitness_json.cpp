#include <json.hpp>

#include "pretlab/error.hpp"
#include "pretlab/gridwitness.hpp"

namespace pretlab {

namespace {

using nlohmann::json;

json element_to_json(const FolnerElement& e) {
  json exps = json::object();
  for (const auto& [p, th] : e.exponents) exps[std::to_string(p)] = th;
  return {{"exponents", exps}, {"value", e.value.get_str()}};
}

FolnerElement element_from_json(const FolnerSpec& spec, const json& j) {
  std::map<long, long> exps;
  for (auto it = j.at("exponents").begin(); it != j.at("exponents").end(); ++it)
    exps[std::stol(it.key())] = it.value().get<long>();
  FolnerElement e = FolnerElement::from_exponents(spec, std::move(exps));
  if (e.value.get_str() != j.at("value").get<std::string>())
    raise("DomainError", "element value does not match its exponents");
  return e;
}

}  // namespace

std::string witness_to_json(const GridParams& p, const GridWitness& w) {
  json j;
  j["case"] = witness_case_name(p.tag.kind);
  j["triple"] = {p.tag.a, p.tag.b, p.tag.c};
  j["delta"] = p.delta;
  j["s"] = p.s;
  j["r"] = p.r;
  j["K"] = p.K;
  j["L"] = p.L;
  j["qdl"] = {{"n_shift", p.qdl.n_shift}, {"value", p.qdl.value.get_str()}};
  j["Q1"] = element_to_json(p.Q1);
  j["Q2"] = element_to_json(p.Q2);
  j["Q3"] = element_to_json(p.Q3);
  j["v"] = w.v.get_str();
  json hensel = json::array();
  for (const auto& h : w.hensel_roots)
    hensel.push_back({{"p", h.p.get_str()},
                      {"j", h.j},
                      {"theta", h.theta},
                      {"seed", h.seed.get_str()},
                      {"zeta", h.zeta.get_str()}});
  j["hensel"] = hensel;
  json conds = json::array();
  for (const auto& c : w.report)
    conds.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["conditions"] = conds;
  return j.dump(2);
}

std::vector<WitnessCondition> witness_verify_json(const std::string& json_text) {
  json j = json::parse(json_text);
  WitnessCase kind = witness_case_from_name(j.at("case").get<std::string>());
  auto triple = j.at("triple");
  CaseTag tag = make_case_tag(kind, triple.at(0).get<long>(), triple.at(1).get<long>(),
                              triple.at(2).get<long>());
  long s = j.at("s").get<long>(), r = j.at("r").get<long>(), K = j.at("K").get<long>(),
       L = j.at("L").get<long>();
  CaseFamilies fams = case_families(tag, s, r, K, L);
  GridParams p;
  p.tag = tag;
  p.delta = j.at("delta").get<double>();
  p.s = s;
  p.r = r;
  p.K = K;
  p.L = L;
  p.Q1 = element_from_json(fams.f1, j.at("Q1"));
  p.Q2 = element_from_json(fams.f2, j.at("Q2"));
  p.Q3 = element_from_json(fams.f3, j.at("Q3"));
  p.qdl = find_q_delta_L(p.delta, L);
  if (p.qdl.value.get_str() != j.at("qdl").at("value").get<std::string>())
    raise("DomainError", "recomputed Q_{delta,L} does not match the record");
  Int v(j.at("v").get<std::string>());
  return verify_witness(p, v);
}

}  // namespace pretlab
