// pretlab: experiment runner for the recurrence/pretentious-functions library.
// Every run echoes its resolved config; identical config + seed gives
// byte-identical output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pretlab/equations.hpp"
#include "pretlab/error.hpp"
#include "pretlab/folner.hpp"
#include "pretlab/gridwitness.hpp"
#include "pretlab/multfun.hpp"
#include "pretlab/parallel.hpp"
#include "pretlab/rotation.hpp"

namespace {

using nlohmann::json;
using namespace pretlab;

constexpr const char* kVersion = "pretlab 0.1.0";

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Output {
  std::string format = "json";  // csv | json
  std::string path;             // empty -> stdout
  json config = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  void emit() const {
    std::ostringstream os;
    if (format == "csv") {
      os << "# " << kVersion << "\n";
      os << "# config " << config.dump() << "\n";
      for (std::size_t i = 0; i < columns.size(); ++i)
        os << columns[i] << (i + 1 < columns.size() ? "," : "");
      os << "\n";
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
          os << row[i] << (i + 1 < row.size() ? "," : "");
        os << "\n";
      }
    } else {
      json j;
      j["version"] = kVersion;
      j["config"] = config;
      json results = json::array();
      for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i)
          obj[columns[i]] = row[i];
        results.push_back(obj);
      }
      j["results"] = results;
      os << j.dump(2) << "\n";
    }
    if (path.empty()) {
      std::cout << os.str();
    } else {
      std::ofstream f(path, std::ios::binary);
      if (!f) raise("IoError", "cannot open output file " + path);
      f << os.str();
    }
  }
};

BinaryQuadraticForm parse_form(const std::string& s) {
  // "alpha,beta,gamma"
  std::istringstream is(s);
  std::string tok;
  std::vector<Int> c;
  while (std::getline(is, tok, ',')) c.emplace_back(tok);
  if (c.size() != 3) raise("UsageError", "form must be alpha,beta,gamma");
  return BinaryQuadraticForm{c[0], c[1], c[2]};
}

std::vector<MultiplicativeFunction> load_functions(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise("IoError", "cannot open functions file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  json j = json::parse(ss.str());
  std::vector<MultiplicativeFunction> out;
  if (j.is_array())
    for (const auto& e : j) out.push_back(mf_from_json(e.dump()));
  else
    out.push_back(mf_from_json(j.dump()));
  return out;
}

std::vector<Arc> parse_arcs(const std::string& s) {
  // "center:halfwidth,center:halfwidth,..."
  std::vector<Arc> arcs;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    auto pos = tok.find(':');
    if (pos == std::string::npos) raise("UsageError", "arc must be center:halfwidth");
    arcs.push_back(Arc{std::stod(tok.substr(0, pos)), std::stod(tok.substr(pos + 1))});
  }
  return arcs;
}

// --config file.json overrides flags: any "key": value pair replaces an
// existing --key on the command line and is appended as --key=value.
std::vector<std::string> apply_config_overrides(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  std::ifstream f(config_path);
  if (!f) raise("IoError", "cannot open config file " + config_path);
  json j;
  f >> j;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string flag = "--" + it.key();
    for (std::size_t i = 0; i < args.size();) {
      if (args[i] == flag && i + 1 < args.size()) {
        args.erase(args.begin() + i, args.begin() + i + 2);
      } else if (args[i].rfind(flag + "=", 0) == 0) {
        args.erase(args.begin() + i);
      } else {
        ++i;
      }
    }
    std::string value = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    args.push_back(flag + "=" + value);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - generalized Pythagorean recurrence experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path, out_format = "json", config_path;
  std::uint64_t seed = 1;
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", out_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "seed for sampled experiments");
  app.add_option("--config", config_path, "JSON config overriding flags");

  // ---- rado ----
  long ra = 1, rb = 1, rc = 1;
  auto* rado = app.add_subcommand("rado", "classify a coefficient triple");
  rado->fallthrough();
  rado->add_option("a", ra)->required();
  rado->add_option("b", rb)->required();
  rado->add_option("c", rc)->required();

  // ---- forms ----
  auto* formsc = app.add_subcommand("forms", "three-form family of a Rado triple");
  formsc->fallthrough();
  long fa = 1, fb = 1, fc = 1;
  formsc->add_option("a", fa)->required();
  formsc->add_option("b", fb)->required();
  formsc->add_option("c", fc)->required();

  // ---- solve ----
  auto* solvec = app.add_subcommand("solve", "parametrized solution at (k, m, n)");
  solvec->fallthrough();
  long sa = 1, sb = 1, sc = 1, sk = 1, sm = 1, sn = 1;
  solvec->add_option("a", sa)->required();
  solvec->add_option("b", sb)->required();
  solvec->add_option("c", sc)->required();
  solvec->add_option("--k", sk)->required();
  solvec->add_option("--m", sm)->required();
  solvec->add_option("--n", sn)->required();

  // ---- omega ----
  auto* omegac = app.add_subcommand("omega", "root counting for a quadratic form");
  omegac->fallthrough();
  std::string om_form = "1,0,1";
  long om_r = 0;
  std::uint64_t om_sum = 0;
  long om_root_p = 0, om_root_k = 1;
  omegac->add_option("--form", om_form, "alpha,beta,gamma");
  omegac->add_option("--r", om_r, "count roots of P(1,n) mod r");
  omegac->add_option("--sum", om_sum, "partial sum over primes p <= X of omega(p)/p");
  omegac->add_option("--roots-p", om_root_p, "list roots mod p^k: prime p");
  omegac->add_option("--roots-k", om_root_k, "list roots mod p^k: exponent k");

  // ---- distance ----
  auto* distc = app.add_subcommand("distance", "pretentious distance D(f,g;A,B)");
  std::string d_f, d_g;
  double d_A = 1.0, d_B = 1e5;
  distc->add_option("--f", d_f, "descriptor JSON file")->required();
  distc->add_option("--g", d_g, "descriptor JSON file")->required();
  distc->add_option("--A", d_A);
  distc->add_option("--B", d_B);

  // ---- folner ----
  auto* folnerc = app.add_subcommand("folner", "enumerate or sample a Folner family");
  folnerc->fallthrough();
  std::string fo_kind = "r";
  long fo_r = 2, fo_K = 0;
  std::string fo_form;
  std::uint64_t fo_samples = 0, fo_cap = 1'000'000;
  folnerc->add_option("--kind", fo_kind, "r | rk | rkp")->check(CLI::IsMember({"r", "rk", "rkp"}));
  folnerc->add_option("--r", fo_r)->required();
  folnerc->add_option("--K", fo_K);
  folnerc->add_option("--form", fo_form, "alpha,beta,gamma (kind rkp)");
  folnerc->add_option("--samples", fo_samples, "sample count (0 = enumerate)");
  folnerc->add_option("--cap", fo_cap, "enumeration cap");

  // ---- qdelta ----
  auto* qdc = app.add_subcommand("qdelta", "find Q_{delta,L}");
  qdc->fallthrough();
  double qd_delta = 1.9;
  long qd_L = 2, qd_cap = 1'000'000;
  qdc->add_option("--delta", qd_delta)->required();
  qdc->add_option("--L", qd_L)->required();
  qdc->add_option("--cap", qd_cap);

  // ---- witness ----
  auto* witc = app.add_subcommand("witness", "grid witness construction/verification");
  witc->fallthrough();
  auto* wit_con = witc->add_subcommand("construct", "build v for a case");
  wit_con->fallthrough();
  std::string w_case = "AC_P2Reducible";
  long w_a = 1, w_b = 1, w_c = 1, w_s = 0, w_r = 7, w_K = 11, w_L = 29;
  double w_delta = 1.9;
  wit_con->add_option("--case", w_case, "case tag name");
  wit_con->add_option("--a", w_a)->required();
  wit_con->add_option("--b", w_b)->required();
  wit_con->add_option("--c", w_c)->required();
  wit_con->add_option("--s", w_s);
  wit_con->add_option("--r", w_r)->required();
  wit_con->add_option("--K", w_K)->required();
  wit_con->add_option("--L", w_L)->required();
  wit_con->add_option("--delta", w_delta);
  auto* wit_ver = witc->add_subcommand("verify", "re-verify an exported witness record");
  wit_ver->fallthrough();
  std::string w_in;
  wit_ver->add_option("--in", w_in, "witness JSON file")->required();

  // ---- sdelta ----
  auto* sdc = app.add_subcommand("sdelta", "S_delta membership counts");
  sdc->fallthrough();
  long sd_a = 1, sd_b = 1, sd_c = 1, sd_N = 100;
  double sd_delta = 0.3;
  sdc->add_option("--a", sd_a)->required();
  sdc->add_option("--b", sd_b)->required();
  sdc->add_option("--c", sd_c)->required();
  sdc->add_option("--delta", sd_delta);
  sdc->add_option("--N", sd_N);

  // ---- mono ----
  auto* monoc = app.add_subcommand("mono", "monochromatic triple search");
  monoc->fallthrough();
  long mo_a = 1, mo_b = 1, mo_c = 1, mo_kmax = 10, mo_mmax = 50, mo_raw = 0;
  double mo_delta = 0.1;
  std::string mo_funcs;
  monoc->add_option("--a", mo_a)->required();
  monoc->add_option("--b", mo_b)->required();
  monoc->add_option("--c", mo_c)->required();
  monoc->add_option("--delta-arc", mo_delta, "arc half-width as circle fraction");
  monoc->add_option("--kmax", mo_kmax);
  monoc->add_option("--mmax", mo_mmax);
  monoc->add_option("--raw-bound", mo_raw, "also run the raw x,y scan up to this bound");
  monoc->add_option("--functions", mo_funcs, "JSON file with descriptor array");

  // ---- recur ----
  auto* recurc = app.add_subcommand("recur", "recurrence witness search on a rotation system");
  recurc->fallthrough();
  long re_a = 1, re_b = 1, re_c = 1, re_kmax = 50, re_mmax = 50;
  double re_eps = 0.01;
  std::string re_funcs, re_arcs = "0:1.0", re_grid_q, re_grid_shift;
  recurc->add_option("--a", re_a)->required();
  recurc->add_option("--b", re_b)->required();
  recurc->add_option("--c", re_c)->required();
  recurc->add_option("--eps", re_eps);
  recurc->add_option("--kmax", re_kmax);
  recurc->add_option("--mmax", re_mmax);
  recurc->add_option("--functions", re_funcs, "JSON file with descriptor array")->required();
  recurc->add_option("--arcs", re_arcs, "center:halfwidth per coordinate, comma separated");
  recurc->add_option("--grid-q", re_grid_q, "restrict (m,n) to the grid (Q m + 1, Q n + shift)");
  recurc->add_option("--grid-shift", re_grid_shift, "shift for the grid restriction");

  // ---- conc-lin ----
  auto* clc = app.add_subcommand("conc-lin", "linear concentration experiment");
  clc->fallthrough();
  std::string cl_f;
  long cl_chi_q = 3, cl_chi_idx = 0, cl_K = 3, cl_N = 1000;
  double cl_t = 0.0;
  std::string cl_Q = "6", cl_a = "1";
  clc->add_option("--f", cl_f, "descriptor JSON file")->required();
  clc->add_option("--chi-q", cl_chi_q);
  clc->add_option("--chi-index", cl_chi_idx);
  clc->add_option("--t", cl_t);
  clc->add_option("--Q", cl_Q);
  clc->add_option("--a", cl_a);
  clc->add_option("--K", cl_K);
  clc->add_option("--N", cl_N);

  // ---- conc-quad ----
  auto* cqc = app.add_subcommand("conc-quad", "quadratic concentration experiment");
  cqc->fallthrough();
  std::string cq_f, cq_form = "1,0,1";
  long cq_chi_q = 3, cq_chi_idx = 0, cq_K = 3, cq_N = 100;
  double cq_t = 0.0;
  std::string cq_Q = "6", cq_a = "1", cq_b = "6";
  cqc->add_option("--f", cq_f, "descriptor JSON file")->required();
  cqc->add_option("--form", cq_form);
  cqc->add_option("--chi-q", cq_chi_q);
  cqc->add_option("--chi-index", cq_chi_idx);
  cqc->add_option("--t", cq_t);
  cqc->add_option("--Q", cq_Q);
  cqc->add_option("--a", cq_a);
  cqc->add_option("--b", cq_b);
  cqc->add_option("--K", cq_K);
  cqc->add_option("--N", cq_N);

  // ---- factor-crit ----
  auto* fcc = app.add_subcommand("factor-crit", "finite-stage factor membership statistic");
  fcc->fallthrough();
  std::string fc_f, fc_kind = "arch", fc_form;
  long fc_r = 3, fc_K = 5, fc_N = 1000;
  std::uint64_t fc_cap = 32;
  fcc->add_option("--f", fc_f, "descriptor JSON file")->required();
  fcc->add_option("--kind", fc_kind, "arch | finsupp | finsuppP")
      ->check(CLI::IsMember({"arch", "finsupp", "finsuppP"}));
  fcc->add_option("--form", fc_form, "alpha,beta,gamma (finsuppP)");
  fcc->add_option("--r", fc_r);
  fcc->add_option("--K", fc_K);
  fcc->add_option("--N", fc_N);
  fcc->add_option("--family-cap", fc_cap);

  // ---- chu ----
  auto* chuc = app.add_subcommand("chu", "Chu inequality on random finite spaces");
  chuc->fallthrough();
  long ch_atoms = 8, ch_parts = 2, ch_trials = 100;
  chuc->add_option("--atoms", ch_atoms);
  chuc->add_option("--partitions", ch_parts);
  chuc->add_option("--trials", ch_trials);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config_overrides(args);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  Output out;
  out.format = out_format;
  out.path = out_path;

  try {
    if (*rado) {
      RadoTriple t = classify_rado(ra, rb, rc);
      out.config = {{"cmd", "rado"}, {"a", ra}, {"b", rb}, {"c", rc}};
      out.columns = {"a", "b", "c", "class"};
      out.add_row({std::to_string(ra), std::to_string(rb), std::to_string(rc),
                   rado_class_name(t.cls)});
      if (out_path.empty() && out_format == "json") {
        std::cout << rado_class_name(t.cls) << "\n";
        return 0;
      }
      out.emit();
      return 0;
    }
    if (*formsc) {
      FormTriple ft = forms_for(classify_rado(fa, fb, fc));
      out.config = {{"cmd", "forms"}, {"a", fa}, {"b", fb}, {"c", fc}};
      out.columns = {"slot", "alpha", "beta", "gamma", "coordinate"};
      const char* names[3] = {"P1", "P2", "P3"};
      const BinaryQuadraticForm* forms[3] = {&ft.P1, &ft.P2, &ft.P3};
      for (int i = 0; i < 3; ++i) {
        std::string coord = ft.coord[i] == Coordinate::X ? "x" : (ft.coord[i] == Coordinate::Y ? "y" : "z");
        out.add_row({names[i], forms[i]->alpha.get_str(), forms[i]->beta.get_str(),
                     forms[i]->gamma.get_str(), coord});
      }
      out.emit();
      return 0;
    }
    if (*solvec) {
      SolutionValue s = solution(classify_rado(sa, sb, sc), Int(sk), Int(sm), Int(sn));
      out.config = {{"cmd", "solve"}, {"a", sa}, {"b", sb}, {"c", sc},
                    {"k", sk},        {"m", sm}, {"n", sn}};
      out.columns = {"x", "y", "z", "positive", "distinct"};
      out.add_row({s.x.get_str(), s.y.get_str(), s.z.get_str(), s.positive ? "1" : "0",
                   s.distinct ? "1" : "0"});
      if (out_path.empty() && out_format == "json") {
        std::cout << s.x.get_str() << " " << s.y.get_str() << " " << s.z.get_str() << "\n";
        return 0;
      }
      out.emit();
      return 0;
    }
    if (*omegac) {
      BinaryQuadraticForm P = parse_form(om_form);
      out.config = {{"cmd", "omega"}, {"form", om_form}};
      if (om_root_p > 0) {
        out.config["roots_p"] = om_root_p;
        out.config["roots_k"] = om_root_k;
        out.columns = {"root"};
        for (const Int& x : roots_mod_prime_power(P, Int(om_root_p),
                                                  static_cast<unsigned long>(om_root_k)))
          out.add_row({x.get_str()});
      } else if (om_sum > 0) {
        out.config["sum_limit"] = om_sum;
        out.columns = {"X", "partial_sum"};
        out.add_row({std::to_string(om_sum), fmt_double(omega_partial_sum(P, om_sum))});
      } else {
        if (om_r < 1) raise("UsageError", "need --r, --sum or --roots-p");
        out.config["r"] = om_r;
        out.columns = {"r", "omega"};
        out.add_row({std::to_string(om_r), std::to_string(omega(P, Int(om_r)))});
      }
      out.emit();
      return 0;
    }
    if (*distc) {
      auto f = load_functions(d_f).at(0);
      auto g = load_functions(d_g).at(0);
      double v = distance(f, g, d_A, d_B);
      out.config = {{"cmd", "distance"}, {"A", d_A}, {"B", d_B}, {"f", d_f}, {"g", d_g}};
      out.columns = {"distance"};
      out.add_row({fmt_double(v)});
      out.emit();
      return 0;
    }
    if (*folnerc) {
      FolnerSpec spec = fo_kind == "r"    ? FolnerSpec::phi_r(fo_r)
                        : fo_kind == "rk" ? FolnerSpec::phi_rk(fo_r, fo_K)
                                          : FolnerSpec::phi_rkp(fo_r, fo_K, parse_form(fo_form));
      out.config = {{"cmd", "folner"},   {"kind", fo_kind},       {"r", fo_r},
                    {"K", fo_K},         {"form", fo_form},       {"samples", fo_samples},
                    {"cap", fo_cap},     {"seed", seed},          {"family", spec.str()},
                    {"mode", fo_samples ? "sampled" : "exhaustive"}};
      out.columns = {"value", "exponents"};
      auto elems = fo_samples ? sample_folner(spec, fo_samples, seed)
                              : enumerate_folner(spec, fo_cap);
      for (const auto& e : elems) {
        std::string exps;
        for (const auto& [p, th] : e.exponents)
          exps += (exps.empty() ? "" : " ") + std::to_string(p) + "^" + std::to_string(th);
        out.add_row({e.value.get_str(), exps});
      }
      out.emit();
      return 0;
    }
    if (*qdc) {
      QDeltaL q = find_q_delta_L(qd_delta, qd_L, qd_cap);
      out.config = {{"cmd", "qdelta"}, {"delta", qd_delta}, {"L", qd_L}, {"cap", qd_cap}};
      out.columns = {"n_shift", "value", "certificate_angle", "certificate_chord"};
      out.add_row({std::to_string(q.n_shift), q.value.get_str(), fmt_double(q.certificate_angle),
                   fmt_double(q.certificate_chord)});
      out.emit();
      return 0;
    }
    if (*wit_con) {
      CaseTag tag = make_case_tag(witness_case_from_name(w_case), w_a, w_b, w_c);
      CaseFamilies fams = case_families(tag, w_s, w_r, w_K, w_L);
      auto pick = [&](const FolnerSpec& spec, std::uint64_t salt) {
        if (spec.cardinality_log() <= std::log(1e6)) {
          auto all = enumerate_folner(spec);
          return all[static_cast<std::size_t>(salt % all.size())];
        }
        return sample_folner(spec, 1, seed + salt)[0];
      };
      GridParams params = make_grid_params(tag, w_s, w_r, w_K, w_L, w_delta,
                                           pick(fams.f1, seed), pick(fams.f2, seed + 1),
                                           pick(fams.f3, seed + 2));
      GridWitness w = construct_v(params);
      std::string payload = witness_to_json(params, w);
      if (out_path.empty())
        std::cout << payload << "\n";
      else {
        std::ofstream f(out_path, std::ios::binary);
        f << payload << "\n";
      }
      return w.all_pass() ? 0 : 1;
    }
    if (*wit_ver) {
      std::ifstream f(w_in);
      if (!f) raise("IoError", "cannot open " + w_in);
      std::stringstream ss;
      ss << f.rdbuf();
      auto report = witness_verify_json(ss.str());
      bool all = true;
      for (const auto& c : report) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        all = all && c.pass;
      }
      std::cout << (all ? "witness OK" : "witness INVALID") << "\n";
      return all ? 0 : 1;
    }
    if (*sdc) {
      SDeltaSpec spec = s_delta_spec_for(classify_rado(sd_a, sd_b, sd_c), sd_delta);
      DensityResult res = s_delta_density(spec, sd_N);
      std::uint64_t cone = cone_count(spec.alpha, sd_N);
      out.config = {{"cmd", "sdelta"}, {"a", sd_a}, {"b", sd_b},
                    {"c", sd_c},       {"delta", sd_delta}, {"N", sd_N}};
      out.columns = {"count", "ratio", "cone_count"};
      out.add_row({std::to_string(res.count), fmt_double(res.ratio), std::to_string(cone)});
      out.emit();
      return 0;
    }
    if (*monoc) {
      RadoTriple triple = classify_rado(mo_a, mo_b, mo_c);
      std::vector<MultiplicativeFunction> fs;
      if (!mo_funcs.empty()) fs = load_functions(mo_funcs);
      out.config = {{"cmd", "mono"},   {"a", mo_a},       {"b", mo_b},
                    {"c", mo_c},       {"delta_arc", mo_delta}, {"kmax", mo_kmax},
                    {"mmax", mo_mmax}, {"raw_bound", mo_raw},   {"functions", mo_funcs}};
      out.columns = {"mode", "found", "x", "y", "z", "candidates", "angles"};
      auto angle_list = [&fs](const MonoWitness& w) {
        std::string s;
        for (const auto& f : fs)
          for (const Int* v : {&w.x, &w.y, &w.z})
            s += (s.empty() ? "" : ";") + fmt_double(eval(f, *v).signed_angle());
        return s;
      };
      auto param = monochromatic_search(triple, fs, mo_delta, mo_kmax, mo_mmax);
      if (param)
        out.add_row({"parametrized", "1", param->x.get_str(), param->y.get_str(),
                     param->z.get_str(), std::to_string(param->stats.candidates),
                     angle_list(*param)});
      else
        out.add_row({"parametrized", "0", "", "", "",
                     std::to_string(static_cast<std::uint64_t>(mo_kmax) * mo_mmax * mo_mmax), ""});
      if (mo_raw > 0) {
        auto raw = monochromatic_search_raw(triple, fs, mo_delta, mo_raw);
        if (raw)
          out.add_row({"raw", "1", raw->x.get_str(), raw->y.get_str(), raw->z.get_str(),
                       std::to_string(raw->stats.candidates), angle_list(*raw)});
        else
          out.add_row({"raw", "0", "", "", "", std::to_string(mo_raw * mo_raw), ""});
      }
      out.emit();
      return 0;
    }
    if (*recurc) {
      RadoTriple triple = classify_rado(re_a, re_b, re_c);
      RotationSystem sys{load_functions(re_funcs)};
      ArcSet A = make_arc_set(parse_arcs(re_arcs));
      out.config = {{"cmd", "recur"}, {"a", re_a},     {"b", re_b},     {"c", re_c},
                    {"eps", re_eps},  {"kmax", re_kmax}, {"mmax", re_mmax}, {"arcs", re_arcs},
                    {"functions", re_funcs}};
      out.config["grid_q"] = re_grid_q;
      out.config["grid_shift"] = re_grid_shift;
      out.columns = {"found", "x", "y", "z", "measure", "target"};
      double target = std::pow(arc_measure(A), 4) - re_eps;
      std::optional<GridRestriction> grid;
      if (!re_grid_q.empty()) grid = GridRestriction{Int(re_grid_q),
                                                     Int(re_grid_shift.empty() ? "1" : re_grid_shift)};
      auto wit = recurrence_search(sys, A, triple, re_eps, re_kmax, re_mmax, grid);
      if (wit)
        out.add_row({"1", wit->x.get_str(), wit->y.get_str(), wit->z.get_str(),
                     fmt_double(wit->measure), fmt_double(target)});
      else
        out.add_row({"0", "", "", "", "", fmt_double(target)});
      out.emit();
      return 0;
    }
    if (*clc) {
      auto f = load_functions(cl_f).at(0);
      const auto& chars = characters_mod(cl_chi_q);
      ConcentrationResult res = concentration_linear(f, chars.at(cl_chi_idx), cl_t, Int(cl_Q),
                                                     Int(cl_a), cl_K, cl_N);
      out.config = {{"cmd", "conc-lin"}, {"f", cl_f},   {"chi_q", cl_chi_q},
                    {"chi_index", cl_chi_idx}, {"t", cl_t},   {"Q", cl_Q},
                    {"a", cl_a},         {"K", cl_K},   {"N", cl_N}};
      out.columns = {"lhs", "distance", "rhs", "audited_rhs", "within_audit", "truncation",
                     "pretension_distance"};
      out.add_row({fmt_double(res.lhs), fmt_double(res.distance_term), fmt_double(res.rhs),
                   fmt_double(res.audited_rhs), res.within_audit ? "1" : "0",
                   fmt_double(res.truncation), fmt_double(res.pretension_distance)});
      out.emit();
      return 0;
    }
    if (*cqc) {
      auto f = load_functions(cq_f).at(0);
      const auto& chars = characters_mod(cq_chi_q);
      ConcentrationResult res =
          concentration_quadratic(f, chars.at(cq_chi_idx), cq_t, parse_form(cq_form), Int(cq_Q),
                                  Int(cq_a), Int(cq_b), cq_K, cq_N);
      out.config = {{"cmd", "conc-quad"}, {"f", cq_f},   {"form", cq_form},
                    {"chi_q", cq_chi_q},  {"chi_index", cq_chi_idx},
                    {"t", cq_t},          {"Q", cq_Q},   {"a", cq_a},
                    {"b", cq_b},          {"K", cq_K},   {"N", cq_N}};
      out.columns = {"lhs", "distance", "rhs", "audited_rhs", "within_audit", "truncation",
                     "pretension_distance"};
      out.add_row({fmt_double(res.lhs), fmt_double(res.distance_term), fmt_double(res.rhs),
                   fmt_double(res.audited_rhs), res.within_audit ? "1" : "0",
                   fmt_double(res.truncation), fmt_double(res.pretension_distance)});
      out.emit();
      return 0;
    }
    if (*fcc) {
      auto f = load_functions(fc_f).at(0);
      FactorKind kind = fc_kind == "arch"      ? FactorKind::Archimedean
                        : fc_kind == "finsupp" ? FactorKind::FinSupp
                                               : FactorKind::FinSuppP;
      std::optional<BinaryQuadraticForm> P;
      if (kind == FactorKind::FinSuppP) P = parse_form(fc_form);
      FactorCriterionResult res = factor_criterion(f, kind, fc_r, fc_K, fc_N, P, fc_cap, seed);
      out.config = {{"cmd", "factor-crit"}, {"f", fc_f}, {"kind", fc_kind}, {"form", fc_form},
                    {"r", fc_r}, {"K", fc_K}, {"N", fc_N}, {"family_cap", fc_cap}, {"seed", seed}};
      out.columns = {"statistic", "family_size", "sampled"};
      out.add_row({fmt_double(res.statistic), std::to_string(res.family_size),
                   res.sampled ? "1" : "0"});
      out.emit();
      return 0;
    }
    if (*chuc) {
      out.config = {{"cmd", "chu"}, {"atoms", ch_atoms}, {"partitions", ch_parts},
                    {"trials", ch_trials}, {"seed", seed}};
      out.columns = {"trial", "lhs", "rhs", "holds", "equality"};
      std::uint64_t state = seed ^ 0x6a09e667f3bcc909ULL;
      auto next_u64 = [&state]() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
      };
      auto next_unit = [&]() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
      };
      bool all_hold = true;
      for (long trial = 0; trial < ch_trials; ++trial) {
        FiniteProbSpace sp;
        long n = 2 + static_cast<long>(next_u64() % static_cast<std::uint64_t>(ch_atoms - 1));
        double total = 0.0;
        for (long i = 0; i < n; ++i) {
          sp.weights.push_back(next_unit() + 1e-3);
          sp.F.push_back(next_unit() * 2.0);
          total += sp.weights.back();
        }
        for (double& w : sp.weights) w /= total;
        for (long k = 0; k < ch_parts; ++k) {
          std::vector<int> cells(n);
          int ncells = 1 + static_cast<int>(next_u64() % 3);
          for (long i = 0; i < n; ++i) cells[i] = static_cast<int>(next_u64() % ncells);
          sp.partitions.push_back(cells);
        }
        ChuResult res = chu_check(sp);
        all_hold = all_hold && res.holds;
        out.add_row({std::to_string(trial), fmt_double(res.lhs), fmt_double(res.rhs),
                     res.holds ? "1" : "0", res.equality ? "1" : "0"});
      }
      out.emit();
      return all_hold ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << e.name() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
