#include "dyadic_forge/json_io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dyadic_forge/errors.hpp"

namespace dyadic_forge {

namespace {

[[noreturn]] void bad(const std::string& what) { throw PreconditionError("json: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected object with key '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing key '") + key + "'");
  return *it;
}

const Json& array_field(const Json& j, const char* key) {
  const Json& a = field(j, key);
  if (!a.is_array()) bad(std::string("'") + key + "' must be an array");
  return a;
}

long integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<long>();
}

template <class T, class F>
std::vector<T> map_array(const Json& a, F&& f) {
  std::vector<T> out;
  out.reserve(a.size());
  for (const auto& e : a) out.push_back(f(e));
  return out;
}

}  // namespace

Json to_json(const Rational& x) { return {{"num", x.get_num().get_str()}, {"den", x.get_den().get_str()}}; }

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_number_integer()) return Rational(BigInt(std::to_string(j.get<long long>())));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_object()) {
      const Json& n = field(j, "num");
      const Json& d = field(j, "den");
      auto text = [](const Json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        bad("num/den must be strings or integers");
      };
      BigInt num(text(n)), den(text(d));
      if (den == 0) bad("zero denominator");
      return make_rational(num, den);
    }
  } catch (const std::invalid_argument&) {
    bad("unparsable rational " + j.dump());
  }
  bad("unparsable rational " + j.dump());
}

Json to_json(const Quad2& x) { return {{"a", to_json(x.a)}, {"b", to_json(x.b)}}; }

Quad2 quad2_from_json(const Json& j) {
  if (j.is_object() && j.contains("a") && j.contains("b")) return Quad2(rational_from_json(j["a"]), rational_from_json(j["b"]));
  return Quad2(rational_from_json(j));
}

Json to_json(const DyadicInterval& I) { return {{"m", I.m}, {"j", I.j}}; }

DyadicInterval interval_from_json(const Json& j) {
  DyadicInterval I;
  I.m = integer(field(j, "m"), "m");
  if (I.m < -kMaxScale || I.m > kMaxScale) bad("scale out of range: " + std::to_string(I.m));
  I.j = integer(field(j, "j"), "j");
  return I;
}

Json to_json(const IntervalCollection& U) {
  Json items = Json::array();
  for (const auto& I : U.items) items.push_back(to_json(I));
  return {{"intervals", items}, {"distinct", U.distinct}};
}

IntervalCollection collection_from_json(const Json& j) {
  IntervalCollection U;
  const Json& items = j.is_array() ? j : array_field(j, "intervals");
  U.items = map_array<DyadicInterval>(items, interval_from_json);
  if (j.is_object() && j.contains("distinct")) {
    if (!j["distinct"].is_boolean()) bad("'distinct' must be a boolean");
    U.distinct = j["distinct"].get<bool>();
  }
  U.validate();
  return U;
}

Json to_json(const HalfOpen& h) { return {{"a", to_json(h.a)}, {"b", to_json(h.b)}}; }

Json to_json(const PointSet& s) {
  Json a = Json::array();
  for (const auto& h : s.parts()) a.push_back(to_json(h));
  return a;
}

PointSet point_set_from_json(const Json& j) {
  if (!j.is_array()) bad("point set must be an array");
  std::vector<HalfOpen> parts;
  for (const auto& e : j) {
    if (e.is_object() && e.contains("m")) {
      auto I = interval_from_json(e);
      parts.push_back({I.left(), I.right()});
    } else {
      HalfOpen h{rational_from_json(field(e, "a")), rational_from_json(field(e, "b"))};
      if (!(h.a < h.b)) bad("empty or reversed interval in point set");
      parts.push_back(std::move(h));
    }
  }
  return PointSet::from_intervals(std::move(parts));
}

Json to_json(const StepFunction& f) {
  Json b = Json::array(), v = Json::array();
  for (const auto& x : f.breakpoints()) b.push_back(to_json(x));
  for (const auto& x : f.values()) v.push_back(to_json(x));
  return {{"breakpoints", b}, {"values", v}};
}

StepFunction step_function_from_json(const Json& j) {
  return StepFunction(map_array<Rational>(array_field(j, "breakpoints"), rational_from_json),
                      map_array<Quad2>(array_field(j, "values"), quad2_from_json));
}

Json to_json(const PLFunction& f) {
  Json xs = Json::array(), s = Json::array(), e = Json::array();
  for (const auto& x : f.xs()) xs.push_back(to_json(x));
  for (const auto& x : f.start()) s.push_back(to_json(x));
  for (const auto& x : f.end()) e.push_back(to_json(x));
  return {{"xs", xs}, {"start", s}, {"end", e}};
}

PLFunction pl_function_from_json(const Json& j) {
  if (j.is_object() && j.contains("xs"))
    return PLFunction(map_array<Rational>(array_field(j, "xs"), rational_from_json),
                      map_array<Quad2>(array_field(j, "start"), quad2_from_json),
                      map_array<Quad2>(array_field(j, "end"), quad2_from_json));
  if (j.is_object() && j.contains("nodes"))
    return PLFunction::from_nodes(map_array<Rational>(array_field(j, "nodes"), rational_from_json),
                                  map_array<Quad2>(array_field(j, "values"), quad2_from_json));
  return PLFunction::from_step(step_function_from_json(j));
}

Json to_json(const SplitResult& r) {
  Json sat = Json::array();
  for (const auto& h : r.saturation) sat.push_back(to_json(h));
  return {{"accepted", to_json(r.accepted)},
          {"rejected", to_json(r.rejected)},
          {"level", r.level},
          {"saturation", sat},
          {"checks",
           {{"bounded", r.checks.bounded},
            {"rejected_saturated", r.checks.rejected_saturated},
            {"density", r.checks.density},
            {"nested", r.checks.nested},
            {"density_applies", r.checks.density_applies},
            {"saturation_measure", to_json(r.checks.saturation_measure)},
            {"support_measure", to_json(r.checks.support_measure)}}}};
}

Json to_json(const LayeredDecomposition& d) {
  Json layers = Json::array();
  for (const auto& L : d.layers) layers.push_back(to_json(L));
  return {{"layers", layers},
          {"level", d.level},
          {"checks",
           {{"partition", d.checks.partition},
            {"nested", d.checks.nested},
            {"bounded", d.checks.bounded},
            {"inside_saturation", d.checks.inside_saturation},
            {"local_density", d.checks.local_density},
            {"density_applies", d.checks.density_applies}}}};
}

Json to_json(const Combination& c) {
  Json terms = Json::array();
  for (const auto& t : c.terms) terms.push_back({{"m", t.idx.m}, {"l", t.idx.l}, {"c", to_json(t.c)}});
  return {{"phi", to_json(c.phi)}, {"terms", terms}};
}

Combination combination_from_json(const Json& j) {
  Combination c;
  c.phi = step_function_from_json(field(j, "phi"));
  for (const auto& t : array_field(j, "terms")) {
    Term term;
    term.idx.m = integer(field(t, "m"), "m");
    term.idx.l = integer(field(t, "l"), "l");
    term.c = rational_from_json(field(t, "c"));
    c.terms.push_back(std::move(term));
  }
  return c;
}

Json to_json(const MotherWavelet& m) {
  Json b = Json::array(), v = Json::array();
  for (const auto& x : m.breakpoints) b.push_back(to_json(x));
  for (const auto& x : m.values) v.push_back(to_json(x));
  return {{"breakpoints", b}, {"values", v}, {"alpha", to_json(m.alpha)}, {"beta", to_json(m.beta)}, {"c", to_json(m.c)}};
}

MotherWavelet mother_from_json(const Json& j) {
  MotherWavelet m;
  m.breakpoints = map_array<Rational>(array_field(j, "breakpoints"), rational_from_json);
  m.values = map_array<Rational>(array_field(j, "values"), rational_from_json);
  if (m.breakpoints.size() != m.values.size() || m.breakpoints.size() < 2)
    bad("mother needs matching breakpoints and values, at least two");
  m.alpha = rational_from_json(field(j, "alpha"));
  m.beta = rational_from_json(field(j, "beta"));
  m.c = rational_from_json(field(j, "c"));
  return m;
}

std::string mother_hash(const MotherWavelet& m) {
  const std::string body = to_json(m).dump();
  const std::string blob = "blob " + std::to_string(body.size()) + std::string(1, '\0') + body;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw EnvironmentError("SHA-1 digest unavailable");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

Json to_json(const Calibration& c) {
  return {{"lambda", to_json(c.lambda)},         {"mu0", c.mu0},
          {"nu0", c.nu0},                        {"l", c.l},
          {"kappa", to_json(c.kappa)},           {"kappa_prime", to_json(c.kappa_prime)},
          {"c0", to_json(c.c0)},                 {"slack", to_json(c.slack)},
          {"mother_hash", c.mother_hash}};
}

Calibration calibration_from_json(const Json& j) {
  Calibration c;
  c.lambda = rational_from_json(field(j, "lambda"));
  c.mu0 = integer(field(j, "mu0"), "mu0");
  c.nu0 = integer(field(j, "nu0"), "nu0");
  c.l = integer(field(j, "l"), "l");
  c.kappa = rational_from_json(field(j, "kappa"));
  c.kappa_prime = rational_from_json(field(j, "kappa_prime"));
  c.c0 = rational_from_json(field(j, "c0"));
  c.slack = j.contains("slack") ? rational_from_json(j["slack"]) : Rational(0);
  const Json& h = field(j, "mother_hash");
  if (!h.is_string()) bad("mother_hash must be a string");
  c.mother_hash = h.get<std::string>();
  if (c.l != c.mu0 + c.nu0 - 1) bad("calibration l must equal mu0 + nu0 - 1");
  if (c.lambda <= 0 || c.c0 <= 0) bad("calibration lambda and c0 must be positive");
  return c;
}

Json to_json(const MultiplierSequence& w) {
  using F = MultiplierSequence::Family;
  switch (w.family()) {
    case F::power: return {{"family", "power"}, {"params", {{"p", to_json(w.param())}}}};
    case F::log: return {{"family", "log"}, {"params", {{"p", to_json(w.param())}}}};
    case F::constant: return {{"family", "constant"}, {"params", {{"value", to_json(w.param())}}}};
    case F::table: {
      Json v = Json::array();
      for (const auto& x : w.table_values()) v.push_back(to_json(x));
      return {{"family", "table"}, {"params", {{"values", v}}}};
    }
  }
  return {};
}

MultiplierSequence multiplier_from_json(const Json& j) {
  const Json& fam = field(j, "family");
  if (!fam.is_string()) bad("multiplier family must be a string");
  const std::string f = fam.get<std::string>();
  const Json params = j.contains("params") ? j["params"] : Json::object();
  if (f == "power") return MultiplierSequence::power(rational_from_json(field(params, "p")));
  if (f == "log") return MultiplierSequence::log(rational_from_json(field(params, "p")));
  if (f == "constant")
    return MultiplierSequence::constant(params.contains("value") ? rational_from_json(params["value"]) : Rational(1));
  if (f == "table") return MultiplierSequence::table(map_array<Rational>(array_field(params, "values"), rational_from_json));
  bad("unknown multiplier family '" + f + "'");
}

Json to_json(const ExplicitNode& n) {
  return {{"f", to_json(n.f)}, {"plus", to_json(n.plus)}, {"minus", to_json(n.minus)}};
}

TreeInput tree_from_json(const Json& j) {
  const Json& nodes = j.is_array() ? j : array_field(j, "nodes");
  TreeInput t;
  for (const auto& n : nodes)
    t.nodes.push_back({pl_function_from_json(field(n, "f")), point_set_from_json(field(n, "plus")),
                       point_set_from_json(field(n, "minus"))});
  return t;
}

Json permutation_to_json(const Ordering& o) {
  Json a = Json::array();
  for (auto i : o) a.push_back(i + 1);
  return a;
}

Ordering permutation_from_json(const Json& j, std::size_t N) {
  if (!j.is_array()) bad("permutation must be an array");
  Ordering o;
  for (const auto& e : j) {
    long v = integer(e, "permutation entry");
    if (v < 1) bad("permutation entries are 1-based");
    o.push_back(static_cast<std::size_t>(v - 1));
  }
  if (!is_bijection(o, N)) bad("permutation is not a bijection of 1.." + std::to_string(N));
  return o;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EnvironmentError("cannot write '" + path + "'");
  out << text;
}

}  // namespace dyadic_forge
