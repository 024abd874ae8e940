#include "qrh/bps_json.hpp"

#include <charconv>

#include "qrh/errors.hpp"

namespace qrh {

using nlohmann::json;

namespace {

long long parse_ll(std::string_view s, const std::string& whole) {
  long long v = 0;
  const char* end = s.data() + s.size();
  const char* first = s.data();
  if (first != end && *first == '+') ++first;
  auto [p, ec] = std::from_chars(first, end, v);
  if (ec != std::errc() || p != end || first == end)
    throw Error(Errc::parse, "bad rational literal '" + whole + "'");
  return v;
}

std::vector<Charge> charges_from_json(const json& j) {
  std::vector<Charge> out;
  for (const auto& v : j) out.push_back(v.get<Charge>());
  return out;
}

}  // namespace

std::string rational_to_string(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

Rational rational_from_string(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_ll(s, s));
  const long long num = parse_ll(std::string_view(s).substr(0, slash), s);
  const long long den = parse_ll(std::string_view(s).substr(slash + 1), s);
  if (den == 0) throw Error(Errc::parse, "zero denominator in '" + s + "'");
  return Rational(num, den);
}

json to_json(const EMSplitting& s) {
  return json{{"electric", s.electric_basis}, {"magnetic", s.magnetic_basis}, {"theta_space_dim", s.theta_space_dim}};
}

EMSplitting splitting_from_json(const json& j) {
  try {
    EMSplitting s;
    s.electric_basis = charges_from_json(j.at("electric"));
    s.magnetic_basis = charges_from_json(j.at("magnetic"));
    s.theta_space_dim = j.value("theta_space_dim", static_cast<int>(s.electric_basis.size()));
    return s;
  } catch (const json::exception& e) {
    throw Error(Errc::parse, std::string("splitting: ") + e.what());
  }
}

json to_json(const RefinedBPSStructure& b) {
  json j;
  j["rank"] = b.rank;
  j["skew_form"] = b.skew_form;
  json z = json::array();
  for (const cplx& c : b.central_charge) z.push_back({c.real(), c.imag()});
  j["Z"] = z;
  json om = json::array();
  for (const auto& [g, p] : b.omega) {
    if (p.empty()) continue;
    json poly = json::array();
    for (const auto& [n, c] : p) poly.push_back({{"n", n}, {"c", rational_to_string(c)}});
    om.push_back({{"gamma", g}, {"poly", poly}});
  }
  j["omega"] = om;
  if (b.splitting) j["splitting"] = to_json(*b.splitting);
  return j;
}

RefinedBPSStructure bps_from_json(const json& j) {
  RefinedBPSStructure b;
  try {
    b.rank = j.at("rank").get<int>();
    b.skew_form = j.at("skew_form").get<IntMatrix>();
    for (const auto& z : j.at("Z")) {
      if (!z.is_array() || z.size() != 2) throw Error(Errc::parse, "Z entries must be [re, im]");
      b.central_charge.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    for (const auto& e : j.at("omega")) {
      const Charge g = e.at("gamma").get<Charge>();
      RefinedPoly& p = b.omega[g];
      for (const auto& t : e.at("poly")) {
        const Rational c = rational_from_string(t.at("c").get<std::string>());
        const int n = t.at("n").get<int>();
        if (c != Rational(0)) p[n] += c;
        if (p.count(n) && p[n] == Rational(0)) p.erase(n);
      }
    }
    if (j.contains("splitting")) b.splitting = splitting_from_json(j.at("splitting"));
  } catch (const json::exception& e) {
    throw Error(Errc::parse, std::string("BPS structure: ") + e.what());
  }
  b.validate();
  return b;
}

}  // namespace qrh
