#include "sn/io.hpp"

#include <fstream>

namespace sn {

using nlohmann::json;

Scalar parse_scalar(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw SchemaError("scalar must be a number or [re, im], got " + j.dump());
}

json scalar_json(Scalar s) {
  if (s.imag() == 0.0) return s.real();
  return json::array({s.real(), s.imag()});
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

CategoryFile parse_category(const json& j) {
  CategoryFile out;
  FusionData& d = out.data;
  try {
    d.name = j.value("name", std::string("unnamed"));
    d.labels = j.at("labels").get<std::vector<std::string>>();
    const int r = d.rank();
    d.unit = d.label(j.at("unit").get<std::string>());
    d.dual.assign(static_cast<std::size_t>(r), -1);
    for (const auto& [k, v] : j.at("dual").items())
      d.dual[static_cast<std::size_t>(d.label(k))] = d.label(v.get<std::string>());
    d.N.assign(static_cast<std::size_t>(r * r * r), 0);
    for (int a = 0; a < r; ++a) {
      d.N[static_cast<std::size_t>((d.unit * r + a) * r + a)] = 1;
      d.N[static_cast<std::size_t>((a * r + d.unit) * r + a)] = 1;
    }
    for (const auto& t : j.at("N")) {
      if (!t.is_array() || t.size() != 4) throw SchemaError("N entries are [a, b, c, mult]");
      const int a = d.label(t[0]), b = d.label(t[1]), c = d.label(t[2]);
      d.N[static_cast<std::size_t>((a * r + b) * r + c)] = t[3].get<int>();
    }
    for (const auto& blk : j.at("F")) {
      FKey k{d.label(blk.at("a")), d.label(blk.at("b")), d.label(blk.at("c")),
             d.label(blk.at("d")), d.label(blk.at("e")), d.label(blk.at("f"))};
      const auto [a, b, c, dd, e, f] = k;
      std::vector<std::size_t> sh{std::size_t(d.n(a, b, e)), std::size_t(d.n(e, c, dd)),
                                  std::size_t(d.n(b, c, f)), std::size_t(d.n(a, f, dd))};
      if (blk.contains("shape") && blk["shape"].get<std::vector<std::size_t>>() != sh)
        throw SchemaError("F block declared shape disagrees with N");
      std::vector<Scalar> data;
      for (const auto& x : blk.at("data")) data.push_back(parse_scalar(x));
      if (d.F.count(k)) throw SchemaError("duplicate F block");
      try {
        d.F.emplace(k, DenseTensor(sh, std::move(data)));
      } catch (const DimensionError& e) {
        throw SchemaError(std::string("F block: ") + e.what());
      }
    }
    d.pivotal.assign(static_cast<std::size_t>(r), Scalar(1.0));
    if (j.contains("pivotal"))
      for (const auto& [k, v] : j["pivotal"].items())
        d.pivotal[static_cast<std::size_t>(d.label(k))] = parse_scalar(v);
    d.spherical = j.value("spherical", true);
    if (j.contains("frobenius_algebras")) out.algebras = j["frobenius_algebras"];
    if (j.contains("bimodules")) out.bimodules = j["bimodules"];
  } catch (const json::exception& e) {
    throw SchemaError(std::string("category file: ") + e.what());
  } catch (const LabelError& e) {
    throw SchemaError(std::string("category file: ") + e.what());
  }
  d.complete_and_check();
  return out;
}

CategoryFile load_category(const std::string& path) { return parse_category(load_json(path)); }

json category_json(const CategoryFile& f) {
  const FusionData& d = f.data;
  json j;
  j["name"] = d.name;
  j["labels"] = d.labels;
  j["unit"] = d.labels[static_cast<std::size_t>(d.unit)];
  json du = json::object();
  for (int a = 0; a < d.rank(); ++a)
    du[d.labels[static_cast<std::size_t>(a)]] = d.labels[static_cast<std::size_t>(d.dual[static_cast<std::size_t>(a)])];
  j["dual"] = du;
  json N = json::array();
  for (int a = 0; a < d.rank(); ++a)
    for (int b = 0; b < d.rank(); ++b)
      for (int c = 0; c < d.rank(); ++c)
        if (a != d.unit && b != d.unit && d.n(a, b, c))
          N.push_back({d.labels[std::size_t(a)], d.labels[std::size_t(b)], d.labels[std::size_t(c)], d.n(a, b, c)});
  j["N"] = N;
  json F = json::array();
  for (const auto& [k, t] : d.F) {
    json blk;
    const char* names[] = {"a", "b", "c", "d", "e", "f"};
    for (int i = 0; i < 6; ++i) blk[names[i]] = d.labels[static_cast<std::size_t>(k[std::size_t(i)])];
    blk["shape"] = t.shape();
    json data = json::array();
    for (const auto& x : t.data()) data.push_back(scalar_json(x));
    blk["data"] = data;
    F.push_back(blk);
  }
  j["F"] = F;
  json piv = json::object();
  for (int a = 0; a < d.rank(); ++a) piv[d.labels[std::size_t(a)]] = scalar_json(d.pivotal[std::size_t(a)]);
  j["pivotal"] = piv;
  j["spherical"] = d.spherical;
  if (!f.algebras.empty()) j["frobenius_algebras"] = f.algebras;
  if (!f.bimodules.empty()) j["bimodules"] = f.bimodules;
  return j;
}

}  // namespace sn
