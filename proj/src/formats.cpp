#include "sn/formats.hpp"

#include <algorithm>

namespace sn {

using nlohmann::json;

namespace {

template <class F>
auto schema_guard(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw SchemaError(what + ": " + e.what());
  } catch (const LabelError& e) {
    throw SchemaError(what + ": " + e.what());
  } catch (const DimensionError& e) {
    throw SchemaError(what + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw SchemaError(what + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

json word_json(const Category& cat, const Word& w) {
  json j = json::array();
  for (int a : w) j.push_back(cat.data().labels.at(std::size_t(a)));
  return j;
}

json slabel_json(const Category& cat, const SLabel& s) {
  return {{"label", cat.data().labels.at(std::size_t(s.label))}, {"sign", s.sign}};
}

SLabel parse_slabel(const Category& cat, const json& j) {
  SLabel s{cat.data().label(j.at("label").get<std::string>()), j.value("sign", 1)};
  if (s.sign != 1 && s.sign != -1) throw SchemaError("sign must be +1 or -1");
  return s;
}

Obj parse_obj(const Category& cat, const json& j) {
  Obj x;
  for (const auto& s : j) {
    if (s.is_string())
      x.push_back({cat.data().label(s.get<std::string>())});
    else
      x.push_back(cat.data().word(s.get<std::vector<std::string>>()));
  }
  if (x.empty()) throw SchemaError("empty object");
  return x;
}

}  // namespace

json coefficients_json(const Eigen::VectorXcd& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(scalar_json(v(i)));
  return j;
}

Eigen::VectorXcd parse_coefficients(const json& j) {
  if (!j.is_array()) throw SchemaError("coefficients must be an array");
  Eigen::VectorXcd v(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Eigen::Index(i)) = parse_scalar(j[i]);
  return v;
}

json morphism_json(const Category& cat, const Morphism& m) {
  return {{"source", word_json(cat, m.src)},
          {"target", word_json(cat, m.tgt)},
          {"coefficients", coefficients_json(to_vector(lift(cat, m)))}};
}

Morphism parse_morphism(const Category& cat, const json& j) {
  return schema_guard("morphism", [&] {
    const Word s = cat.data().word(j.at("source").get<std::vector<std::string>>());
    const Word t = cat.data().word(j.at("target").get<std::vector<std::string>>());
    const Eigen::VectorXcd v = parse_coefficients(j.at("coefficients"));
    return from_vector(cat, {s}, {t}, v).part(cat, 0, 0);
  });
}

// ---- graphs ----

json graph_json(const Category& cat, const DiskGraph& g) {
  json j;
  j["vertices"] = g.num_vertices;
  json hs = json::array();
  for (int h = 0; h < g.num_half_edges(); ++h) {
    json e = slabel_json(cat, g.label[std::size_t(h)]);
    e["vertex"] = g.vertex[std::size_t(h)];
    hs.push_back(e);
  }
  j["half_edges"] = hs;
  json pairs = json::array();
  for (const auto& [a, b] : g.edges()) pairs.push_back({a, b});
  j["pairs"] = pairs;
  j["rotations"] = g.rotation;
  j["boundary"] = g.boundary;
  json circles = json::array();
  for (const auto& s : g.circles) circles.push_back(slabel_json(cat, s));
  j["circles"] = circles;
  json colors = json::array();
  for (const auto& c : g.colors) {
    if (!c) continue;
    colors.push_back({{"vertex", c->pol.vertex},
                      {"root", c->pol.root},
                      {"outputs", c->pol.outputs},
                      {"coefficients", coefficients_json(to_vector(lift(cat, c->value)))}});
  }
  j["colors"] = colors;
  return j;
}

DiskGraph parse_graph(const Category& cat, const json& j) {
  DiskGraph g = schema_guard("graph file", [&] {
    DiskGraph g;
    g.num_vertices = j.at("vertices").get<int>();
    if (g.num_vertices < 0) throw SchemaError("negative vertex count");
    for (const auto& e : j.at("half_edges")) {
      const int v = e.at("vertex").get<int>();
      if (v < -1 || v >= g.num_vertices) throw SchemaError("half-edge at unknown vertex");
      g.vertex.push_back(v);
      g.label.push_back(parse_slabel(cat, e));
    }
    const int n = g.num_half_edges();
    auto check_h = [&](int h) {
      if (h < 0 || h >= n) throw SchemaError("half-edge id out of range");
      return h;
    };
    g.partner.assign(std::size_t(n), -1);
    for (const auto& p : j.at("pairs")) {
      const int a = check_h(p.at(0).get<int>()), b = check_h(p.at(1).get<int>());
      if (a == b || g.partner[std::size_t(a)] >= 0 || g.partner[std::size_t(b)] >= 0)
        throw SchemaError("pairs do not form an involution");
      g.partner[std::size_t(a)] = b;
      g.partner[std::size_t(b)] = a;
    }
    if (std::find(g.partner.begin(), g.partner.end(), -1) != g.partner.end())
      throw SchemaError("unpaired half-edge");
    g.rotation = j.at("rotations").get<std::vector<std::vector<int>>>();
    if (int(g.rotation.size()) != g.num_vertices) throw SchemaError("one rotation per vertex expected");
    g.boundary = j.at("boundary").get<std::vector<int>>();
    for (const auto& r : g.rotation)
      for (int h : r) check_h(h);
    for (int h : g.boundary) check_h(h);
    if (j.contains("circles"))
      for (const auto& c : j["circles"]) g.circles.push_back(parse_slabel(cat, c));
    g.colors.assign(std::size_t(g.num_vertices), std::nullopt);
    const GraphReport shape = validate_graph(g);
    if (!shape.valid()) throw SchemaError("graph file: " + shape.errors.front());
    if (j.contains("colors"))
      for (const auto& c : j["colors"]) {
        const Polarization p{c.at("vertex").get<int>(), c.at("root").get<int>(), c.at("outputs").get<int>()};
        if (!is_polarization(g, p)) throw SchemaError("invalid polarization");
        if (g.colors[std::size_t(p.vertex)]) throw SchemaError("vertex colored twice");
        const ColorSpace cs = color_space(cat, g, p);
        const Eigen::VectorXcd v = parse_coefficients(c.at("coefficients"));
        if (std::size_t(v.size()) != cs.dim)
          throw SchemaError("color of vertex " + std::to_string(p.vertex) + " needs " + std::to_string(cs.dim) +
                            " coefficients");
        g.colors[std::size_t(p.vertex)] =
            VertexColor{p, from_vector(cat, {cs.source}, {cs.target}, v).part(cat, 0, 0)};
      }
    return g;
  });
  const GraphReport r = validate_graph(g, &cat);
  if (!r.valid()) throw SchemaError("graph file: " + r.errors.front());
  return g;
}

DiskGraph load_graph(const Category& cat, const std::string& path) { return parse_graph(cat, load_json(path)); }

// ---- world sheets ----

AlgebraPtr Catalog::algebra(const std::string& name) const {
  auto it = algebras.find(name);
  if (it == algebras.end()) throw SchemaError("unknown algebra " + name);
  return it->second;
}

const Bimodule& Catalog::bimodule(const std::string& name) const {
  auto it = bimodules.find(name);
  if (it == bimodules.end()) throw SchemaError("unknown bimodule " + name);
  return it->second;
}

Catalog make_catalog(const Category& cat, const CategoryFile& file) {
  Catalog c;
  c.algebras["1"] = trivial_algebra(cat);
  for (const auto& a : parse_algebras(cat, file.algebras)) {
    if (c.algebras.count(a->name)) throw SchemaError("duplicate algebra " + a->name);
    c.algebras[a->name] = a;
  }
  if (!file.bimodules.is_null() && !file.bimodules.empty()) add_bimodules(cat, c, file.bimodules);
  c.bimodule_defs = json::object();
  return c;
}

void add_bimodules(const Category& cat, Catalog& c, const json& defs) {
  schema_guard("bimodule definitions", [&] {
    if (!defs.is_object()) throw SchemaError("bimodules must be an object keyed by name");
    // nlohmann orders object keys, so definitions are resolved until no progress
    std::vector<std::string> pending;
    for (const auto& [k, v] : defs.items()) pending.push_back(k);
    while (!pending.empty()) {
      std::vector<std::string> rest;
      for (const auto& name : pending) {
        const json& d = defs[name];
        if (c.bimodules.count(name)) throw SchemaError("duplicate bimodule " + name);
        const std::string kind = d.at("kind").get<std::string>();
        Bimodule x;
        if (kind == "regular") {
          x = regular_bimodule(cat, c.algebra(d.at("algebra").get<std::string>()));
        } else if (kind == "free") {
          x = free_bimodule(cat, c.algebra(d.at("left").get<std::string>()), c.algebra(d.at("right").get<std::string>()),
                            parse_obj(cat, d.at("object")));
        } else if (kind == "random") {
          x = random_bimodule(cat, c.algebra(d.at("left").get<std::string>()),
                              c.algebra(d.at("right").get<std::string>()), d.at("seed").get<unsigned>(),
                              d.value("max_summands", std::size_t(2)));
        } else if (kind == "dual") {
          const std::string of = d.at("of").get<std::string>();
          if (!c.bimodules.count(of)) {
            if (!defs.contains(of)) throw SchemaError("unknown bimodule " + of);
            rest.push_back(name);
            continue;
          }
          x = dual_bimodule(cat, c.bimodules.at(of));
        } else {
          throw SchemaError("unknown bimodule kind " + kind);
        }
        x.name = name;
        c.bimodules[name] = x;
        c.bimodule_defs[name] = d;
      }
      if (rest.size() == pending.size()) throw SchemaError("cyclic dual bimodule definitions");
      pending = std::move(rest);
    }
    return 0;
  });
}

WorldSheetFile parse_world_sheet(const Category& cat, const CategoryFile& file, const json& j) {
  WorldSheetFile out{{}, make_catalog(cat, file)};
  schema_guard("world-sheet file", [&] {
    Catalog& c = out.catalog;
    if (j.contains("bimodules")) add_bimodules(cat, c, j["bimodules"]);
    WorldSheet& w = out.sheet;
    w.left_phase = c.algebra(j.at("left_phase").get<std::string>());
    for (const auto& n : j.at("bottom")) w.bottom.push_back(c.bimodule(n.get<std::string>()));
    std::vector<Bimodule> lines = w.bottom;
    for (const auto& l : j.at("layers")) {
      Coupon cp;
      cp.pos = l.at("pos").get<int>();
      cp.inputs = l.at("inputs").get<int>();
      for (const auto& n : l.at("outputs")) cp.outputs.push_back(c.bimodule(n.get<std::string>()));
      if (cp.pos < 0 || cp.inputs < 0 || std::size_t(cp.pos + cp.inputs) > lines.size())
        throw SchemaError("coupon outside the frontier");
      const AlgebraPtr phase = cp.pos == 0 ? w.left_phase : lines[std::size_t(cp.pos - 1)].right;
      const std::vector<Bimodule> ins(lines.begin() + cp.pos, lines.begin() + cp.pos + cp.inputs);
      const Bimodule x = composite(cat, ins, phase).obj, y = composite(cat, cp.outputs, phase).obj;
      const json& col = l.at("color");
      if (col.is_string() && col.get<std::string>() == "identity") {
        if (x.object != y.object) throw SchemaError("identity color between different objects");
        cp.color = sum_identity(cat, x.object);
      } else if (col.is_object() && col.contains("coefficients")) {
        cp.color = from_vector(cat, x.object, y.object, parse_coefficients(col["coefficients"]));
      } else if (col.is_object() && col.contains("average_seed")) {
        cp.color = average_map(cat, x, y,
                               random_sum_morphism(cat, x.object, y.object, col["average_seed"].get<unsigned>()));
      } else {
        throw SchemaError("color must be \"identity\", {coefficients} or {average_seed}");
      }
      lines.erase(lines.begin() + cp.pos, lines.begin() + cp.pos + cp.inputs);
      lines.insert(lines.begin() + cp.pos, cp.outputs.begin(), cp.outputs.end());
      w.layers.push_back(std::move(cp));
    }
    auto side = [&](const char* key, std::optional<Bimodule>& slot) {
      if (j.contains(key) && !j[key].is_null()) slot = c.bimodule(j[key].get<std::string>());
    };
    side("left_physical", w.left_physical);
    side("right_physical", w.right_physical);
    side("circle", w.circle);
    return 0;
  });
  std::string err;
  try {
    err = validate_world_sheet(cat, out.sheet);
  } catch (const WorldSheetError& e) {
    err = e.what();
  }
  if (!err.empty()) throw SchemaError("world-sheet file: " + err);
  return out;
}

WorldSheetFile load_world_sheet(const Category& cat, const CategoryFile& file, const std::string& path) {
  return parse_world_sheet(cat, file, load_json(path));
}

json world_sheet_json(const WorldSheetFile& f) {
  const WorldSheet& w = f.sheet;
  json j;
  j["bimodules"] = f.catalog.bimodule_defs;
  j["left_phase"] = w.left_phase->trivial() ? std::string("1") : w.left_phase->name;
  json bottom = json::array();
  for (const auto& x : w.bottom) bottom.push_back(x.name);
  j["bottom"] = bottom;
  json layers = json::array();
  for (const auto& c : w.layers) {
    json outs = json::array();
    for (const auto& x : c.outputs) outs.push_back(x.name);
    layers.push_back({{"pos", c.pos},
                      {"inputs", c.inputs},
                      {"outputs", outs},
                      {"color", {{"coefficients", coefficients_json(to_vector(c.color))}}}});
  }
  j["layers"] = layers;
  if (w.left_physical) j["left_physical"] = w.left_physical->name;
  if (w.right_physical) j["right_physical"] = w.right_physical->name;
  if (w.circle) j["circle"] = w.circle->name;
  return j;
}

}  // namespace sn
