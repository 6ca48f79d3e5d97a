#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sn/formats.hpp"
#include "support/common.hpp"
#include "support/stacking.hpp"

using namespace sn;
using namespace sn::testing;
using nlohmann::json;

namespace {

bool same_data(const FusionData& a, const FusionData& b, double eps) {
  if (a.labels != b.labels || a.unit != b.unit || a.dual != b.dual || a.N != b.N || a.F.size() != b.F.size())
    return false;
  for (const auto& [k, t] : a.F) {
    auto it = b.F.find(k);
    if (it == b.F.end() || !approx_equal(t, it->second, eps)) return false;
  }
  for (std::size_t i = 0; i < a.pivotal.size(); ++i)
    if (std::abs(a.pivotal[i] - b.pivotal[i]) > eps) return false;
  return a.spherical == b.spherical;
}

std::string sheet_path(const char* name) { return std::string(SN_DATA_DIR) + "/sheets/" + name; }
std::string graph_path(const char* name) { return std::string(SN_DATA_DIR) + "/graphs/" + name; }

}  // namespace

TEST_CASE("category files round-trip") {
  for (const char* name : kBundled) {
    CAPTURE(name);
    const CategoryFile f = bundled_file(name);
    const json j1 = category_json(f);
    const CategoryFile g = parse_category(json::parse(j1.dump()));
    CHECK(same_data(f.data, g.data, 1e-15));
    CHECK(category_json(g).dump() == j1.dump());
    CHECK(g.algebras == f.algebras);
  }
}

TEST_CASE("malformed category files are schema errors") {
  json j = category_json(bundled_file("z2.cat"));
  json bad = j;
  bad["N"].push_back({"0", "1", "2", 1});
  CHECK_THROWS_AS(parse_category(bad), SchemaError);
  bad = j;
  bad.erase("F");
  CHECK_THROWS_AS(parse_category(bad), SchemaError);
  bad = j;
  bad["F"][0]["data"].push_back(1.0);
  CHECK_THROWS_AS(parse_category(bad), SchemaError);
  CHECK_THROWS_AS(load_category("/nonexistent.cat"), SchemaError);
}

TEST_CASE("morphisms round-trip") {
  const Category cat(bundled("fib.cat"));
  std::mt19937_64 rng(3);
  const Word w = cat.data().word({"t", "t", "t"});
  const Morphism m = random_morphism(cat, w, {cat.data().label("t")}, rng);
  const Morphism back = parse_morphism(cat, json::parse(morphism_json(cat, m).dump()));
  CHECK(back.src == m.src);
  CHECK(back.tgt == m.tgt);
  CHECK((back - m).max_abs() < 1e-15);
  json bad = morphism_json(cat, m);
  bad["coefficients"].push_back(0.0);
  CHECK_THROWS_AS(parse_morphism(cat, bad), SchemaError);
}

TEST_CASE("random disk graphs round-trip") {
  for (const char* name : kBundled) {
    CAPTURE(name);
    const Category cat(bundled(name));
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
      const Stacked s = random_stacked(cat, rng);
      const json j = graph_json(cat, s.graph);
      const DiskGraph g = parse_graph(cat, json::parse(j.dump()));
      CHECK(g.vertex == s.graph.vertex);
      CHECK(g.partner == s.graph.partner);
      CHECK(g.label == s.graph.label);
      CHECK(g.rotation == s.graph.rotation);
      CHECK(g.boundary == s.graph.boundary);
      CHECK(g.circles == s.graph.circles);
      CHECK(graph_json(cat, g).dump() == j.dump());
      CHECK((evaluate_disk(cat, g) - evaluate_disk(cat, s.graph)).max_abs() < 1e-12);
    }
  }
}

TEST_CASE("bundled graph files") {
  const Category z2(bundled("z2.cat")), fib(bundled("fib.cat"));
  const DiskGraph e = load_graph(z2, graph_path("empty-on-unit.graph"));
  CHECK(std::abs(z2.as_scalar(evaluate_disk(z2, e)) - 1.0) < 1e-15);
  const DiskGraph loop = load_graph(fib, graph_path("fib-loop.graph"));
  CHECK(std::abs(fib.as_scalar(evaluate_disk(fib, loop)) - (1 + std::sqrt(5.0)) / 2) < 1e-12);
}

TEST_CASE("malformed graph files are schema errors") {
  const Category cat(bundled("fib.cat"));
  std::mt19937_64 rng(5);
  Stacked s;
  do s = random_stacked(cat, rng);
  while (s.vertices == 0);
  const json good = graph_json(cat, s.graph);
  json bad = good;
  bad["pairs"].erase(0);
  CHECK_THROWS_AS(parse_graph(cat, bad), SchemaError);
  bad = good;
  bad["colors"][0]["coefficients"].push_back(1.0);
  CHECK_THROWS_AS(parse_graph(cat, bad), SchemaError);
  bad = good;
  bad["half_edges"][0]["label"] = "q";
  CHECK_THROWS_AS(parse_graph(cat, bad), SchemaError);
  bad = good;
  bad["rotations"][0].push_back(999);
  CHECK_THROWS_AS(parse_graph(cat, bad), SchemaError);
  bad = good;
  bad["vertices"] = "two";
  CHECK_THROWS_AS(parse_graph(cat, bad), SchemaError);
}

TEST_CASE("world-sheet files round-trip") {
  const CategoryFile file = bundled_file("z2.cat");
  const Category cat(file.data);
  for (const char* name : {"z2-disk.sheet", "z2-circle.sheet"}) {
    CAPTURE(name);
    const WorldSheetFile w = load_world_sheet(cat, file, sheet_path(name));
    const json j = world_sheet_json(w);
    const WorldSheetFile v = parse_world_sheet(cat, file, json::parse(j.dump()));
    REQUIRE(v.sheet.layers.size() == w.sheet.layers.size());
    for (std::size_t i = 0; i < w.sheet.layers.size(); ++i)
      CHECK((v.sheet.layers[i].color - w.sheet.layers[i].color).max_abs() < 1e-15);
    CHECK(world_sheet_json(v).dump() == j.dump());
    CHECK((correlator_disk(cat, v.sheet) - correlator_disk(cat, w.sheet)).max_abs() < 1e-12);
  }
}

TEST_CASE("malformed world-sheet files are schema errors") {
  const CategoryFile file = bundled_file("z2.cat");
  const Category cat(file.data);
  const json good = load_json(sheet_path("z2-disk.sheet"));
  CHECK_NOTHROW(parse_world_sheet(cat, file, good));
  json bad = good;
  bad["bottom"] = {"Y"};
  CHECK_THROWS_AS(parse_world_sheet(cat, file, bad), SchemaError);
  bad = good;
  bad["bimodules"]["Xd"] = {{"kind", "dual"}, {"of", "Xd"}};
  CHECK_THROWS_AS(parse_world_sheet(cat, file, bad), SchemaError);
  bad = good;
  bad["layers"][0]["color"] = {{"coefficients", {1.0}}};
  CHECK_THROWS_AS(parse_world_sheet(cat, file, bad), SchemaError);
  bad = good;
  bad["left_phase"] = "1";
  CHECK_THROWS_AS(parse_world_sheet(cat, file, bad), SchemaError);
  bad = good;
  bad["layers"][2]["pos"] = 5;
  CHECK_THROWS_AS(parse_world_sheet(cat, file, bad), SchemaError);
}
