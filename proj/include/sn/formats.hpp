#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "sn/disk.hpp"
#include "sn/io.hpp"
#include "sn/worldsheet.hpp"

namespace sn {

// Coefficients are the basis coordinates, blocks by charge, each row-major.
nlohmann::json coefficients_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd parse_coefficients(const nlohmann::json& j);

nlohmann::json morphism_json(const Category& cat, const Morphism& m);
Morphism parse_morphism(const Category& cat, const nlohmann::json& j);

// Graph file:
//   vertices: n
//   half_edges: [{vertex, label, sign}]   vertex -1 marks a boundary point
//   pairs: [[h, h'], ...]                 the edge involution
//   rotations: [[h, ...], ...]            clockwise per vertex
//   boundary: [h, ...]                    clockwise from the base point
//   circles: [{label, sign}]
//   colors: [{vertex, root, outputs, coefficients}]
nlohmann::json graph_json(const Category& cat, const DiskGraph& g);
DiskGraph parse_graph(const Category& cat, const nlohmann::json& j);
DiskGraph load_graph(const Category& cat, const std::string& path);

// Algebras and bimodules a world-sheet file may refer to by name; "1" is the
// trivial algebra.
struct Catalog {
  std::map<std::string, AlgebraPtr> algebras;
  std::map<std::string, Bimodule> bimodules;
  nlohmann::json bimodule_defs = nlohmann::json::object();

  AlgebraPtr algebra(const std::string& name) const;
  const Bimodule& bimodule(const std::string& name) const;
};
Catalog make_catalog(const Category& cat, const CategoryFile& file);
// Definitions are {kind: regular|free|dual|random, ...}; later entries may refer to earlier ones.
void add_bimodules(const Category& cat, Catalog& c, const nlohmann::json& defs);

// World-sheet file:
//   bimodules: {name: definition}
//   left_phase, bottom: [name], layers: [{pos, inputs, outputs, color}]
//   color: {coefficients} | {average_seed} | "identity"
//   left_physical, right_physical, circle: optional bimodule names
struct WorldSheetFile {
  WorldSheet sheet;
  Catalog catalog;
};
WorldSheetFile parse_world_sheet(const Category& cat, const CategoryFile& file, const nlohmann::json& j);
WorldSheetFile load_world_sheet(const Category& cat, const CategoryFile& file, const std::string& path);
nlohmann::json world_sheet_json(const WorldSheetFile& f);

}  // namespace sn
