#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sn/category.hpp"

namespace sn {

// H_out = `outputs` consecutive half-edges clockwise from `root`; the rest are inputs.
struct Polarization {
  int vertex = 0;
  int root = 0;
  int outputs = 0;
  bool operator==(const Polarization&) const = default;
};

struct VertexColor {
  Polarization pol;
  Morphism value;
};

// Graph embedded in a disk. Half-edges with vertex -1 are boundary points.
// label[h] is the edge color read away from the endpoint of h; the edge
// direction is the half-edge whose label has sign +.
struct DiskGraph {
  int num_vertices = 0;
  std::vector<int> vertex;
  std::vector<int> partner;
  std::vector<SLabel> label;
  std::vector<std::vector<int>> rotation;  // clockwise
  std::vector<int> boundary;               // clockwise from the base point
  std::vector<SLabel> circles;             // closed strands without vertices
  std::vector<std::optional<VertexColor>> colors;

  int add_vertex();
  // Adds an edge from endpoint u to endpoint v (vertex id or -1) colored s as read from u.
  std::pair<int, int> add_edge(int u, int v, SLabel s);

  int num_half_edges() const { return static_cast<int>(vertex.size()); }
  bool is_boundary(int h) const { return vertex[static_cast<std::size_t>(h)] < 0; }
  int delta(int h) const;  // source half-edge of the edge through h
  std::vector<std::pair<int, int>> edges() const;  // (h, partner) with h < partner
  SWord legs(int v) const;                         // signed labels in rotation order
  bool fully_colored() const;
};

struct GraphReport {
  std::vector<std::string> errors;
  bool valid() const { return errors.empty(); }
};

struct BoundaryDatum {
  SWord points;  // colors read outward, clockwise from the base point
  bool operator==(const BoundaryDatum&) const = default;
};

GraphReport validate_graph(const DiskGraph& g, const Category* cat = nullptr);
BoundaryDatum boundary_datum_of(const DiskGraph& g);
DiskGraph corolla_of_datum(const BoundaryDatum& b);
std::vector<Polarization> enumerate_polarizations(const DiskGraph& g, int v);
bool is_polarization(const DiskGraph& g, const Polarization& p);
// Builds the polarization with the given linearly ordered arcs; throws
// std::invalid_argument unless both are consecutive in the rotation.
Polarization make_polarization(const DiskGraph& g, int v, const std::vector<int>& outputs,
                               const std::vector<int>& inputs);
// Points every edge away from its smaller endpoint (vertices before boundary
// points), dualizing the color and rescaling an adjacent vertex color so that
// the value is unchanged.
DiskGraph canonicalize(const Category& cat, const DiskGraph& g);

}  // namespace sn
