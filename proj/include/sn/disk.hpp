#pragma once

#include <stdexcept>
#include <vector>

#include "sn/graph.hpp"

namespace sn {

struct ColorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BoundaryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Hom(reversed duals of the inputs, outputs) for a polarized corolla.
struct ColorSpace {
  SWord legs;  // rotation order of the vertex
  Polarization pol;
  Word source, target;
  std::size_t dim = 0;
};

ColorSpace color_space(const Category& cat, const SWord& legs, const Polarization& k);
ColorSpace color_space(const Category& cat, const DiskGraph& g, const Polarization& k);

// State in Hom(1, legs rotated to start at k.root), from a color in the space of k.
Morphism to_state(const Category& cat, const SWord& legs, const Polarization& k, const Morphism& c);
Morphism from_state(const Category& cat, const SWord& legs, const Polarization& k, const Morphism& state);

Morphism change_polarization(const Category& cat, const SWord& legs, const Polarization& k1,
                             const Polarization& k2, const Morphism& c);
Morphism change_polarization(const Category& cat, const DiskGraph& g, const Polarization& k1,
                             const Polarization& k2, const Morphism& c);

// Values of partial results: a state with its legs in clockwise order.
struct State {
  SWord legs;
  Morphism value;
};

enum class MoveKind { operadic, partial_trace, horizontal, whisker };

// Slots are numbered; -1 stands for the empty diagram. Inputs are first rotated
// by rot_a / rot_b steps (first leg moved to the end).
//  operadic:      last leg of a joined to first leg of b
//  partial_trace: last two legs of a joined
//  horizontal:    b placed in the gap of a after `pos` legs
//  whisker:       a strand colored `strand` placed in the gap of a after `pos` legs
struct ElementaryMove {
  MoveKind kind = MoveKind::operadic;
  int out = -1;
  int a = -1, b = -1;
  int rot_a = 0, rot_b = 0;
  int pos = 0;
  SLabel strand{};
};

State rotate_state(const Category& cat, const State& s, int steps);
State apply_elementary(const Category& cat, const ElementaryMove& m, const std::vector<State>& inputs);

struct Decomposition {
  std::vector<int> vertex_slot;  // slot of each vertex before any move
  int num_slots = 0;
  std::vector<ElementaryMove> moves;
  int result = -1;
  int result_rotation = 0;
};

Decomposition decompose(const DiskGraph& g);
Morphism replay(const Category& cat, const DiskGraph& g, const Decomposition& d);

// Value of a fully colored disk graph as a state on its boundary corolla,
// rooted at the base point. Closed components are evaluated as scalars, which
// presumes spherical data.
Morphism evaluate_disk(const Category& cat, const DiskGraph& g);

struct Combination {
  std::vector<std::pair<Scalar, DiskGraph>> terms;
};
bool null_test(const Category& cat, const Combination& c, double tol = tolerance());

}  // namespace sn
