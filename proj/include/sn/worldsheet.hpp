#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sn/frobenius.hpp"

namespace sn {

struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WorldSheetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A 0-cell of the defect network: replaces `inputs` consecutive defect lines
// starting at `pos` by `outputs`. The color is a bimodule map between the
// composites of inputs and outputs; an empty side stands for the regular
// bimodule of the adjacent phase.
struct Coupon {
  int pos = 0;
  int inputs = 0;
  std::vector<Bimodule> outputs;
  SumMorphism color;
};

// World sheet on a disk, presented as a stack of coupons between a bottom and
// a top row of sewing boundary. The left and right sides lie in the outer
// phases; each side may instead be a physical boundary with a module. A disk
// whose whole boundary is physical has empty rows and `circle` set.
struct WorldSheet {
  AlgebraPtr left_phase;
  std::vector<Bimodule> bottom;
  std::vector<Coupon> layers;
  std::optional<Bimodule> left_physical;   // 1-A module along the left side
  std::optional<Bimodule> right_physical;  // A-1 module along the right side
  std::optional<Bimodule> circle;          // 1-A module around the whole boundary

  bool sewing_only() const { return !left_physical && !right_physical && !circle; }
};

struct Frontier {
  AlgebraPtr left, right;  // outer phases
  std::vector<Bimodule> lines;
  AlgebraPtr phase(std::size_t gap) const;  // gap 0 is the left side
};

// Frontiers before and after each layer; throws WorldSheetError on
// incompatible phases or colors.
std::vector<Frontier> frontiers(const Category& cat, const WorldSheet& w);
std::string validate_world_sheet(const Category& cat, const WorldSheet& w, double tol = tolerance());

struct ComplementedWorldSheet {
  WorldSheet net;  // sewing boundary only
  int transparent_cells = 0;
  bool annular_cell = false;
  int euler_characteristic = 1;
  int boundary_components = 1;
};
ComplementedWorldSheet complement(const Category& cat, const WorldSheet& w);

// Value of the net in Fr(C): a bimodule map between the composites of the
// bottom and top rows (the regular bimodule of the side phase when empty).
SumMorphism fr_evaluate(const Category& cat, const WorldSheet& w);

enum class FrobeniusGraph { tree, dense, bubbles };
const char* to_string(FrobeniusGraph g);

// Plain C-objects of the rows and the field idempotent on Hom(bottom, top).
Obj row_object(const std::vector<Bimodule>& row);
SumMorphism apply_field_idempotent(const Category& cat, const Frontier& bottom, const Frontier& top,
                                   const SumMorphism& f);

struct CorrelatorReport {
  SumMorphism raw;    // conjugated net with Frobenius graphs
  SumMorphism value;  // projected to the field datum
  std::size_t field_dim = 0;
  double raw_residual = 0;  // |value - raw|
};
CorrelatorReport correlator_report(const Category& cat, const WorldSheet& w, FrobeniusGraph g = FrobeniusGraph::tree,
                                   bool with_field_dim = false);
SumMorphism correlator_disk(const Category& cat, const WorldSheet& w, FrobeniusGraph g = FrobeniusGraph::tree);

struct UniversalReport {
  double fr_distance = 0, cor_distance = 0;
  bool fr_equal = false, cor_equal = false;
  bool holds() const { return !fr_equal || cor_equal; }
};
UniversalReport universal_correlator_test(const Category& cat, const WorldSheet& w1, const WorldSheet& w2,
                                          FrobeniusGraph g1 = FrobeniusGraph::tree,
                                          FrobeniusGraph g2 = FrobeniusGraph::tree, double tol = tolerance());

// Local moves. contract replaces layers first..last by one coupon colored by
// the Fr(C) value of the smallest window of lines containing them.
WorldSheet contract(const Category& cat, const WorldSheet& w, std::size_t first, std::size_t last);
// Swaps layers i and i + 1 when their coupons are disjoint; nullopt otherwise.
std::optional<WorldSheet> interchange(const WorldSheet& w, std::size_t i);
WorldSheet scale_layer(const WorldSheet& w, std::size_t i, Scalar s);

struct RandomSheetOptions {
  std::size_t layers = 3;
  std::size_t max_lines = 3;
  std::size_t max_summands = 1;
};
WorldSheet random_world_sheet(const Category& cat, const std::vector<AlgebraPtr>& phases, unsigned seed,
                              const RandomSheetOptions& opt = {});

// Vertex-wise conjugation by a rigid pseudofunctor out of Fr(C).
WorldSheet conjugate_stringnet(const FrobFunctor& f, const WorldSheet& w, double tol = tolerance());

struct FrobeniusConjugate {
  SumMorphism value;
  Eigen::MatrixXcd idempotent;  // on the coordinates of Hom(bottom, top)
  std::size_t dim = 0;          // rank of the idempotent
};
FrobeniusConjugate frobenius_conjugate_stringnet(const FrobFunctor& f, const WorldSheet& w,
                                                 FrobeniusGraph g = FrobeniusGraph::tree, double tol = tolerance());

}  // namespace sn
