#pragma once

#include <stdexcept>
#include <vector>

#include "sn/disk.hpp"
#include "sn/planar.hpp"

namespace sn {

struct SewingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IdempotencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StringNetSpace {
  enum class Surface { disk, annulus };
  Surface surface = Surface::disk;
  BoundaryDatum datum;
  std::size_t dim = 0;
  std::vector<Morphism> basis;  // states in Hom(1, objects of the datum)
};

StringNetSpace disk_space(const Category& cat, const BoundaryDatum& b);

// Disk graph with a single coupon colored f : src -> tgt.
DiskGraph coupon_disk(const Category& cat, const Morphism& f);
// Value of a disk graph whose first n_out boundary points form the top of a
// square and the rest its bottom, as a morphism bottom -> top.
Morphism disk_morphism(const Category& cat, const DiskGraph& g, int n_out);

// Glues the last n boundary points of `top` to the first n of `bottom`.
DiskGraph sew(const DiskGraph& top, const DiskGraph& bottom, int n);

// Morphisms of the cylinder category over an interval whose ends touch the
// base object; data are read upward along the interval.
struct IntervalHoms {
  BoundaryDatum cut;  // boundary of the cut-open square
  std::size_t dim = 0;
  std::vector<Morphism> basis;  // Hom(objects(source), objects(target))
};
IntervalHoms interval_cylinder_homs(const Category& cat, const SWord& source, const SWord& target);

// Annulus string nets in transversal position: the strand x crosses a fixed
// radial cut once, mu : x inner -> outer x.
struct AnnulusTerm {
  int x = 0;
  Morphism mu;
};
struct Annulus {
  Word inner, outer;
  std::vector<AnnulusTerm> terms;
};

Annulus annulus_identity(const Category& cat, const Word& w);
Annulus annulus_from_disk(const Category& cat, const Morphism& f);
// Replaces a strand colored by a word by a sum over simple strands.
Annulus normalize_strand(const Category& cat, const Word& x, const Word& inner, const Word& outer, const Morphism& mu);
// Coordinates in the direct sum over x of Hom(x inner, outer x).
Eigen::VectorXcd annulus_vector(const Category& cat, const Annulus& a);
Annulus annulus_from_vector(const Category& cat, const Word& inner, const Word& outer, const Eigen::VectorXcd& v);
double annulus_distance(const Category& cat, const Annulus& a, const Annulus& b);
Annulus operator*(const Annulus& a, Scalar s);
Annulus operator+(const Annulus& a, const Annulus& b);

// Cut-open disk of the sewn annulus for one fusion channel z of the strands.
DiskGraph cut_open(const Category& cat, const AnnulusTerm& outer, const Word& mid, const AnnulusTerm& inner,
                   const Word& in, int z, const Morphism& split, const Morphism& fuse);
// `outer` after `inner`, sewn along the common circle.
Annulus sew(const Category& cat, const Annulus& outer, const Annulus& inner);
// Annulus glued onto a disk state in Hom(1, inner).
Morphism sew(const Category& cat, const Annulus& a, const Morphism& state);

// Dual bases of Hom(z, w) and Hom(w, z) with pi_i iota_j = delta_ij id_z.
std::pair<std::vector<Morphism>, std::vector<Morphism>> dual_bases(const Category& cat, int z, const Word& w);

Annulus dehn_twist(const Category& cat, const Word& w);
Annulus dehn_twist_inverse(const Category& cat, const Word& w);

struct Tube {
  int a = 0, b = 0, x = 0;
  std::size_t k = 0;  // basis index in Hom(x a, b x)
};

// e_i * e_j = e_i after e_j.
struct TubeAlgebra {
  std::vector<Tube> basis;
  std::vector<Eigen::MatrixXcd> left;  // left[i].col(j) = e_i * e_j
  Eigen::VectorXcd unit;
  double associativity_residual = 0;
  double unit_residual = 0;

  std::size_t dim() const { return basis.size(); }
  Eigen::VectorXcd multiply(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd left_matrix(const Eigen::VectorXcd& u) const;
};

TubeAlgebra tube_algebra(const Category& cat);
Annulus tube_annulus(const Category& cat, const TubeAlgebra& t, std::size_t i);
// Coordinates of a sum of single-point annuli a -> b in the tube basis.
Eigen::VectorXcd tube_coordinates(const Category& cat, const TubeAlgebra& t, const Annulus& a);
Annulus tube_element(const Category& cat, const TubeAlgebra& t, const Eigen::VectorXcd& v, int a, int b);

struct WedderburnReport {
  std::size_t center_dim = 0;
  std::vector<int> block_dims;
  std::vector<Eigen::VectorXcd> central_idempotents;
  bool semisimple = true;
  double radical_norm = 0;  // smallest singular value of the trace form
  double idempotent_residual = 0;
  unsigned seed = 0;
};

// Artin-Wedderburn blocks of an algebra given by its left multiplication matrices.
WedderburnReport wedderburn(const std::vector<Eigen::MatrixXcd>& left, const Eigen::VectorXcd& unit, unsigned seed = 7,
                            double tol = tolerance());
WedderburnReport karoubi_split(const TubeAlgebra& t, unsigned seed = 7, double tol = tolerance());

struct IdempotentSplit {
  std::size_t rank = 0;
  Eigen::MatrixXcd iota, pi;  // pi iota = 1, iota pi = e
  double residual = 0;
};
IdempotentSplit split_idempotent(const Eigen::MatrixXcd& e, double tol = tolerance());

struct ThickenedBoundaryDatum {
  BoundaryDatum datum;
  Annulus idempotent;
};
StringNetSpace karoubified_disk_space(const Category& cat, const ThickenedBoundaryDatum& b, double tol = tolerance());

// Coend over middle interval data of the disk spaces on either side of a cut.
struct ThickenedInterval {
  Word word;
  Morphism idempotent;
};
std::vector<ThickenedInterval> plain_middles(const Category& cat, std::size_t max_len);
std::vector<ThickenedInterval> isotypic_middles(const Category& cat, std::size_t max_len);

struct CoendReport {
  std::size_t total_dim = 0;
  std::size_t relations_rank = 0;
  std::size_t quotient_dim = 0;
  std::size_t glued_dim = 0;
  std::size_t sewing_rank = 0;
  double dinaturality_residual = 0;
};
// Disk with top p over disk with bottom r, cut along an interval.
CoendReport disk_coend(const Category& cat, const Word& p, const Word& r, const std::vector<ThickenedInterval>& middles,
                       double tol = tolerance());

}  // namespace sn
