#pragma once

#include <vector>

#include "sn/category.hpp"

namespace sn {

// Direct sum of words; summand order of X (x) Y is (i, j) -> i * |Y| + j.
using Obj = std::vector<Word>;

// Per charge u, blocks[u] stacks the tree bases of the summands: rows run
// over tgt summands in order, columns over src summands.
struct SumMorphism {
  Obj src, tgt;
  std::vector<Mat> blocks;

  Morphism part(const Category& cat, std::size_t i, std::size_t j) const;  // src[j] -> tgt[i]
  void set_part(const Category& cat, std::size_t i, std::size_t j, const Morphism& m);
  SumMorphism operator+(const SumMorphism& o) const;
  SumMorphism operator-(const SumMorphism& o) const;
  SumMorphism operator*(Scalar s) const;
  double max_abs() const;
  std::size_t dim() const;
};

// Cumulative tree dimensions of the summands of x at charge u.
std::vector<std::size_t> summand_offsets(const Category& cat, const Obj& x, int u);

Obj obj_tensor(const Obj& x, const Obj& y);
Obj obj_dual(const Category& cat, const Obj& x);
Obj unit_obj();  // single empty word

SumMorphism sum_zero(const Category& cat, const Obj& src, const Obj& tgt);
SumMorphism sum_identity(const Category& cat, const Obj& x);
SumMorphism sum_compose(const Category& cat, const SumMorphism& g, const SumMorphism& f);
SumMorphism sum_compose(const Category& cat, const std::vector<SumMorphism>& chain);  // last applied first
SumMorphism sum_tensor(const Category& cat, const SumMorphism& f, const SumMorphism& g);
SumMorphism sum_tensor(const Category& cat, const std::vector<SumMorphism>& fs);
SumMorphism lift(const Category& cat, const Morphism& m);  // single-summand view
Scalar sum_scalar(const Category& cat, const SumMorphism& m);

Eigen::VectorXcd to_vector(const SumMorphism& m);
SumMorphism from_vector(const Category& cat, const Obj& src, const Obj& tgt, const Eigen::VectorXcd& v);
std::size_t sum_hom_dim(const Category& cat, const Obj& src, const Obj& tgt);

// Dualities of words: w^v is the reversed word of duals.
Word word_dual(const Category& cat, const Word& w);
Morphism coev_word(const Category& cat, const Word& w);    // 1 -> w w^v
Morphism ev_word(const Category& cat, const Word& w);      // w^v w -> 1
Morphism coev_r_word(const Category& cat, const Word& w);  // 1 -> w^v w
Morphism ev_r_word(const Category& cat, const Word& w);    // w w^v -> 1

SumMorphism coev_obj(const Category& cat, const Obj& x);    // 1 -> X X^v
SumMorphism ev_obj(const Category& cat, const Obj& x);      // X^v X -> 1
SumMorphism coev_r_obj(const Category& cat, const Obj& x);  // 1 -> X^v X
SumMorphism ev_r_obj(const Category& cat, const Obj& x);    // X X^v -> 1

// Matrix of a linear map between SumMorphism spaces, column k = image of basis vector k.
template <class F>
Eigen::MatrixXcd linear_map_matrix(const Category& cat, const Obj& src, const Obj& tgt, F&& f) {
  const std::size_t n = sum_hom_dim(cat, src, tgt);
  Eigen::MatrixXcd m;
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    e(static_cast<Eigen::Index>(k)) = 1.0;
    const Eigen::VectorXcd col = to_vector(f(from_vector(cat, src, tgt, e)));
    if (k == 0) m.resize(col.size(), static_cast<Eigen::Index>(n));
    m.col(static_cast<Eigen::Index>(k)) = col;
  }
  return m;
}

}  // namespace sn
