#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "sn/fusion.hpp"

namespace sn {

using Mat = Eigen::MatrixXcd;

// Hom(src, tgt) in the left-combed basis, split by intermediate charge s:
// blocks[s] has shape dim(s, tgt) x dim(s, src).
struct Morphism {
  Word src, tgt;
  std::vector<Mat> blocks;

  std::size_t dim() const;
  DenseTensor flat() const;
  Morphism operator+(const Morphism& o) const;
  Morphism operator-(const Morphism& o) const;
  Morphism operator*(Scalar s) const;
  double max_abs() const;
  bool is_scalar() const { return src.empty() && tgt.empty(); }
};

// A strand end: label with orientation. sign=+1 reads as the object `label`,
// sign=-1 as its dual.
struct SLabel {
  int label = 0;
  int sign = 1;
  bool operator==(const SLabel& o) const { return label == o.label && sign == o.sign; }
  bool operator<(const SLabel& o) const {
    return std::tie(label, sign) < std::tie(o.label, o.sign);
  }
};
using SWord = std::vector<SLabel>;

class Category {
public:
  explicit Category(FusionData data);

  const FusionData& data() const { return *data_; }
  int rank() const { return data_->rank(); }
  int unit() const { return data_->unit; }
  int dual(int a) const { return data_->dual[a]; }
  int n(int a, int b, int c) const { return data_->n(a, b, c); }

  int obj(const SLabel& s) const { return s.sign > 0 ? s.label : dual(s.label); }
  Word objects(const SWord& w) const;
  static SLabel reverse(const SLabel& s) { return {s.label, -s.sign}; }

  // Left-combed tree dimension of `w` with total charge u.
  std::size_t tree_dim(const Word& w, int u) const;
  // Offset of the block with last intermediate e in the basis of (w + {y}) at charge u.
  std::size_t tree_offset(const Word& prefix, int y, int u, int e) const;
  std::size_t hom_dim(const Word& src, const Word& tgt) const;

  // F as a matrix from left-tree index (e,alpha,beta) to right-tree index (f,gamma,delta).
  const Mat& fmatrix(int a, int b, int c, int d) const;
  const Mat& fmatrix_inv(int a, int b, int c, int d) const;
  std::size_t fleft_index(int a, int b, int c, int d, int e, int alpha, int beta) const;
  std::size_t fright_index(int a, int b, int c, int d, int f, int gamma, int delta) const;

  // Rows (s, s', v, v', mu) of the grafted family, columns left-combed basis of y1 y2 at u.
  const Mat& graft(const Word& y1, const Word& y2, int u) const;
  const Mat& graft_inv(const Word& y1, const Word& y2, int u) const;

  Morphism zero(const Word& src, const Word& tgt) const;
  Morphism identity(const Word& w) const;
  Morphism compose(const Morphism& g, const Morphism& f) const;  // g after f
  Morphism tensor(const Morphism& f, const Morphism& g) const;
  Morphism tensor(const std::vector<Morphism>& fs) const;
  Morphism from_flat(const Word& src, const Word& tgt, const DenseTensor& t) const;
  Morphism basis_element(const Word& src, const Word& tgt, std::size_t k) const;
  Scalar as_scalar(const Morphism& m) const;

  Morphism split_vertex(int a, int b, int c, int mu) const;  // c -> a b
  Morphism fuse_vertex(int a, int b, int c, int mu) const;   // a b -> c

  Morphism coev(int a) const;    // 1 -> a abar
  Morphism ev(int a) const;      // abar a -> 1
  Morphism coev_r(int a) const;  // 1 -> abar a
  Morphism ev_r(int a) const;    // a abar -> 1

  // Oriented cap on (s, reverse s) and cup producing (s, reverse s).
  Morphism cap(const SLabel& s) const;
  Morphism cup(const SLabel& s) const;

  // Moves the first leg of a state in Hom(1, objects(w)) to the end.
  Morphism rotate(const SWord& w, const Morphism& beta) const;

  // id_left (x) m (x) id_right
  Morphism pad(const Word& left, const Morphism& m, const Word& right) const;

  Scalar ev_norm(int a) const { return ev_norm_[a]; }

private:
  struct TreeInfo {
    std::vector<std::size_t> dim;                   // per charge
    std::vector<std::vector<std::size_t>> offset;   // [u][e] for words of length >= 1
  };
  const TreeInfo& tree(const Word& w) const;

  std::shared_ptr<const FusionData> data_;
  std::vector<Scalar> ev_norm_;

  mutable std::recursive_mutex mu_;
  struct KeyHash {
    std::size_t operator()(const Word& w) const;
    std::size_t operator()(const std::tuple<Word, Word, int>& k) const;
  };
  const std::pair<Mat, Mat>& graft_pair(const Word& y1, const Word& y2, int u) const;

  mutable std::unordered_map<Word, std::unique_ptr<TreeInfo>, KeyHash> trees_;
  mutable std::map<std::array<int, 4>, std::pair<Mat, Mat>> fmat_;
  mutable std::unordered_map<std::tuple<Word, Word, int>, std::pair<Mat, Mat>, KeyHash> graft_;
};

}  // namespace sn
