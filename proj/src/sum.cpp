#include "sn/sum.hpp"

#include <Eigen/Sparse>

namespace sn {

namespace {

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

void check_same(const SumMorphism& a, const SumMorphism& b) {
  if (a.src != b.src || a.tgt != b.tgt) throw DimensionError("sum morphisms of different type");
}

Eigen::Index ix(std::size_t k) { return static_cast<Eigen::Index>(k); }

}  // namespace

std::vector<std::size_t> summand_offsets(const Category& cat, const Obj& x, int u) {
  std::vector<std::size_t> off(x.size() + 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i) off[i + 1] = off[i] + cat.tree_dim(x[i], u);
  return off;
}

Morphism SumMorphism::part(const Category& cat, std::size_t i, std::size_t j) const {
  Morphism m = cat.zero(src.at(j), tgt.at(i));
  for (int u = 0; u < cat.rank(); ++u) {
    Mat& b = m.blocks[static_cast<std::size_t>(u)];
    if (b.size() == 0) continue;
    const auto ro = summand_offsets(cat, tgt, u), co = summand_offsets(cat, src, u);
    b = blocks[static_cast<std::size_t>(u)].block(ix(ro[i]), ix(co[j]), b.rows(), b.cols());
  }
  return m;
}

void SumMorphism::set_part(const Category& cat, std::size_t i, std::size_t j, const Morphism& m) {
  if (m.src != src.at(j) || m.tgt != tgt.at(i)) throw DimensionError("part does not match summands");
  for (int u = 0; u < cat.rank(); ++u) {
    const Mat& b = m.blocks[static_cast<std::size_t>(u)];
    if (b.size() == 0) continue;
    const auto ro = summand_offsets(cat, tgt, u), co = summand_offsets(cat, src, u);
    blocks[static_cast<std::size_t>(u)].block(ix(ro[i]), ix(co[j]), b.rows(), b.cols()) = b;
  }
}

SumMorphism SumMorphism::operator+(const SumMorphism& o) const {
  check_same(*this, o);
  SumMorphism r = *this;
  for (std::size_t u = 0; u < blocks.size(); ++u) r.blocks[u] += o.blocks[u];
  return r;
}

SumMorphism SumMorphism::operator-(const SumMorphism& o) const {
  check_same(*this, o);
  SumMorphism r = *this;
  for (std::size_t u = 0; u < blocks.size(); ++u) r.blocks[u] -= o.blocks[u];
  return r;
}

SumMorphism SumMorphism::operator*(Scalar s) const {
  SumMorphism r = *this;
  for (auto& b : r.blocks) b *= s;
  return r;
}

double SumMorphism::max_abs() const {
  double m = 0;
  for (const auto& b : blocks)
    if (b.size()) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

std::size_t SumMorphism::dim() const {
  std::size_t d = 0;
  for (const auto& b : blocks) d += static_cast<std::size_t>(b.size());
  return d;
}

Obj obj_tensor(const Obj& x, const Obj& y) {
  Obj r;
  for (const auto& a : x)
    for (const auto& b : y) r.push_back(concat(a, b));
  return r;
}

Word word_dual(const Category& cat, const Word& w) {
  Word r;
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(cat.dual(*it));
  return r;
}

Obj obj_dual(const Category& cat, const Obj& x) {
  Obj r;
  for (const auto& w : x) r.push_back(word_dual(cat, w));
  return r;
}

Obj unit_obj() { return Obj{Word{}}; }

SumMorphism sum_zero(const Category& cat, const Obj& src, const Obj& tgt) {
  SumMorphism m{src, tgt, {}};
  for (int u = 0; u < cat.rank(); ++u) {
    std::size_t r = 0, c = 0;
    for (const auto& t : tgt) r += cat.tree_dim(t, u);
    for (const auto& s : src) c += cat.tree_dim(s, u);
    m.blocks.push_back(Mat::Zero(ix(r), ix(c)));
  }
  return m;
}

SumMorphism sum_identity(const Category& cat, const Obj& x) {
  SumMorphism m = sum_zero(cat, x, x);
  for (auto& b : m.blocks) b.setIdentity();
  return m;
}

SumMorphism sum_compose(const Category& cat, const SumMorphism& g, const SumMorphism& f) {
  if (g.src != f.tgt) throw DimensionError("composing sum morphisms with mismatched middle object");
  SumMorphism m{f.src, g.tgt, {}};
  for (int u = 0; u < cat.rank(); ++u) {
    const auto k = static_cast<std::size_t>(u);
    m.blocks.push_back(g.blocks[k] * f.blocks[k]);
  }
  return m;
}

SumMorphism sum_compose(const Category& cat, const std::vector<SumMorphism>& chain) {
  if (chain.empty()) throw DimensionError("empty composition chain");
  SumMorphism acc = chain.back();
  for (std::size_t k = chain.size() - 1; k-- > 0;) acc = sum_compose(cat, chain[k], acc);
  return acc;
}

namespace {

struct Layout {
  std::vector<std::vector<std::size_t>> off;  // per charge
  Layout(const Category& cat, const Obj& x) {
    for (int u = 0; u < cat.rank(); ++u) off.push_back(summand_offsets(cat, x, u));
  }
  std::size_t at(int u, std::size_t i) const { return off[static_cast<std::size_t>(u)][i]; }
  std::size_t len(int u, std::size_t i) const { return at(u, i + 1) - at(u, i); }
};

bool is_identity(const SumMorphism& f) {
  if (f.src != f.tgt) return false;
  for (const auto& b : f.blocks)
    if (!b.isIdentity(0.0)) return false;
  return true;
}

}  // namespace

namespace {

// Sparse change of basis between the stacked tree bases of all summand pairs
// x_i y_k at charge u and the product basis (s, s', v, v', mu), ordered as in
// the Kronecker product of the stacked blocks. With inverse = false the rows
// are the tree bases and the entries come from graft^T; otherwise the rows are
// the product basis and the entries come from graft_inv^T.
Eigen::SparseMatrix<Scalar> pair_basis(const Category& cat, const Obj& x, const Obj& y, int u, bool inverse,
                                       const std::vector<std::size_t>& blk_off) {
  const int r = cat.rank();
  const Layout lx(cat, x), ly(cat, y);
  const Obj xy = obj_tensor(x, y);
  const Layout lxy(cat, xy);
  std::vector<Eigen::Triplet<Scalar>> trip;
  std::size_t total = 0;
  for (int s = 0; s < r; ++s)
    for (int s2 = 0; s2 < r; ++s2)
      total += lx.at(s, x.size()) * ly.at(s2, y.size()) * static_cast<std::size_t>(cat.n(s, s2, u));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < y.size(); ++k) {
      const std::size_t p = i * y.size() + k;
      const std::size_t d = lxy.len(u, p);
      if (!d) continue;
      const Mat& gm = inverse ? cat.graft_inv(x[i], y[k], u) : cat.graft(x[i], y[k], u);
      std::size_t local = 0;
      for (int s = 0; s < r; ++s)
        for (int s2 = 0; s2 < r; ++s2) {
          const auto nm = static_cast<std::size_t>(cat.n(s, s2, u));
          const std::size_t d1 = lx.len(s, i), d2 = ly.len(s2, k);
          const std::size_t rg = ly.at(s2, y.size());
          for (std::size_t v = 0; v < d1; ++v)
            for (std::size_t v2 = 0; v2 < d2; ++v2)
              for (std::size_t mu = 0; mu < nm; ++mu, ++local) {
                const std::size_t mid = blk_off[static_cast<std::size_t>(s * r + s2)] +
                                        ((lx.at(s, i) + v) * rg + ly.at(s2, k) + v2) * nm + mu;
                for (std::size_t a = 0; a < d; ++a) {
                  const Scalar val = inverse ? gm(ix(a), ix(local)) : gm(ix(local), ix(a));
                  if (val == Scalar(0.0)) continue;
                  if (inverse)
                    trip.emplace_back(ix(mid), ix(lxy.at(u, p) + a), val);
                  else
                    trip.emplace_back(ix(lxy.at(u, p) + a), ix(mid), val);
                }
              }
        }
    }
  const auto n_res = ix(lxy.at(u, xy.size()));
  Eigen::SparseMatrix<Scalar> m(inverse ? ix(total) : n_res, inverse ? n_res : ix(total));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

SumMorphism sum_tensor(const Category& cat, const SumMorphism& f, const SumMorphism& g) {
  if (f.src == unit_obj() && f.tgt == unit_obj()) return g * sum_scalar(cat, f);
  if (g.src == unit_obj() && g.tgt == unit_obj()) return f * sum_scalar(cat, g);
  SumMorphism m = sum_zero(cat, obj_tensor(f.src, g.src), obj_tensor(f.tgt, g.tgt));
  if (is_identity(f) && is_identity(g)) {
    for (auto& b : m.blocks) b.setIdentity();
    return m;
  }
  const int r = cat.rank();
  for (int u = 0; u < r; ++u) {
    Mat& out = m.blocks[static_cast<std::size_t>(u)];
    if (out.size() == 0) continue;
    std::vector<std::size_t> row_off(static_cast<std::size_t>(r * r) + 1, 0), col_off = row_off;
    for (int s = 0; s < r; ++s)
      for (int s2 = 0; s2 < r; ++s2) {
        const auto k = static_cast<std::size_t>(s * r + s2);
        const auto nm = static_cast<std::size_t>(cat.n(s, s2, u));
        const Mat& fs = f.blocks[static_cast<std::size_t>(s)];
        const Mat& gs = g.blocks[static_cast<std::size_t>(s2)];
        row_off[k + 1] = row_off[k] + static_cast<std::size_t>(fs.rows() * gs.rows()) * nm;
        col_off[k + 1] = col_off[k] + static_cast<std::size_t>(fs.cols() * gs.cols()) * nm;
      }
    const Eigen::SparseMatrix<Scalar> y = pair_basis(cat, f.tgt, g.tgt, u, false, row_off);
    const Eigen::SparseMatrix<Scalar, Eigen::RowMajor> xt = pair_basis(cat, f.src, g.src, u, true, col_off);
    for (int s = 0; s < r; ++s)
      for (int s2 = 0; s2 < r; ++s2) {
        const auto k = static_cast<std::size_t>(s * r + s2);
        const Eigen::Index nr = ix(row_off[k + 1] - row_off[k]), nc = ix(col_off[k + 1] - col_off[k]);
        if (!nr || !nc) continue;
        const Mat& fs = f.blocks[static_cast<std::size_t>(s)];
        const Mat& gs = g.blocks[static_cast<std::size_t>(s2)];
        if (fs.cwiseAbs().maxCoeff() == 0 || gs.cwiseAbs().maxCoeff() == 0) continue;
        const int nm = cat.n(s, s2, u);
        Mat kr = Mat::Zero(nr, nc);
        for (Eigen::Index i = 0; i < fs.rows(); ++i)
          for (Eigen::Index j = 0; j < fs.cols(); ++j) {
            const Scalar a = fs(i, j);
            for (Eigen::Index i2 = 0; i2 < gs.rows(); ++i2)
              for (Eigen::Index j2 = 0; j2 < gs.cols(); ++j2) {
                const Scalar v = a * gs(i2, j2);
                for (int mu = 0; mu < nm; ++mu)
                  kr((i * gs.rows() + i2) * nm + mu, (j * gs.cols() + j2) * nm + mu) = v;
              }
          }
        const Mat left = y.middleCols(ix(row_off[k]), nr) * kr;
        out += (xt.middleRows(ix(col_off[k]), nc).transpose() * left.transpose()).transpose();
      }
  }
  return m;
}

SumMorphism sum_tensor(const Category& cat, const std::vector<SumMorphism>& fs) {
  if (fs.empty()) return sum_identity(cat, unit_obj());
  SumMorphism acc = fs.front();
  for (std::size_t k = 1; k < fs.size(); ++k) acc = sum_tensor(cat, acc, fs[k]);
  return acc;
}

SumMorphism lift(const Category& cat, const Morphism& m) {
  SumMorphism s = sum_zero(cat, {m.src}, {m.tgt});
  s.set_part(cat, 0, 0, m);
  return s;
}

Scalar sum_scalar(const Category& cat, const SumMorphism& m) {
  if (m.src != unit_obj() || m.tgt != unit_obj()) throw DimensionError("sum morphism is not a scalar");
  return m.blocks[static_cast<std::size_t>(cat.unit())](0, 0);
}

Eigen::VectorXcd to_vector(const SumMorphism& m) {
  Eigen::VectorXcd v(ix(m.dim()));
  Eigen::Index k = 0;
  for (const auto& b : m.blocks)
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) v(k++) = b(i, j);
  return v;
}

SumMorphism from_vector(const Category& cat, const Obj& src, const Obj& tgt, const Eigen::VectorXcd& v) {
  SumMorphism m = sum_zero(cat, src, tgt);
  if (static_cast<std::size_t>(v.size()) != m.dim()) throw DimensionError("vector length does not match hom dimension");
  Eigen::Index k = 0;
  for (auto& b : m.blocks)
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = v(k++);
  return m;
}

std::size_t sum_hom_dim(const Category& cat, const Obj& src, const Obj& tgt) {
  return sum_zero(cat, src, tgt).dim();
}

Morphism coev_word(const Category& cat, const Word& w) {
  Morphism acc = cat.identity({});
  Word left, right;
  for (int x : w) {
    acc = cat.compose(cat.pad(left, cat.coev(x), right), acc);
    left.push_back(x);
    right.insert(right.begin(), cat.dual(x));
  }
  return acc;
}

Morphism ev_word(const Category& cat, const Word& w) {
  Morphism acc = cat.identity({});
  for (int x : w) acc = cat.compose(cat.ev(x), cat.pad({cat.dual(x)}, acc, {x}));
  return acc;
}

Morphism coev_r_word(const Category& cat, const Word& w) {
  Morphism acc = cat.identity({});
  for (int x : w) acc = cat.compose(cat.pad({cat.dual(x)}, acc, {x}), cat.coev_r(x));
  return acc;
}

Morphism ev_r_word(const Category& cat, const Word& w) {
  Morphism acc = cat.identity({});
  Word left, right;
  for (int x : w) {
    acc = cat.compose(acc, cat.pad(left, cat.ev_r(x), right));
    left.push_back(x);
    right.insert(right.begin(), cat.dual(x));
  }
  return acc;
}

SumMorphism coev_obj(const Category& cat, const Obj& x) {
  const Obj d = obj_dual(cat, x);
  SumMorphism m = sum_zero(cat, unit_obj(), obj_tensor(x, d));
  for (std::size_t i = 0; i < x.size(); ++i) m.set_part(cat, i * d.size() + i, 0, coev_word(cat, x[i]));
  return m;
}

SumMorphism ev_obj(const Category& cat, const Obj& x) {
  const Obj d = obj_dual(cat, x);
  SumMorphism m = sum_zero(cat, obj_tensor(d, x), unit_obj());
  for (std::size_t i = 0; i < x.size(); ++i) m.set_part(cat, 0, i * x.size() + i, ev_word(cat, x[i]));
  return m;
}

SumMorphism coev_r_obj(const Category& cat, const Obj& x) {
  const Obj d = obj_dual(cat, x);
  SumMorphism m = sum_zero(cat, unit_obj(), obj_tensor(d, x));
  for (std::size_t i = 0; i < x.size(); ++i) m.set_part(cat, i * x.size() + i, 0, coev_r_word(cat, x[i]));
  return m;
}

SumMorphism ev_r_obj(const Category& cat, const Obj& x) {
  const Obj d = obj_dual(cat, x);
  SumMorphism m = sum_zero(cat, obj_tensor(x, d), unit_obj());
  for (std::size_t i = 0; i < x.size(); ++i) m.set_part(cat, 0, i * d.size() + i, ev_r_word(cat, x[i]));
  return m;
}

}  // namespace sn
