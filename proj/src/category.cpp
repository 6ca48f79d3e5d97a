#include "sn/category.hpp"

#include <cmath>

namespace sn {

namespace {

Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

}  // namespace

std::size_t Morphism::dim() const {
  std::size_t d = 0;
  for (const auto& b : blocks) d += static_cast<std::size_t>(b.size());
  return d;
}

DenseTensor Morphism::flat() const {
  std::vector<Scalar> v;
  v.reserve(dim());
  for (const auto& b : blocks)
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) v.push_back(b(i, j));
  const std::size_t n = v.size();
  return DenseTensor({n}, std::move(v));
}

Morphism Morphism::operator+(const Morphism& o) const {
  if (src != o.src || tgt != o.tgt) throw DimensionError("adding morphisms of different type");
  Morphism r = *this;
  for (std::size_t s = 0; s < blocks.size(); ++s) r.blocks[s] += o.blocks[s];
  return r;
}

Morphism Morphism::operator-(const Morphism& o) const { return *this + o * Scalar(-1.0); }

Morphism Morphism::operator*(Scalar s) const {
  Morphism r = *this;
  for (auto& b : r.blocks) b *= s;
  return r;
}

double Morphism::max_abs() const {
  double m = 0;
  for (const auto& b : blocks)
    if (b.size()) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

Category::Category(FusionData data) : data_(std::make_shared<const FusionData>(std::move(data))) {
  const int r = rank();
  ev_norm_.assign(r, Scalar(1.0));
  for (int a = 0; a < r; ++a) {
    Morphism e = ev(a);
    Morphism z = compose(pad({a}, e, {}), pad({}, coev(a), {a}));
    Scalar v = z.blocks[a](0, 0);
    if (std::abs(v) < 1e-14) throw SchemaError("degenerate duality for label " + data_->labels[a]);
    ev_norm_[a] = 1.0 / v;
  }
}

Word Category::objects(const SWord& w) const {
  Word r;
  r.reserve(w.size());
  for (const auto& s : w) r.push_back(obj(s));
  return r;
}

const Category::TreeInfo& Category::tree(const Word& w) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = trees_.find(w);
  if (it != trees_.end()) return *it->second;
  const int r = rank();
  auto info = std::make_unique<TreeInfo>();
  info->dim.assign(r, 0);
  if (w.empty()) {
    info->dim[unit()] = 1;
  } else {
    for (int x : w) data_->check_label(x);
    Word prefix(w.begin(), w.end() - 1);
    const TreeInfo& p = tree(prefix);
    const int y = w.back();
    info->offset.assign(r, std::vector<std::size_t>(r, 0));
    for (int u = 0; u < r; ++u) {
      std::size_t acc = 0;
      for (int e = 0; e < r; ++e) {
        info->offset[u][e] = acc;
        acc += p.dim[e] * static_cast<std::size_t>(n(e, y, u));
      }
      info->dim[u] = acc;
    }
  }
  auto& ref = *info;
  trees_.emplace(w, std::move(info));
  return ref;
}

std::size_t Category::tree_dim(const Word& w, int u) const { return tree(w).dim[u]; }

std::size_t Category::tree_offset(const Word& prefix, int y, int u, int e) const {
  Word w = prefix;
  w.push_back(y);
  return tree(w).offset[u][e];
}

std::size_t Category::hom_dim(const Word& src, const Word& tgt) const {
  std::size_t d = 0;
  for (int s = 0; s < rank(); ++s) d += tree_dim(src, s) * tree_dim(tgt, s);
  return d;
}

std::size_t Category::fleft_index(int a, int b, int c, int d, int e, int alpha, int beta) const {
  std::size_t off = 0;
  for (int x = 0; x < e; ++x) off += static_cast<std::size_t>(n(a, b, x) * n(x, c, d));
  return off + static_cast<std::size_t>(alpha * n(e, c, d) + beta);
}

std::size_t Category::fright_index(int a, int b, int c, int d, int f, int gamma, int delta) const {
  std::size_t off = 0;
  for (int x = 0; x < f; ++x) off += static_cast<std::size_t>(n(b, c, x) * n(a, x, d));
  return off + static_cast<std::size_t>(gamma * n(a, f, d) + delta);
}

const Mat& Category::fmatrix(int a, int b, int c, int d) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  std::array<int, 4> key{a, b, c, d};
  auto it = fmat_.find(key);
  if (it != fmat_.end()) return it->second.first;
  const int r = rank();
  std::size_t nl = 0, nr = 0;
  for (int x = 0; x < r; ++x) {
    nl += static_cast<std::size_t>(n(a, b, x) * n(x, c, d));
    nr += static_cast<std::size_t>(n(b, c, x) * n(a, x, d));
  }
  if (nl != nr) throw SchemaError("fusion rules are not associative");
  Mat m = Mat::Zero(static_cast<Eigen::Index>(nl), static_cast<Eigen::Index>(nr));
  for (int e = 0; e < r; ++e) {
    for (int f = 0; f < r; ++f) {
      auto fit = data_->F.find(FKey{a, b, c, d, e, f});
      if (fit == data_->F.end()) continue;
      const DenseTensor& t = fit->second;
      const auto& sh = t.shape();
      for (std::size_t al = 0; al < sh[0]; ++al)
        for (std::size_t be = 0; be < sh[1]; ++be)
          for (std::size_t ga = 0; ga < sh[2]; ++ga)
            for (std::size_t de = 0; de < sh[3]; ++de)
              m(static_cast<Eigen::Index>(fleft_index(a, b, c, d, e, int(al), int(be))),
                static_cast<Eigen::Index>(fright_index(a, b, c, d, f, int(ga), int(de)))) =
                  t.at({al, be, ga, de});
    }
  }
  Mat inv = nl ? Mat(m.fullPivLu().inverse()) : m;
  auto res = fmat_.emplace(key, std::make_pair(std::move(m), std::move(inv)));
  return res.first->second.first;
}

const Mat& Category::fmatrix_inv(int a, int b, int c, int d) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  fmatrix(a, b, c, d);
  return fmat_.at({a, b, c, d}).second;
}

std::size_t Category::KeyHash::operator()(const Word& w) const {
  std::size_t h = w.size();
  for (int x : w) h = h * 1000003u ^ static_cast<std::size_t>(x + 1);
  return h;
}

std::size_t Category::KeyHash::operator()(const std::tuple<Word, Word, int>& k) const {
  return (*this)(std::get<0>(k)) * 31u ^ (*this)(std::get<1>(k)) * 7u ^ static_cast<std::size_t>(std::get<2>(k));
}

const Mat& Category::graft(const Word& y1, const Word& y2, int u) const { return graft_pair(y1, y2, u).first; }

const Mat& Category::graft_inv(const Word& y1, const Word& y2, int u) const {
  return graft_pair(y1, y2, u).second;
}

const std::pair<Mat, Mat>& Category::graft_pair(const Word& y1, const Word& y2, int u) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_tuple(y1, y2, u);
  auto it = graft_.find(key);
  if (it != graft_.end()) return it->second;

  const int r = rank();
  const Word full = concat(y1, y2);
  const std::size_t cols = tree_dim(full, u);

  // row offsets for each (s, s') pair
  std::vector<std::size_t> roff(static_cast<std::size_t>(r * r), 0);
  std::size_t rows = 0;
  for (int s = 0; s < r; ++s)
    for (int s2 = 0; s2 < r; ++s2) {
      roff[static_cast<std::size_t>(s * r + s2)] = rows;
      rows += tree_dim(y1, s) * tree_dim(y2, s2) * static_cast<std::size_t>(n(s, s2, u));
    }
  if (rows != cols) throw SchemaError("graft family is not a basis");
  Mat g = Mat::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));

  if (y2.empty()) {
    for (std::size_t v = 0; v < tree_dim(y1, u); ++v)
      g(static_cast<Eigen::Index>(roff[static_cast<std::size_t>(u * r + unit())] + v),
        static_cast<Eigen::Index>(v)) = 1.0;
  } else {
    const Word y2p(y2.begin(), y2.end() - 1);
    const int yl = y2.back();
    const Word y1p = concat(y1, y2p);
    for (int s = 0; s < r; ++s) {
      const std::size_t d1 = tree_dim(y1, s);
      if (!d1) continue;
      for (int s2 = 0; s2 < r; ++s2) {
        const int nm = n(s, s2, u);
        if (!nm) continue;
        const std::size_t d2 = tree_dim(y2, s2);
        for (int t = 0; t < r; ++t) {
          const int nnu = n(t, yl, s2);
          if (!nnu) continue;
          const std::size_t dpp = tree_dim(y2p, t);
          if (!dpp) continue;
          const std::size_t toff = tree_offset(y2p, yl, s2, t);
          const Mat& finv = fmatrix_inv(s, t, yl, u);
          for (int e = 0; e < r; ++e) {
            const int nal = n(s, t, e), nbe = n(e, yl, u);
            if (!nal || !nbe) continue;
            const Mat& inner = graft(y1, y2p, e);
            // inner row offset for (s, t)
            std::size_t ioff = 0;
            for (int x = 0; x < s; ++x)
              for (int x2 = 0; x2 < r; ++x2)
                ioff += tree_dim(y1, x) * tree_dim(y2p, x2) * static_cast<std::size_t>(n(x, x2, e));
            for (int x2 = 0; x2 < t; ++x2)
              ioff += d1 * tree_dim(y2p, x2) * static_cast<std::size_t>(n(s, x2, e));
            const std::size_t eoff = tree_offset(y1p, yl, u, e);
            for (int nu = 0; nu < nnu; ++nu)
              for (int mu = 0; mu < nm; ++mu) {
                const auto ridx = static_cast<Eigen::Index>(fright_index(s, t, yl, u, s2, nu, mu));
                for (int al = 0; al < nal; ++al)
                  for (int be = 0; be < nbe; ++be) {
                    const Scalar coef =
                        finv(ridx, static_cast<Eigen::Index>(fleft_index(s, t, yl, u, e, al, be)));
                    if (coef == Scalar(0.0)) continue;
                    for (std::size_t v = 0; v < d1; ++v)
                      for (std::size_t vpp = 0; vpp < dpp; ++vpp) {
                        const std::size_t v2 = toff + vpp * static_cast<std::size_t>(nnu) +
                                               static_cast<std::size_t>(nu);
                        const std::size_t row = roff[static_cast<std::size_t>(s * r + s2)] +
                                                (v * d2 + v2) * static_cast<std::size_t>(nm) +
                                                static_cast<std::size_t>(mu);
                        const std::size_t irow = ioff + (v * dpp + vpp) * static_cast<std::size_t>(nal) +
                                                 static_cast<std::size_t>(al);
                        for (Eigen::Index w = 0; w < inner.cols(); ++w) {
                          const Scalar x = inner(static_cast<Eigen::Index>(irow), w);
                          if (x == Scalar(0.0)) continue;
                          const std::size_t col = eoff + static_cast<std::size_t>(w) * nbe +
                                                  static_cast<std::size_t>(be);
                          g(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += coef * x;
                        }
                      }
                  }
              }
          }
        }
      }
    }
  }
  Mat ginv = rows ? Mat(g.fullPivLu().inverse()) : g;
  auto res = graft_.emplace(key, std::make_pair(std::move(g), std::move(ginv)));
  return res.first->second;
}

Morphism Category::zero(const Word& src, const Word& tgt) const {
  Morphism m{src, tgt, {}};
  m.blocks.resize(static_cast<std::size_t>(rank()));
  for (int s = 0; s < rank(); ++s)
    m.blocks[static_cast<std::size_t>(s)] =
        Mat::Zero(static_cast<Eigen::Index>(tree_dim(tgt, s)),
                  static_cast<Eigen::Index>(tree_dim(src, s)));
  return m;
}

Morphism Category::identity(const Word& w) const {
  Morphism m = zero(w, w);
  for (auto& b : m.blocks) b.setIdentity();
  return m;
}

Morphism Category::compose(const Morphism& g, const Morphism& f) const {
  if (g.src != f.tgt) throw DimensionError("composing morphisms with mismatched middle object");
  Morphism m{f.src, g.tgt, {}};
  m.blocks.resize(g.blocks.size());
  for (std::size_t s = 0; s < g.blocks.size(); ++s) m.blocks[s] = g.blocks[s] * f.blocks[s];
  return m;
}

Morphism Category::tensor(const Morphism& f, const Morphism& g) const {
  if (f.src.empty() && f.tgt.empty()) return g * as_scalar(f);
  if (g.src.empty() && g.tgt.empty()) return f * as_scalar(g);
  const int r = rank();
  Morphism m = zero(concat(f.src, g.src), concat(f.tgt, g.tgt));
  for (int u = 0; u < r; ++u) {
    auto& out = m.blocks[static_cast<std::size_t>(u)];
    if (out.size() == 0) continue;
    const Mat& gy = graft(f.tgt, g.tgt, u);
    const Mat& gxi = graft_inv(f.src, g.src, u);
    Mat k = Mat::Zero(gy.rows(), gxi.cols());
    Eigen::Index oy = 0, ox = 0;
    for (int s = 0; s < r; ++s)
      for (int s2 = 0; s2 < r; ++s2) {
        const int nm = n(s, s2, u);
        const Mat& fs = f.blocks[static_cast<std::size_t>(s)];
        const Mat& gs = g.blocks[static_cast<std::size_t>(s2)];
        const Eigen::Index ry = fs.rows() * gs.rows() * nm, rx = fs.cols() * gs.cols() * nm;
        if (ry && rx) k.block(oy, ox, ry, rx) = kron(fs, kron(gs, Mat::Identity(nm, nm)));
        oy += ry;
        ox += rx;
      }
    out = gy.transpose() * k * gxi.transpose();
  }
  return m;
}

Morphism Category::tensor(const std::vector<Morphism>& fs) const {
  if (fs.empty()) return identity({});
  Morphism acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = tensor(acc, fs[i]);
  return acc;
}

Morphism Category::from_flat(const Word& src, const Word& tgt, const DenseTensor& t) const {
  Morphism m = zero(src, tgt);
  if (t.size() != m.dim())
    throw DimensionError("flat tensor of length " + std::to_string(t.size()) +
                         " does not match hom dimension " + std::to_string(m.dim()));
  std::size_t k = 0;
  for (auto& b : m.blocks)
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = t.data()[k++];
  return m;
}

Morphism Category::basis_element(const Word& src, const Word& tgt, std::size_t k) const {
  std::size_t d = hom_dim(src, tgt);
  std::vector<Scalar> v(d, 0.0);
  v.at(k) = 1.0;
  return from_flat(src, tgt, DenseTensor({d}, v));
}

Scalar Category::as_scalar(const Morphism& m) const {
  if (!m.src.empty() || !m.tgt.empty()) throw DimensionError("morphism is not a scalar");
  return m.blocks[static_cast<std::size_t>(unit())](0, 0);
}

Morphism Category::split_vertex(int a, int b, int c, int mu) const {
  Morphism m = zero({c}, {a, b});
  m.blocks[static_cast<std::size_t>(c)](
      static_cast<Eigen::Index>(tree_offset({a}, b, c, a) + static_cast<std::size_t>(mu)), 0) = 1.0;
  return m;
}

Morphism Category::fuse_vertex(int a, int b, int c, int mu) const {
  Morphism m = zero({a, b}, {c});
  m.blocks[static_cast<std::size_t>(c)](
      0, static_cast<Eigen::Index>(tree_offset({a}, b, c, a) + static_cast<std::size_t>(mu))) = 1.0;
  return m;
}

Morphism Category::coev(int a) const {
  Morphism m = split_vertex(a, dual(a), unit(), 0);
  m.src.clear();
  return m;
}

Morphism Category::ev(int a) const {
  Morphism m = fuse_vertex(dual(a), a, unit(), 0) * ev_norm_[static_cast<std::size_t>(a)];
  m.tgt.clear();
  return m;
}

Morphism Category::coev_r(int a) const {
  return coev(dual(a)) * (1.0 / data_->pivotal[static_cast<std::size_t>(a)]);
}

Morphism Category::ev_r(int a) const {
  return ev(dual(a)) * data_->pivotal[static_cast<std::size_t>(a)];
}

Morphism Category::cap(const SLabel& s) const { return s.sign > 0 ? ev_r(s.label) : ev(s.label); }

Morphism Category::cup(const SLabel& s) const { return s.sign > 0 ? coev(s.label) : coev_r(s.label); }

Morphism Category::pad(const Word& left, const Morphism& m, const Word& right) const {
  Morphism r = m;
  if (!left.empty()) r = tensor(identity(left), r);
  if (!right.empty()) r = tensor(r, identity(right));
  return r;
}

}  // namespace sn

namespace sn {

Morphism Category::rotate(const SWord& w, const Morphism& beta) const {
  if (w.empty()) return beta;
  const SLabel s = w.front();
  const SLabel rs = reverse(s);
  const Word all = objects(w);
  Word rest(all.begin() + 1, all.end());
  Morphism step = compose(pad({obj(rs)}, beta, {obj(s)}), cup(rs));
  Word tail = rest;
  tail.push_back(obj(s));
  return compose(pad({}, cap(rs), tail), step);
}

}  // namespace sn
