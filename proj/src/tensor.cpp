#include "sn/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

namespace sn {

namespace {
std::atomic<double> g_tol{1e-9};

std::size_t product(const std::vector<std::size_t>& s) {
  return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
}
}  // namespace

double tolerance() { return g_tol.load(); }
void set_tolerance(double eps) { g_tol.store(eps); }

DenseTensor::DenseTensor() : data_(1, Scalar{0.0}) {}

DenseTensor::DenseTensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(product(shape_), Scalar{0.0}) {}

DenseTensor::DenseTensor(std::vector<std::size_t> shape, std::vector<Scalar> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != product(shape_))
    throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                         " does not match shape product " + std::to_string(product(shape_)));
}

DenseTensor DenseTensor::scalar(Scalar s) { return DenseTensor({}, {s}); }

DenseTensor DenseTensor::identity(std::size_t n) {
  DenseTensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t.data_[i * n + i] = 1.0;
  return t;
}

std::size_t DenseTensor::offset(const std::vector<std::size_t>& idx) const {
  if (idx.size() != shape_.size()) throw DimensionError("index rank mismatch");
  std::size_t off = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= shape_[k])
      throw DimensionError("index " + std::to_string(idx[k]) + " out of range on axis " +
                           std::to_string(k));
    off = off * shape_[k] + idx[k];
  }
  return off;
}

Scalar& DenseTensor::at(const std::vector<std::size_t>& idx) { return data_[offset(idx)]; }
Scalar DenseTensor::at(const std::vector<std::size_t>& idx) const { return data_[offset(idx)]; }

DenseTensor DenseTensor::operator+(const DenseTensor& o) const {
  if (shape_ != o.shape_) throw DimensionError("shape mismatch in addition");
  DenseTensor r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

DenseTensor DenseTensor::operator-(const DenseTensor& o) const {
  if (shape_ != o.shape_) throw DimensionError("shape mismatch in subtraction");
  DenseTensor r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

DenseTensor DenseTensor::operator*(Scalar s) const {
  DenseTensor r = *this;
  for (auto& x : r.data_) x *= s;
  return r;
}

double DenseTensor::max_abs() const {
  double m = 0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

DenseTensor contract(const DenseTensor& t1, const DenseTensor& t2,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const auto& s1 = t1.shape();
  const auto& s2 = t2.shape();
  std::vector<bool> used1(s1.size(), false), used2(s2.size(), false);
  for (auto [a, b] : pairs) {
    if (a >= s1.size() || b >= s2.size())
      throw DimensionError("contraction axis out of range: (" + std::to_string(a) + "," +
                           std::to_string(b) + ")");
    if (used1[a] || used2[b])
      throw DimensionError("axis paired twice: (" + std::to_string(a) + "," + std::to_string(b) +
                           ")");
    if (s1[a] != s2[b])
      throw DimensionError("extent mismatch on axes (" + std::to_string(a) + "," +
                           std::to_string(b) + "): " + std::to_string(s1[a]) + " vs " +
                           std::to_string(s2[b]));
    used1[a] = used2[b] = true;
  }
  std::vector<std::size_t> free1, free2, out_shape;
  for (std::size_t k = 0; k < s1.size(); ++k)
    if (!used1[k]) { free1.push_back(k); out_shape.push_back(s1[k]); }
  for (std::size_t k = 0; k < s2.size(); ++k)
    if (!used2[k]) { free2.push_back(k); out_shape.push_back(s2[k]); }

  std::vector<std::size_t> cshape;
  for (auto [a, b] : pairs) cshape.push_back(s1[a]);

  auto strides = [](const std::vector<std::size_t>& s) {
    std::vector<std::size_t> st(s.size(), 1);
    for (std::size_t k = s.size(); k-- > 1;) st[k - 1] = st[k] * s[k];
    return st;
  };
  auto st1 = strides(s1), st2 = strides(s2);

  DenseTensor out(out_shape);
  const std::size_t n_out = out.size();
  const std::size_t n_c = product(cshape);
  std::vector<std::size_t> oidx(out_shape.size(), 0), cidx(cshape.size(), 0);
  for (std::size_t o = 0; o < n_out; ++o) {
    std::size_t rem = o;
    for (std::size_t k = out_shape.size(); k-- > 0;) {
      oidx[k] = rem % out_shape[k];
      rem /= out_shape[k];
    }
    std::size_t base1 = 0, base2 = 0;
    for (std::size_t k = 0; k < free1.size(); ++k) base1 += oidx[k] * st1[free1[k]];
    for (std::size_t k = 0; k < free2.size(); ++k) base2 += oidx[free1.size() + k] * st2[free2[k]];
    Scalar acc = 0;
    for (std::size_t c = 0; c < n_c; ++c) {
      std::size_t r = c, o1 = base1, o2 = base2;
      for (std::size_t k = cshape.size(); k-- > 0;) {
        std::size_t v = r % cshape[k];
        r /= cshape[k];
        o1 += v * st1[pairs[k].first];
        o2 += v * st2[pairs[k].second];
      }
      acc += t1.data()[o1] * t2.data()[o2];
    }
    out.data()[o] = acc;
  }
  return out;
}

bool approx_equal(const DenseTensor& t1, const DenseTensor& t2, double tol) {
  if (t1.shape() != t2.shape()) throw DimensionError("shape mismatch in approx_equal");
  for (std::size_t i = 0; i < t1.size(); ++i)
    if (std::abs(t1.data()[i] - t2.data()[i]) > tol) return false;
  return true;
}

}  // namespace sn
