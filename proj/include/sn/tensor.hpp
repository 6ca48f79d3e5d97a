#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sn {

using Scalar = std::complex<double>;

double tolerance();
void set_tolerance(double eps);

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DenseTensor {
public:
  DenseTensor();
  explicit DenseTensor(std::vector<std::size_t> shape);
  DenseTensor(std::vector<std::size_t> shape, std::vector<Scalar> data);

  static DenseTensor scalar(Scalar s);
  static DenseTensor identity(std::size_t n);

  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<Scalar>& data() const { return data_; }
  std::vector<Scalar>& data() { return data_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }

  Scalar& at(const std::vector<std::size_t>& idx);
  Scalar at(const std::vector<std::size_t>& idx) const;

  DenseTensor operator+(const DenseTensor& o) const;
  DenseTensor operator-(const DenseTensor& o) const;
  DenseTensor operator*(Scalar s) const;

  double max_abs() const;

private:
  std::size_t offset(const std::vector<std::size_t>& idx) const;
  std::vector<std::size_t> shape_;
  std::vector<Scalar> data_;
};

// Remaining axes: t1's unpaired axes then t2's, each in original order.
DenseTensor contract(const DenseTensor& t1, const DenseTensor& t2,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

bool approx_equal(const DenseTensor& t1, const DenseTensor& t2, double tol);

}  // namespace sn
