#pragma once

#include <array>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sn/tensor.hpp"

namespace sn {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LabelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Word = std::vector<int>;
using FKey = std::array<int, 6>;  // a, b, c, d, e, f

// Skeletal pivotal fusion category. F[a,b,c,d,e,f] has shape
// (N_ab^e, N_ec^d, N_bc^f, N_af^d) and expresses the left-combed splitting
// tree (ab->e, ec->d) in terms of right-combed ones (bc->f, af->d).
struct FusionData {
  std::string name;
  std::vector<std::string> labels;
  int unit = 0;
  std::vector<int> dual;
  std::vector<int> N;  // rank^3, N[(a*r+b)*r+c] = N_ab^c
  std::map<FKey, DenseTensor> F;
  std::vector<Scalar> pivotal;
  bool spherical = true;

  int rank() const { return static_cast<int>(labels.size()); }
  int n(int a, int b, int c) const { return N[(a * rank() + b) * rank() + c]; }
  int label(const std::string& s) const;
  Word word(const std::vector<std::string>& s) const;
  void check_label(int a) const;

  // Fills absent blocks that involve the unit with identities and checks the
  // remaining structure. Throws SchemaError on missing or misshapen data.
  void complete_and_check();
};

struct Residual {
  std::string name;
  double value;
};

struct ValidationReport {
  std::vector<Residual> residuals;
  std::vector<Residual> info;  // reported, not part of valid()
  std::vector<std::string> warnings;
  double tol = 1e-9;
  bool valid() const;
  double get(const std::string& name) const;
};

class Category;

ValidationReport validate(const FusionData& data, double tol = tolerance());
double pentagon_residual(const FusionData& data);

std::size_t hom_dim(const FusionData& data, const Word& source, const Word& target);
Scalar quantum_dimension(const Category& cat, int a);

}  // namespace sn
