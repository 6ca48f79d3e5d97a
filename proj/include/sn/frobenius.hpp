#pragma once

#include <memory>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sn/fusion.hpp"
#include "sn/sum.hpp"

namespace sn {

struct NondegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AlgebraMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FrobeniusAlgebra {
  std::string name;
  Obj object;
  SumMorphism mult;    // A A -> A
  SumMorphism unit;    // 1 -> A
  SumMorphism counit;  // A -> 1
  SumMorphism comult;  // A -> A A
  bool counit_supplied = false;

  bool trivial() const { return object == unit_obj(); }
};
using AlgebraPtr = std::shared_ptr<const FrobeniusAlgebra>;

// Counit defaults to the categorical trace of left multiplication; the
// comultiplication is read off the inverse copairing of eps o m.
FrobeniusAlgebra make_algebra(const Category& cat, std::string name, Obj object, SumMorphism mult,
                              SumMorphism unit, std::optional<SumMorphism> counit = std::nullopt);
AlgebraPtr trivial_algebra(const Category& cat);
// Group algebra of the invertible labels with N_ab^c = 1, structure constants 1.
AlgebraPtr group_algebra(const Category& cat, const std::string& name = "A");
std::vector<AlgebraPtr> parse_algebras(const Category& cat, const nlohmann::json& j);

ValidationReport validate_frobenius(const Category& cat, const FrobeniusAlgebra& a, double tol = tolerance());

struct Bimodule {
  std::string name;
  Obj object;
  AlgebraPtr left, right;
  SumMorphism act_l;  // A X -> X
  SumMorphism act_r;  // X B -> X
};

Bimodule regular_bimodule(const Category& cat, const AlgebraPtr& a);
// A V B with actions by multiplication.
Bimodule free_bimodule(const Category& cat, const AlgebraPtr& a, const AlgebraPtr& b, const Obj& v);
// Same bimodule transported along an isomorphism phi : X -> X'.
Bimodule transport(const Category& cat, const Bimodule& x, const SumMorphism& phi, const SumMorphism& phi_inv);
Bimodule dual_bimodule(const Category& cat, const Bimodule& x);
double bimodule_residual(const Category& cat, const Bimodule& x);

SumMorphism delta_eta(const Category& cat, const FrobeniusAlgebra& a);  // 1 -> A A
// Projection of a C-morphism onto the bimodule maps X -> Y.
SumMorphism average_map(const Category& cat, const Bimodule& x, const Bimodule& y, const SumMorphism& f);
std::size_t bimodule_hom_dim(const Category& cat, const Bimodule& x, const Bimodule& y);

SumMorphism averaging_idempotent(const Category& cat, const Bimodule& x, const Bimodule& y);

struct TensorOver {
  Bimodule product;
  SumMorphism lax;         // X Y -> X (x)_B Y
  SumMorphism oplax;       // X (x)_B Y -> X Y
  SumMorphism idempotent;  // oplax o lax
};
TensorOver tensor_over(const Category& cat, const Bimodule& x, const Bimodule& y);

// Left-nested composite f_1 * ... * f_m in Fr(C) with the iterated splitting
// maps to and from the plain tensor product f_1 ... f_m. For m = 0 the
// composite is the regular bimodule of `a` with unit and counit as maps.
struct Composite {
  Bimodule obj;
  SumMorphism lax, oplax;
};
Composite composite(const Category& cat, const std::vector<Bimodule>& fs, const AlgebraPtr& a = nullptr);

// Fr(C) horizontal product of 2-morphisms between split composites.
SumMorphism fr_horizontal(const Category& cat, const TensorOver& src, const TensorOver& tgt,
                          const SumMorphism& f, const SumMorphism& g);

// Dualities of Fr(C) as lifts to C; for X over (A, B):
SumMorphism fr_ev(const Category& cat, const Bimodule& x);      // X^v X -> B
SumMorphism fr_coev(const Category& cat, const Bimodule& x);    // A -> X X^v
SumMorphism fr_ev_r(const Category& cat, const Bimodule& x);    // X X^v -> A
SumMorphism fr_coev_r(const Category& cat, const Bimodule& x);  // B -> X^v X

// Lax/oplax functor out of Fr(C). The identity pseudofunctor lands in Fr(C)
// itself; the forgetful functor lands in BC.
class FrobFunctor {
public:
  enum class Kind { identity, forgetful };
  FrobFunctor(const Category& cat, Kind kind, std::vector<Bimodule> generators = {})
      : cat_(&cat), kind_(kind), generators_(std::move(generators)) {}

  const Category& category() const { return *cat_; }
  Kind kind() const { return kind_; }
  std::string name() const { return kind_ == Kind::identity ? "identity" : "forgetful"; }
  const std::vector<Bimodule>& generators() const { return generators_; }

  // F(f_1) ... F(f_m) in the target, as a C-object.
  Obj target_tensor(const std::vector<Bimodule>& fs) const;
  SumMorphism lax(const std::vector<Bimodule>& fs) const;     // F(f_1)..F(f_m) -> F(f_1 * .. * f_m)
  SumMorphism oplax(const std::vector<Bimodule>& fs) const;   // reverse
  SumMorphism lax_unit(const AlgebraPtr& a) const;            // 1_target -> F(id_a)
  SumMorphism oplax_unit(const AlgebraPtr& a) const;          // F(id_a) -> 1_target

  // F(f_1) ... F(f_m) as a 1-morphism of the target; for BC only the object is meaningful.
  Bimodule target_bimodule(const std::vector<Bimodule>& fs) const;
  // Target bicategory operations on images of 1-morphisms.
  Bimodule target_unit(const AlgebraPtr& a) const;
  SumMorphism hor(const Bimodule& x, const Bimodule& x2, const SumMorphism& f, const Bimodule& y,
                  const Bimodule& y2, const SumMorphism& g) const;  // f : Fx -> Fx2, g : Fy -> Fy2
  SumMorphism assoc(const Bimodule& x, const Bimodule& y, const Bimodule& w) const;      // x(yw) -> (xy)w
  SumMorphism assoc_inv(const Bimodule& x, const Bimodule& y, const Bimodule& w) const;  // (xy)w -> x(yw)
  SumMorphism unitor_r(const Bimodule& x) const;      // x 1 -> x
  SumMorphism unitor_r_inv(const Bimodule& x) const;  // x -> x 1
  SumMorphism target_ev(const Bimodule& x) const;     // x^v x -> 1
  SumMorphism target_coev(const Bimodule& x) const;   // 1 -> x x^v
  SumMorphism target_ev_r(const Bimodule& x) const;   // x x^v -> 1
  SumMorphism target_coev_r(const Bimodule& x) const; // 1 -> x^v x

private:
  const Category* cat_;
  Kind kind_;
  std::vector<Bimodule> generators_;
};

struct Slot {
  Bimodule bimodule;
  bool trivial = false;  // identity 1-morphism that is not an edge color
};

// F_(n) o F(alpha) o F^(m); alpha maps the split composite of `src` to that of `tgt`.
// Trivial slots drop out of the conjugate's signature through unit constraints.
SumMorphism f_conjugate(const FrobFunctor& f, const SumMorphism& alpha, const std::vector<Slot>& src,
                        const std::vector<Slot>& tgt);

struct FunctorProperties {
  bool rigid = false, separable = false, frobenius = false, strongly_separable = false;
  double rigid_residual = 0, separable_residual = 0, frobenius_residual = 0, strongly_separable_residual = 0;
  std::size_t pairs = 0, triples = 0;
};
FunctorProperties check_functor_properties(const FrobFunctor& f, std::size_t cap = 3, double tol = tolerance());

struct NaturalityReport {
  std::size_t operadic = 0, partial_trace = 0, horizontal = 0;
  double operadic_residual = 0, trace_residual = 0;
  double horizontal_residual = 0;  // for pseudofunctors: conj(a * b) vs conj(a) conj(b)
  double defect_residual = 0;      // conj(a * b) vs e o (conj(a) conj(b))
  double defect_norm = 0;          // |e - id| over the sampled pairs
};
NaturalityReport conjugation_naturality_suite(const FrobFunctor& f, const AlgebraPtr& a, std::size_t instances,
                                              unsigned seed);

// Random bimodule over (a, b): a free bimodule on a random object, transported
// along a random automorphism.
Bimodule random_bimodule(const Category& cat, const AlgebraPtr& a, const AlgebraPtr& b, unsigned seed,
                         std::size_t max_summands = 2);
SumMorphism random_sum_morphism(const Category& cat, const Obj& src, const Obj& tgt, unsigned seed);

}  // namespace sn
