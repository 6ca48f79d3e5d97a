#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "sn/formats.hpp"
#include "sn/stringnet.hpp"

using namespace sn;
using ojson = nlohmann::ordered_json;

namespace {


struct Options {
  std::string category, graph, format = "text";
  double tol = 1e-9;
  unsigned seed = 7;
  // subcommand specific
  std::string source, target, functor = "forgetful", algebra, construction = "all";
  std::size_t instances = 100;
  bool field_dim = false;
};

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

ojson num(double x) { return round12(x); }

ojson scalar(Scalar s) {
  const double cut = 1e-12 * std::max(1.0, std::abs(s));
  const double re = std::abs(s.real()) < cut ? 0.0 : s.real();
  const double im = std::abs(s.imag()) < cut ? 0.0 : s.imag();
  if (im == 0.0) return num(re);
  return ojson::array({num(re), num(im)});
}

ojson vec(const Eigen::VectorXcd& v) {
  ojson j = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(scalar(v(i)));
  return j;
}

std::string resolve(const std::string& path) {
  if (path.empty()) throw SchemaError("no category given");
  if (std::filesystem::exists(path)) return path;
  const std::string bundled = std::string(SN_DATA_DIR) + "/" + path;
  if (std::filesystem::exists(bundled)) return bundled;
  throw SchemaError("cannot open " + path);
}

Word parse_word(const FusionData& d, const std::string& s) {
  Word w;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) w.push_back(d.label(tok));
  return w;
}

ojson labels_json(const FusionData& d, const SWord& w) {
  ojson j = ojson::array();
  for (const auto& s : w) j.push_back(d.labels[std::size_t(s.label)] + (s.sign > 0 ? "" : "*"));
  return j;
}

struct Report {
  ojson body = ojson::object();
  bool ok = true;
  void fail_if(bool bad) { ok = ok && !bad; }
};

// ---- subcommands ----

Report validate_category(const Options& o) {
  const CategoryFile f = load_category(resolve(o.category));
  Report r;
  const ValidationReport v = validate(f.data, o.tol);
  r.body["name"] = f.data.name;
  r.body["rank"] = f.data.rank();
  for (const auto& x : v.residuals) r.body[x.name + "_residual"] = num(x.value);
  for (const auto& x : v.info) r.body[x.name] = num(x.value);
  r.body["warnings"] = v.warnings;
  r.fail_if(!v.valid());
  if (v.valid()) {
    const Category cat(f.data);
    ojson algs = ojson::array();
    for (const auto& a : parse_algebras(cat, f.algebras)) {
      const ValidationReport av = validate_frobenius(cat, *a, o.tol);
      ojson e{{"name", a->name}, {"valid", av.valid()}};
      for (const auto& x : av.residuals) e[x.name] = num(x.value);
      algs.push_back(e);
      r.fail_if(!av.valid());
    }
    r.body["algebras"] = algs;
  }
  r.body["valid"] = r.ok;
  return r;
}

Report eval_disk(const Options& o) {
  const CategoryFile f = load_category(resolve(o.category));
  const Category cat(f.data);
  if (o.graph.empty()) throw SchemaError("eval-disk needs --graph");
  const DiskGraph g = load_graph(cat, o.graph);
  Report r;
  const BoundaryDatum b = boundary_datum_of(g);
  r.body["vertices"] = g.num_vertices;
  r.body["boundary"] = labels_json(f.data, b.points);
  const Morphism v = evaluate_disk(cat, g);
  if (b.points.empty())
    r.body["scalar"] = scalar(cat.as_scalar(v));
  else
    r.body["coefficients"] = vec(to_vector(lift(cat, v)));
  return r;
}

Report hom_dim_cmd(const Options& o) {
  const CategoryFile f = load_category(resolve(o.category));
  const Category cat(f.data);
  Report r;
  const Word s = parse_word(f.data, o.source), t = parse_word(f.data, o.target);
  r.body["source"] = o.source;
  r.body["target"] = o.target;
  r.body["dim"] = cat.hom_dim(s, t);
  return r;
}

Report tube_cmd(const Options& o) {
  const Category cat(load_category(resolve(o.category)).data);
  const TubeAlgebra t = tube_algebra(cat);
  const WedderburnReport w = karoubi_split(t, o.seed, o.tol);
  Report r;
  std::vector<int> blocks = w.block_dims;
  std::sort(blocks.begin(), blocks.end());
  r.body["dim"] = t.dim();
  r.body["blocks"] = blocks;
  r.body["associativity_residual"] = num(t.associativity_residual);
  r.body["unit_residual"] = num(t.unit_residual);
  r.fail_if(t.associativity_residual > o.tol || t.unit_residual > o.tol || !w.semisimple);
  return r;
}

Report karoubi_cmd(const Options& o) {
  const Category cat(load_category(resolve(o.category)).data);
  const TubeAlgebra t = tube_algebra(cat);
  const WedderburnReport w = karoubi_split(t, o.seed, o.tol);
  Report r;
  std::size_t sq = 0;
  for (int d : w.block_dims) sq += std::size_t(d * d);
  r.body["center_dim"] = w.center_dim;
  r.body["blocks"] = w.block_dims;
  r.body["sum_of_squares"] = sq;
  r.body["tube_dim"] = t.dim();
  r.body["semisimple"] = w.semisimple;
  r.body["idempotent_residual"] = num(w.idempotent_residual);
  ojson idem = ojson::array();
  for (const auto& e : w.central_idempotents) idem.push_back(vec(e));
  r.body["central_idempotents"] = idem;
  r.fail_if(!w.semisimple || sq != t.dim() || w.idempotent_residual > o.tol);
  return r;
}

Report twist_cmd(const Options& o) {
  const Category cat(load_category(resolve(o.category)).data);
  const TubeAlgebra t = tube_algebra(cat);
  const WedderburnReport w = karoubi_split(t, o.seed, o.tol);
  Eigen::VectorXcd tw = Eigen::VectorXcd::Zero(Eigen::Index(t.dim()));
  for (int a = 0; a < cat.rank(); ++a) tw += tube_coordinates(cat, t, dehn_twist(cat, {a}));
  Report r;
  ojson blocks = ojson::array();
  double worst = 0;
  for (std::size_t i = 0; i < w.central_idempotents.size(); ++i) {
    const Eigen::VectorXcd& e = w.central_idempotents[i];
    const Eigen::VectorXcd te = t.multiply(tw, e);
    const Scalar theta = e.dot(te) / e.squaredNorm();
    const double res = (te - theta * e).norm();
    worst = std::max(worst, res);
    blocks.push_back({{"dim", w.block_dims[i]}, {"theta", scalar(theta)}, {"phase_over_2pi", num(std::arg(theta) / (2 * M_PI))}});
  }
  r.body["blocks"] = blocks;
  r.body["eigen_residual"] = num(worst);
  r.fail_if(worst > o.tol);
  return r;
}

AlgebraPtr pick_algebra(const Catalog& c, const std::string& name) {
  if (!name.empty()) return c.algebra(name);
  for (const auto& [k, a] : c.algebras)
    if (k != "1") return a;
  throw SchemaError("category file has no frobenius algebra");
}

FrobFunctor::Kind functor_kind(const std::string& s) {
  if (s == "identity") return FrobFunctor::Kind::identity;
  if (s == "forgetful") return FrobFunctor::Kind::forgetful;
  throw SchemaError("unknown functor " + s);
}

FrobeniusGraph construction(const std::string& s) {
  if (s == "tree") return FrobeniusGraph::tree;
  if (s == "dense") return FrobeniusGraph::dense;
  if (s == "bubbles") return FrobeniusGraph::bubbles;
  throw SchemaError("unknown construction " + s);
}

Report conjugate_cmd(const Options& o) {
  const CategoryFile f = load_category(resolve(o.category));
  const Category cat(f.data);
  const Catalog c = make_catalog(cat, f);
  Report r;
  r.body["functor"] = o.functor;
  const auto kind = functor_kind(o.functor);
  if (!o.graph.empty()) {
    const WorldSheetFile ws = load_world_sheet(cat, f, o.graph);
    const FrobFunctor fn(cat, kind);
    const FrobeniusGraph g = o.construction == "all" ? FrobeniusGraph::tree : construction(o.construction);
    const FrobeniusConjugate fc = frobenius_conjugate_stringnet(fn, ws.sheet, g, o.tol);
    r.body["construction"] = to_string(g);
    r.body["dim"] = fc.dim;
    r.body["coefficients"] = vec(to_vector(fc.value));
    return r;
  }
  const AlgebraPtr a = pick_algebra(c, o.algebra);
  std::vector<Bimodule> gens{regular_bimodule(cat, a), random_bimodule(cat, a, a, o.seed)};
  const FrobFunctor fn(cat, kind, gens);
  const FunctorProperties p = check_functor_properties(fn, 2, o.tol);
  r.body["algebra"] = a->name;
  r.body["rigid"] = p.rigid;
  r.body["separable"] = p.separable;
  r.body["frobenius"] = p.frobenius;
  r.body["strongly_separable"] = p.strongly_separable;
  const NaturalityReport n = conjugation_naturality_suite(FrobFunctor(cat, kind), a, o.instances, o.seed);
  r.body["operadic"] = n.operadic;
  r.body["partial_trace"] = n.partial_trace;
  r.body["operadic_residual"] = num(n.operadic_residual);
  r.body["trace_residual"] = num(n.trace_residual);
  r.body["horizontal_residual"] = num(n.horizontal_residual);
  r.body["defect_residual"] = num(n.defect_residual);
  r.body["defect_norm"] = num(n.defect_norm);
  r.fail_if(n.operadic_residual > o.tol || n.trace_residual > o.tol || n.defect_residual > o.tol);
  if (p.strongly_separable) r.fail_if(n.horizontal_residual > o.tol);
  r.fail_if(!p.rigid || !p.separable);
  return r;
}

Report correlator_cmd(const Options& o) {
  const CategoryFile f = load_category(resolve(o.category));
  const Category cat(f.data);
  if (o.graph.empty()) throw SchemaError("correlator needs --graph with a world-sheet file");
  const WorldSheetFile ws = load_world_sheet(cat, f, o.graph);
  std::vector<FrobeniusGraph> gs;
  if (o.construction == "all")
    gs = {FrobeniusGraph::tree, FrobeniusGraph::dense, FrobeniusGraph::bubbles};
  else
    gs = {construction(o.construction)};
  Report r;
  const ComplementedWorldSheet cw = complement(cat, ws.sheet);
  r.body["transparent_cells"] = cw.transparent_cells;
  r.body["annular_cell"] = cw.annular_cell;
  r.body["fr_value"] = vec(to_vector(fr_evaluate(cat, cw.net)));
  std::optional<SumMorphism> first;
  double spread = 0, raw_res = 0;
  ojson cons = ojson::array();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const CorrelatorReport c = correlator_report(cat, ws.sheet, gs[i], o.field_dim && i == 0);
    cons.push_back(to_string(gs[i]));
    raw_res = std::max(raw_res, c.raw_residual);
    if (!first) {
      first = c.value;
      if (o.field_dim) r.body["field_dim"] = c.field_dim;
    } else {
      spread = std::max(spread, (c.value - *first).max_abs());
    }
  }
  r.body["constructions"] = cons;
  r.body["construction_spread"] = num(spread);
  r.body["raw_residual"] = num(raw_res);
  r.body["coefficients"] = vec(to_vector(*first));
  r.fail_if(spread > o.tol);
  return r;
}

// Full cycle through the polarizations of random corollas.
double polarization_cycles(const Category& cat, std::mt19937_64& rng, std::size_t samples) {
  double worst = 0;
  std::normal_distribution<double> nd;
  std::size_t done = 0;
  for (std::size_t tries = 0; done < samples && tries < 50 * samples; ++tries) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    SWord legs;
    for (int i = 0; i < n; ++i)
      legs.push_back({std::uniform_int_distribution<int>(0, cat.rank() - 1)(rng),
                      std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1});
    DiskGraph g = corolla_of_datum({legs});
    const auto pols = enumerate_polarizations(g, 0);
    const Polarization k0 = pols[std::uniform_int_distribution<std::size_t>(0, pols.size() - 1)(rng)];
    const ColorSpace cs = color_space(cat, legs, k0);
    if (cs.dim == 0) continue;
    Eigen::VectorXcd v(Eigen::Index(cs.dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Scalar(nd(rng), nd(rng));
    const Morphism c0 = from_vector(cat, {cs.source}, {cs.target}, v).part(cat, 0, 0);
    Morphism c = c0;
    Polarization k = k0;
    for (const auto& next : pols) {
      c = change_polarization(cat, legs, k, next, c);
      k = next;
    }
    c = change_polarization(cat, legs, k, k0, c);
    worst = std::max(worst, (c - c0).max_abs());
    ++done;
  }
  return worst;
}

Report property_suite(const Options& o) {
  std::vector<std::string> names;
  if (o.category.empty())
    names = {"trivial.cat", "z2.cat", "semion.cat", "fib.cat", "ising.cat"};
  else
    names = {o.category};
  Report r;
  ojson cats = ojson::array();
  for (const auto& name : names) {
    const CategoryFile f = load_category(resolve(name));
    ojson e;
    e["name"] = f.data.name;
    const ValidationReport v = validate(f.data, o.tol);
    double worst = 0;
    for (const auto& x : v.residuals) worst = std::max(worst, x.value);
    e["validation_residual"] = num(worst);
    r.fail_if(!v.valid());
    if (!v.valid()) {
      cats.push_back(e);
      continue;
    }
    const Category cat(f.data);
    double qd = 0;
    for (int a = 0; a < cat.rank(); ++a)
      for (int b = 0; b < cat.rank(); ++b) {
        Scalar s = 0;
        for (int c = 0; c < cat.rank(); ++c) s += double(cat.n(a, b, c)) * quantum_dimension(cat, c);
        qd = std::max(qd, std::abs(quantum_dimension(cat, a) * quantum_dimension(cat, b) - s));
      }
    e["qdim_residual"] = num(qd);
    std::mt19937_64 rng(o.seed);
    const double cyc = polarization_cycles(cat, rng, 50);
    e["polarization_cycle_residual"] = num(cyc);
    const TubeAlgebra t = tube_algebra(cat);
    const WedderburnReport w = karoubi_split(t, o.seed, o.tol);
    std::size_t sq = 0;
    for (int d : w.block_dims) sq += std::size_t(d * d);
    e["tube_dim"] = t.dim();
    e["tube_associativity_residual"] = num(t.associativity_residual);
    e["karoubi_sum_of_squares"] = sq;
    r.fail_if(qd > o.tol || cyc > o.tol || t.associativity_residual > o.tol || sq != t.dim());
    ojson algs = ojson::array();
    for (const auto& a : parse_algebras(cat, f.algebras)) {
      const ValidationReport av = validate_frobenius(cat, *a, o.tol);
      const NaturalityReport n = conjugation_naturality_suite(FrobFunctor(cat, FrobFunctor::Kind::forgetful), a, 20, o.seed);
      const double nat = std::max({n.operadic_residual, n.trace_residual, n.defect_residual});
      algs.push_back({{"name", a->name}, {"frobenius_valid", av.valid()}, {"naturality_residual", num(nat)}});
      r.fail_if(!av.valid() || nat > o.tol);
    }
    e["algebras"] = algs;
    cats.push_back(e);
  }
  r.body["categories"] = cats;
  r.body["passed"] = r.ok;
  return r;
}

void print_text(const ojson& j, const std::string& prefix = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_array() && !it->empty() && it->front().is_object()) {
      for (std::size_t i = 0; i < it->size(); ++i) print_text((*it)[i], prefix + it.key() + "[" + std::to_string(i) + "].");
    } else if (it->is_string()) {
      std::cout << prefix << it.key() << ": " << it->get<std::string>() << "\n";
    } else {
      std::cout << prefix << it.key() << ": " << it->dump() << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"String-net and world-sheet computations over pivotal fusion categories"};
  app.require_subcommand(1);
  Options o;
  std::string positional;
  app.add_option("--category", o.category, "category file (bundled names are found in the data directory)");
  app.add_option("--graph", o.graph, "graph or world-sheet file");
  app.add_option("--tolerance", o.tol, "residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));

  std::map<std::string, std::function<Report(const Options&)>> handlers;
  auto sub = [&](const std::string& name, const std::string& help, std::function<Report(const Options&)> h) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->add_option("category_file", positional, "category file");
    handlers[name] = std::move(h);
    return s;
  };
  sub("validate-category", "check the coherence data of a category file", validate_category);
  sub("eval-disk", "evaluate a colored disk graph", eval_disk);
  auto* hd = sub("hom-dim", "dimension of Hom(source, target)", hom_dim_cmd);
  hd->add_option("--source", o.source, "comma separated labels");
  hd->add_option("--target", o.target, "comma separated labels");
  sub("tube-algebra", "tube algebra dimension and blocks", tube_cmd);
  sub("karoubi", "central idempotents of the tube algebra", karoubi_cmd);
  sub("twist", "Dehn twist eigenvalues on the tube algebra blocks", twist_cmd);
  auto* cj = sub("conjugate", "functor properties and conjugation naturality", conjugate_cmd);
  cj->add_option("--functor", o.functor, "identity or forgetful");
  cj->add_option("--algebra", o.algebra, "algebra name from the category file");
  cj->add_option("--instances", o.instances, "number of naturality instances");
  cj->add_option("--construction", o.construction, "frobenius graph for world-sheet input");
  auto* co = sub("correlator", "correlator of a world sheet on the disk", correlator_cmd);
  co->add_option("--construction", o.construction, "tree, dense, bubbles or all");
  co->add_flag("--field-dim", o.field_dim, "report the rank of the field idempotent");
  sub("property-suite", "randomized property checks over the bundled categories", property_suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  }
  if (!positional.empty()) o.category = positional;
  set_tolerance(o.tol);
  const std::string cmd = app.get_subcommands().front()->get_name();

  Report r;
  try {
    r = handlers.at(cmd)(o);
  } catch (const CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  ojson out = r.body;
  out["command"] = cmd;
  out["tolerance"] = num(o.tol);
  out["seed"] = o.seed;
  out["status"] = r.ok ? "ok" : "failed";
  if (o.format == "json")
    std::cout << out.dump() << "\n";
  else
    print_text(out);
  return r.ok ? 0 : 1;
}
