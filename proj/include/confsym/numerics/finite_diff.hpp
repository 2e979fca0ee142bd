#pragma once

#include <algorithm>
#include <functional>
#include <string>

#include "confsym/errors.hpp"
#include "confsym/numerics/alt_tensor.hpp"

namespace confsym {

using DomainPredicate = std::function<bool(const Vec&)>;

inline bool everywhere(const Vec&) { return true; }

/// A differential form given pointwise.
struct FormField {
  int dim = 0;
  int rank = 0;
  std::function<AltTensor(const Vec&)> eval;
  DomainPredicate domain = everywhere;

  AltTensor operator()(const Vec& p) const {
    if (!domain(p)) throw DomainExit("form evaluated outside its domain");
    AltTensor t = eval(p);
    if (t.dim() != dim || t.rank() != rank) throw DimensionMismatch("form evaluator returned wrong shape");
    return t;
  }

  static FormField function(int dim, std::function<double(const Vec&)> f,
                            DomainPredicate domain = everywhere) {
    return {dim, 0, [dim, f = std::move(f)](const Vec& p) { return AltTensor::scalar(dim, f(p)); },
            std::move(domain)};
  }

  static FormField constant(const AltTensor& value) {
    return {value.dim(), value.rank(), [value](const Vec&) { return value; }, everywhere};
  }
};

struct VectorFieldMap {
  int dim = 0;
  std::function<Vec(const Vec&)> eval;

  Vec operator()(const Vec& p) const {
    Vec v = eval(p);
    if (v.size() != dim) throw DimensionMismatch("vector field returned wrong dimension");
    return v;
  }

  static VectorFieldMap constant(const Vec& v) {
    return {static_cast<int>(v.size()), [v](const Vec&) { return v; }};
  }
};

inline double default_step(const Vec& p) { return 1e-4 * std::max(1.0, p.norm()); }

/// d(alpha) at p by central differences: sum_i dx^i ^ (d_i alpha).
inline AltTensor finite_d(const FormField& alpha, const Vec& p, double step) {
  if (!(step > 0.0)) throw DomainExit("step must be positive");
  if (alpha.rank + 1 > alpha.dim) throw RankOverflow("exterior derivative of a top-degree form");
  AltTensor out(alpha.dim, alpha.rank + 1);
  Vec q = p;
  for (int i = 0; i < alpha.dim; ++i) {
    q[i] = p[i] + step;
    if (!alpha.domain(q)) throw DomainExit("stencil leaves the domain along coordinate " + std::to_string(i));
    AltTensor plus = alpha(q);
    q[i] = p[i] - step;
    if (!alpha.domain(q)) throw DomainExit("stencil leaves the domain along coordinate " + std::to_string(i));
    AltTensor minus = alpha(q);
    q[i] = p[i];
    plus -= minus;
    plus *= 1.0 / (2.0 * step);
    out += wedge(AltTensor::basis_covector(alpha.dim, i), plus);
  }
  return out;
}

/// The field p -> finite_d(alpha, p, step).
inline FormField d_field(FormField alpha, double step) {
  FormField out{alpha.dim, alpha.rank + 1, {}, alpha.domain};
  out.eval = [alpha = std::move(alpha), step](const Vec& p) { return finite_d(alpha, p, step); };
  return out;
}

}  // namespace confsym
