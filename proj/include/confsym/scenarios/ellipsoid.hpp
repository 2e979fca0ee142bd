#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "confsym/scenarios/scenario.hpp"

namespace confsym {

/// C^n \ {0} realized as R^{2n} with coordinates (x_1, y_1, ..., x_n, y_n) and
/// z_j = x_j + i y_j.
///
///   f(z)            = log(1/2 sum_j zeta_j |z_j|^2)
///   omega_tilde     = sum_j dy_j ^ dx_j
///   xi_M(z)         = xi z              (xi anti-Hermitian)
///   Phi_tilde^{iS}  = 1/2 z^* S z       (S Hermitian)
///   Phi             = z z^* / (z^* diag(zeta) z)   as H = -i mu
///
/// The orientation of omega_tilde matches the sign of xi_M = d/dt exp(t xi) z,
/// so that i(xi_M) omega_tilde = d Phi_tilde and the Lee field is zeta_M.
///
/// Variants share this presentation and differ in their deck group:
///  - hopf_ellipsoid: z -> c z with chi = 2 log c (quotient S^1 x S^{2n-1});
///  - cylinder_contact: no deck group; the chart (t, q) -> e^{t/2} q over the
///    leaf f = 0 exhibits the structure (d alpha + dt ^ alpha, dt);
///  - mapping_torus: z -> e^{s/2} diag(e^{i phi}) z with chi = s.
class EllipsoidScenario : public Scenario {
 public:
  enum class Variant { Hopf, Cylinder, MappingTorus };

  struct Params {
    int n = 2;
    Vec zeta;
    bool full = false;
    double deck_scale = 2.0;
    double shift = 1.0;
    Vec phases;
  };

  static Params parse(const json& j, Variant v) {
    Params p;
    if (!j.is_object()) throw BadParams("params must be an object");
    const bool has_n = j.contains("n"), has_zeta = j.contains("zeta");
    if (has_n) {
      if (!j["n"].is_number_integer()) throw BadParams("n must be an integer");
      p.n = j["n"].get<int>();
    }
    if (has_zeta) {
      if (!j["zeta"].is_array()) throw BadParams("zeta must be an array of numbers");
      std::vector<double> z;
      for (const auto& e : j["zeta"]) {
        if (!e.is_number()) throw BadParams("zeta must be an array of numbers");
        z.push_back(e.get<double>());
      }
      if (has_n && static_cast<int>(z.size()) != p.n) throw BadParams("zeta length must equal n");
      p.n = static_cast<int>(z.size());
      p.zeta = Eigen::Map<Vec>(z.data(), static_cast<Eigen::Index>(z.size()));
    }
    if (p.n < 2 || p.n > 4) throw BadParams("n must be in {2, 3, 4}");
    if (!has_zeta) p.zeta = Vec::Ones(p.n);
    for (int k = 0; k < p.n; ++k)
      if (!(p.zeta[k] > 0.0) || !std::isfinite(p.zeta[k]))
        throw BadParams("zeta entries must satisfy zeta_1>=...>=zeta_n>0 (entry " + std::to_string(k + 1) +
                        " is not positive)");
    const std::string sub = j.value("subgroup", std::string("torus"));
    if (sub != "torus" && sub != "full") throw BadParams("subgroup must be \"torus\" or \"full\"");
    p.full = sub == "full";
    if (p.full) {
      try {
        GroupSpec::unitary_centralizer(p.zeta);
      } catch (const SpecMismatch& e) {
        throw BadParams(e.what());
      }
    }
    if (v == Variant::Hopf) {
      p.deck_scale = j.value("deck_scale", 2.0);
      if (!(p.deck_scale > 0.0) || p.deck_scale == 1.0) throw BadParams("deck_scale must be positive and != 1");
    }
    if (v == Variant::MappingTorus) {
      p.shift = j.value("shift", 1.0);
      if (p.shift == 0.0 || !std::isfinite(p.shift)) throw BadParams("shift must be nonzero");
      p.phases = Vec::Zero(p.n);
      if (j.contains("phases")) {
        const auto& ph = j["phases"];
        if (!ph.is_array() || static_cast<int>(ph.size()) != p.n) throw BadParams("phases must be an array of length n");
        for (int k = 0; k < p.n; ++k) {
          if (!ph[k].is_number()) throw BadParams("phases must be numbers");
          p.phases[k] = ph[k].get<double>();
        }
      }
      if (p.full)
        for (int a = 0; a < p.n; ++a)
          for (int b = 0; b < p.n; ++b)
            if (p.zeta[a] == p.zeta[b] && p.phases[a] != p.phases[b])
              throw BadParams("phases must be constant on blocks of equal zeta (central in K)");
    }
    return p;
  }

  static json echo(const Params& p, Variant v) {
    json j;
    j["n"] = p.n;
    j["zeta"] = std::vector<double>(p.zeta.data(), p.zeta.data() + p.n);
    j["subgroup"] = p.full ? "full" : "torus";
    if (v == Variant::Hopf) j["deck_scale"] = p.deck_scale;
    if (v == Variant::MappingTorus) {
      j["shift"] = p.shift;
      j["phases"] = std::vector<double>(p.phases.data(), p.phases.data() + p.n);
    }
    return j;
  }

  static std::string variant_name(Variant v) {
    switch (v) {
      case Variant::Hopf: return "hopf_ellipsoid";
      case Variant::Cylinder: return "cylinder_contact";
      case Variant::MappingTorus: return "mapping_torus";
    }
    return "";
  }

  EllipsoidScenario(Variant v, const Params& p)
      : Scenario(variant_name(v), 2 * p.n, p.full ? GroupSpec::unitary_centralizer(p.zeta) : GroupSpec::torus(p.n),
                 make_zeta(p), echo(p, v)),
        variant_(v),
        p_(p) {}

  Variant variant() const { return variant_; }
  const Params& ellipsoid_params() const { return p_; }

  static CVec to_complex(const Vec& p) {
    CVec z(p.size() / 2);
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = cplx(p[2 * j], p[2 * j + 1]);
    return z;
  }
  static Vec to_real(const CVec& z) {
    Vec p(2 * z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) p[2 * j] = z[j].real(), p[2 * j + 1] = z[j].imag();
    return p;
  }

  bool in_domain(const Vec& p) const override { return p.size() == dim() && p.squaredNorm() > 0.0 && p.allFinite(); }

  double quadratic(const Vec& p) const {
    double q = 0.0;
    for (int j = 0; j < p_.n; ++j) q += p_.zeta[j] * (p[2 * j] * p[2 * j] + p[2 * j + 1] * p[2 * j + 1]);
    return 0.5 * q;
  }

  double potential(const Vec& p) const override { return std::log(quadratic(p)); }

  Vec potential_gradient(const Vec& p) const override {
    const double q = quadratic(p);
    Vec g(dim());
    for (int j = 0; j < p_.n; ++j) {
      g[2 * j] = p_.zeta[j] * p[2 * j] / q;
      g[2 * j + 1] = p_.zeta[j] * p[2 * j + 1] / q;
    }
    return g;
  }

  AltTensor omega_tilde(const Vec&) const override {
    AltTensor w(dim(), 2);
    for (int j = 0; j < p_.n; ++j) w.at2(2 * j, 2 * j + 1) = -1.0;
    return w;
  }

  Vec moment_tilde_components(const Vec& p) const override {
    const CVec z = to_complex(p);
    Vec c(group().algebra_dim());
    for (int a = 0; a < c.size(); ++a) c[a] = 0.5 * (z.adjoint() * group().hermitian_basis(a) * z)(0, 0).real();
    return c;
  }

  Vec infinitesimal_action(const Vec& xi, const Vec& p) const override {
    return to_real(group().algebra_matrix(xi) * to_complex(p));
  }

  Vec group_action(const GroupElement& g, const Vec& p) const override {
    group().check_element(g);
    return to_real(g.matrix * to_complex(p));
  }

  std::vector<DeckGenerator> deck() const override {
    switch (variant_) {
      case Variant::Hopf: {
        const double c = p_.deck_scale;
        return {{[c](const Vec& p) { return Vec(c * p); }, 2.0 * std::log(c), "h(z) = c z"}};
      }
      case Variant::MappingTorus: {
        const double s = p_.shift;
        const Vec ph = p_.phases;
        return {{[s, ph](const Vec& p) {
                   CVec z = to_complex(p);
                   for (Eigen::Index j = 0; j < z.size(); ++j) z[j] *= std::exp(cplx(0.5 * s, ph[j]));
                   return to_real(z);
                 },
                 s, "z -> e^{s/2} diag(e^{i phi}) z"}};
      }
      case Variant::Cylinder: return {};
    }
    return {};
  }

  int rank() const override { return variant_ == Variant::Cylinder ? 0 : 1; }

  std::optional<VectorFieldMap> anti_lee() const override {
    if (variant_ == Variant::Hopf) return std::nullopt;
    return VectorFieldMap{dim(), [](const Vec& p) { return Vec(0.5 * p); }};
  }

  std::optional<Vec> anti_lee_flow(double t, const Vec& p) const override {
    if (variant_ == Variant::Hopf) return std::nullopt;
    return Vec(std::exp(0.5 * t) * p);
  }

  std::optional<Vec> analytic_reeb(const Vec& p) const override {
    if (variant_ == Variant::Hopf) return std::nullopt;
    return Vec(-infinitesimal_action(zeta()->coords, p));
  }

  std::optional<Vec> analytic_lee(const Vec& p) const override { return infinitesimal_action(zeta()->coords, p); }

  std::string description() const override {
    switch (variant_) {
      case Variant::Hopf: return "Hopf manifold S^1 x S^{2n-1} presented on C^n\\0 with deck z -> c z";
      case Variant::Cylinder: return "Symplectization-type cylinder R x Q_0 over an ellipsoid leaf (first kind, no deck group)";
      case Variant::MappingTorus: return "Contact mapping torus of an ellipsoid: deck z -> e^{s/2} diag(e^{i phi}) z (first kind)";
    }
    return "";
  }

 protected:
  Vec sample_level(CounterRng& rng, double level, double) const override {
    Vec p(dim());
    do {
      for (int i = 0; i < dim(); ++i) p[i] = rng.normal();
    } while (p.squaredNorm() < 1e-12);
    return std::sqrt(std::exp(level) / quadratic(p)) * p;
  }

 private:
  static std::optional<LeeElement> make_zeta(const Params& p) {
    if (!p.full) return LeeElement{p.zeta};
    const auto g = GroupSpec::unitary_centralizer(p.zeta);
    Vec c = Vec::Zero(g.algebra_dim());
    c.head(p.n) = p.zeta;
    return LeeElement{c};
  }

  Variant variant_;
  Params p_;
};

}  // namespace confsym
