#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "confsym/cartan.hpp"
#include "confsym/errors.hpp"
#include "confsym/liegroups.hpp"
#include "confsym/numerics/alt_tensor.hpp"
#include "confsym/numerics/finite_diff.hpp"
#include "confsym/numerics/random.hpp"

namespace confsym {

using json = nlohmann::json;

enum class StrategyKind { Full, Leaf, Ball };

struct Strategy {
  StrategyKind kind = StrategyKind::Full;
  double band_lo = -1.0, band_hi = 1.0;  // Full
  double level = 0.0;                    // Leaf
  Vec center;                            // Ball
  double radius = 0.0;                   // Ball

  static Strategy full(double lo = -1.0, double hi = 1.0) { return {StrategyKind::Full, lo, hi, 0.0, {}, 0.0}; }
  static Strategy leaf(double t) { return {StrategyKind::Leaf, -1.0, 1.0, t, {}, 0.0}; }
  static Strategy ball(Vec center, double radius) {
    return {StrategyKind::Ball, -1.0, 1.0, 0.0, std::move(center), radius};
  }

  std::string tag() const {
    switch (kind) {
      case StrategyKind::Full: return "full";
      case StrategyKind::Leaf: return "leaf";
      case StrategyKind::Ball: return "ball";
    }
    return "";
  }
};

struct SampleBatch {
  std::vector<Vec> points;
  Strategy strategy;
  std::uint64_t seed = 0;
  double sigma = 1.0;
};

/// Deck transformation gamma of the presentation with gamma^* f = f + chi.
struct DeckGenerator {
  std::function<Vec(const Vec&)> map;
  double chi = 0.0;
  std::string label;
};

/// A conformal symplectic Hamiltonian manifold given by a presentation: an
/// open domain of R^N carrying a potential f, a symplectic form omega_tilde
/// and a lifted moment map, with omega = e^{-f} omega_tilde, theta = df and
/// Phi = e^{-f} Phi_tilde.
///
/// Scenarios are immutable after construction; derived FormFields hold a
/// shared pointer to the scenario.
class Scenario : public std::enable_shared_from_this<Scenario> {
 public:
  virtual ~Scenario() = default;

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const GroupSpec& group() const { return group_; }
  const std::optional<LeeElement>& zeta() const { return zeta_; }
  const json& params() const { return params_; }

  virtual bool in_domain(const Vec& p) const = 0;
  virtual double potential(const Vec& p) const = 0;
  virtual Vec potential_gradient(const Vec& p) const = 0;
  virtual AltTensor omega_tilde(const Vec& p) const = 0;
  /// Components Phi_tilde^{xi_a} for the group's algebra basis.
  virtual Vec moment_tilde_components(const Vec& p) const = 0;
  virtual Vec infinitesimal_action(const Vec& xi, const Vec& p) const = 0;
  virtual Vec group_action(const GroupElement& g, const Vec& p) const = 0;
  virtual std::vector<DeckGenerator> deck() const { return {}; }
  /// Rank of the subgroup of R generated by the chi values.
  virtual int rank() const { return 0; }
  /// Anti-Lee field B with theta(B) = 1 preserving omega (first-kind scenarios).
  virtual std::optional<VectorFieldMap> anti_lee() const { return std::nullopt; }
  /// Time-t flow of B.
  virtual std::optional<Vec> anti_lee_flow(double, const Vec&) const { return std::nullopt; }
  /// Closed-form Reeb field of alpha = i(B) omega on the leaves, when known.
  virtual std::optional<Vec> analytic_reeb(const Vec&) const { return std::nullopt; }
  /// Closed-form Lee field, when known.
  virtual std::optional<Vec> analytic_lee(const Vec&) const { return std::nullopt; }
  virtual std::string description() const = 0;

  /// Fault hook: adds offset * e^{f} to Phi_tilde^{xi_component}, i.e. offset to Phi.
  void inject_fault(int component, double offset) {
    fault_component_ = component;
    fault_offset_ = offset;
  }

  Vec moment_tilde(const Vec& p) const {
    require_domain(p);
    Vec c = moment_tilde_components(p);
    if (fault_component_ >= 0 && fault_component_ < c.size()) c[fault_component_] += fault_offset_ * std::exp(potential(p));
    return c;
  }

  Vec moment_components(const Vec& p) const { return std::exp(-potential(p)) * moment_tilde(p); }

  DualVector moment(const Vec& p) const { return group_.from_components(moment_components(p)); }
  DualVector moment_tilde_dual(const Vec& p) const { return group_.from_components(moment_tilde(p)); }
  Vec reduced_moment(const Vec& p) const { return group_.chamber_project(moment(p)); }

  AltTensor omega(const Vec& p) const {
    require_domain(p);
    return std::exp(-potential(p)) * omega_tilde(p);
  }
  AltTensor theta(const Vec& p) const {
    require_domain(p);
    return AltTensor::covector(potential_gradient(p));
  }

  struct Structure {
    AltTensor omega;
    AltTensor theta;
    double f_value;
  };
  Structure eval_structure(const Vec& p) const { return {omega(p), theta(p), potential(p)}; }

  ConformalStructure structure() const {
    auto self = shared_from_this();
    auto dom = [self](const Vec& p) { return self->in_domain(p); };
    return {FormField{dim_, 2, [self](const Vec& p) { return self->omega(p); }, dom},
            FormField{dim_, 1, [self](const Vec& p) { return self->theta(p); }, dom}};
  }

  FormField potential_field() const {
    auto self = shared_from_this();
    return FormField::function(dim_, [self](const Vec& p) { return self->potential(p); },
                               [self](const Vec& p) { return self->in_domain(p); });
  }

  /// Phi^{xi_a} as a function field.
  FormField moment_field(int a) const {
    auto self = shared_from_this();
    return FormField::function(dim_, [self, a](const Vec& p) { return self->moment_components(p)[a]; },
                               [self](const Vec& p) { return self->in_domain(p); });
  }

  VectorFieldMap action_field(const Vec& xi) const {
    auto self = shared_from_this();
    return {dim_, [self, xi](const Vec& p) { return self->infinitesimal_action(xi, p); }};
  }

  Vec lee_field(const Vec& p) const { return confsym::lee_field(structure(), p); }

  Vec hamiltonian_field(const FormField& f, const Vec& p, double step) const {
    return confsym::hamiltonian_field(structure(), f, p, step);
  }

  Vec deck_apply(std::size_t index, const Vec& p) const {
    const auto gens = deck();
    if (index >= gens.size()) throw BadParams("deck generator index out of range");
    Vec q = gens[index].map(p);
    if (!in_domain(q)) throw OutsideDomain("deck image leaves the domain");
    return q;
  }

  SampleBatch sample(std::size_t count, std::uint64_t seed, const Strategy& strategy, double sigma) const {
    if (count < 1) throw BadStrategy("sample count must be positive");
    validate_strategy(strategy);
    SampleBatch batch{{}, strategy, seed, sigma};
    batch.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      CounterRng rng(seed, i);
      batch.points.push_back(sample_one(rng, strategy, sigma));
    }
    return batch;
  }

  Vec sample_point(std::uint64_t seed, std::uint64_t index, const Strategy& strategy, double sigma) const {
    validate_strategy(strategy);
    CounterRng rng(seed, index);
    return sample_one(rng, strategy, sigma);
  }

 protected:
  Scenario(std::string name, int dim, GroupSpec group, std::optional<LeeElement> zeta, json params)
      : name_(std::move(name)), dim_(dim), group_(std::move(group)), zeta_(std::move(zeta)), params_(std::move(params)) {}

  /// Full and Leaf sampling; Ball is handled generically.
  virtual Vec sample_level(CounterRng& rng, double level, double sigma) const = 0;

  void require_domain(const Vec& p) const {
    if (p.size() != dim_) throw OutsideDomain("point has dimension " + std::to_string(p.size()));
    if (!in_domain(p)) throw OutsideDomain("point outside the presentation domain");
  }

 private:
  void validate_strategy(const Strategy& s) const {
    switch (s.kind) {
      case StrategyKind::Full:
        if (!(s.band_lo <= s.band_hi)) throw BadStrategy("leaf band must satisfy lo <= hi");
        break;
      case StrategyKind::Leaf:
        if (!std::isfinite(s.level)) throw BadStrategy("leaf level must be finite");
        break;
      case StrategyKind::Ball:
        if (s.center.size() != dim_) throw BadStrategy("ball center has the wrong dimension");
        if (!(s.radius > 0.0)) throw BadStrategy("ball radius must be positive");
        if (!in_domain(s.center)) throw BadStrategy("ball center outside the domain");
        break;
    }
  }

  Vec sample_one(CounterRng& rng, const Strategy& s, double sigma) const {
    switch (s.kind) {
      case StrategyKind::Full: return sample_level(rng, rng.uniform(s.band_lo, s.band_hi), sigma);
      case StrategyKind::Leaf: return sample_level(rng, s.level, sigma);
      case StrategyKind::Ball:
        for (int attempt = 0; attempt < 10000; ++attempt) {
          Vec d(dim_);
          for (int i = 0; i < dim_; ++i) d[i] = rng.normal();
          const double r = s.radius * std::pow(rng.uniform(), 1.0 / dim_);
          Vec p = s.center + (r / d.norm()) * d;
          if (in_domain(p)) return p;
        }
        throw BadStrategy("ball rejection sampling found no domain point");
    }
    return {};
  }

  std::string name_;
  int dim_;
  GroupSpec group_;
  std::optional<LeeElement> zeta_;
  json params_;
  int fault_component_ = -1;
  double fault_offset_ = 0.0;
};

using ScenarioPtr = std::shared_ptr<Scenario>;

}  // namespace confsym
