#pragma once

#include <map>
#include <string>
#include <vector>

#include "chshsim/model.hpp"

namespace chshsim {

/// Planar sign-of-cosine model whose hidden-variable density is conditioned
/// on one wing's setting: p(lambda|u) = |cos(lambda - u)| / 4. Reproduces the
/// singlet correlation -cos(a - b) while staying local and deterministic.
ModelSpec feldmann_model();

/// Same outcome functions with a uniform, setting-independent density.
/// Correlation is the linear sawtooth -1 + 2*theta/pi.
ModelSpec uniform_sign_model();

/// Closed-form singlet correlation -cos(a - b); cannot be sampled.
ModelSpec singlet_oracle();

/// Outcome functions shared by the two sign models.
Outcome sign_outcome_a(Angle setting, Angle lambda);
Outcome sign_outcome_b(Angle setting, Angle lambda);

class ModelCatalog {
 public:
  /// Throws InvalidInput if the name is already registered.
  void add(ModelSpec model);
  /// Throws UnknownModel naming the registered entries.
  [[nodiscard]] const ModelSpec& get(const std::string& name) const;
  [[nodiscard]] bool contains(const std::string& name) const { return entries_.count(name) != 0; }
  [[nodiscard]] std::vector<std::string> names() const;

  /// feldmann, uniform-sign, singlet-oracle.
  static const ModelCatalog& standard();

 private:
  std::map<std::string, ModelSpec> entries_;
};

}  // namespace chshsim
