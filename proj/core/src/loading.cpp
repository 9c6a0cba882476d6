#include "nsplast/loading.hpp"

#include <cmath>
#include <stdexcept>

namespace nsplast {

double LoadingProgram::force(double t) const {
  if (kind != Kind::ExternalForce) return 0.0;
  return amplitude * std::sin(angular_frequency * t);
}

double LoadingProgram::strain_at(double t) const {
  if (kind != Kind::PrescribedStrain || strain_table.empty())
    throw std::logic_error("strain_at: no prescribed-strain table");
  if (t <= strain_table.front().first) return strain_table.front().second;
  if (t >= strain_table.back().first) return strain_table.back().second;
  for (std::size_t i = 1; i < strain_table.size(); ++i) {
    const auto& [t1, e1] = strain_table[i];
    if (t <= t1) {
      const auto& [t0, e0] = strain_table[i - 1];
      return e0 + (e1 - e0) * (t - t0) / (t1 - t0);
    }
  }
  return strain_table.back().second;  // unreachable
}

void LoadingProgram::validate() const {
  switch (kind) {
    case Kind::Free:
      if (amplitude != 0.0 || angular_frequency != 0.0 || !strain_table.empty())
        throw std::invalid_argument("loading: free program takes no parameters");
      return;
    case Kind::ExternalForce:
      if (!strain_table.empty())
        throw std::invalid_argument("loading: external_force takes no strain table");
      if (!std::isfinite(amplitude) || !std::isfinite(angular_frequency))
        throw std::invalid_argument("loading: force parameters must be finite");
      return;
    case Kind::PrescribedStrain:
      if (amplitude != 0.0 || angular_frequency != 0.0)
        throw std::invalid_argument("loading: prescribed_strain takes no force parameters");
      if (strain_table.size() < 2)
        throw std::invalid_argument("loading: strain table needs at least 2 knots");
      for (std::size_t i = 0; i < strain_table.size(); ++i) {
        if (!std::isfinite(strain_table[i].first) || !std::isfinite(strain_table[i].second))
          throw std::invalid_argument("loading: strain table values must be finite");
        if (i > 0 && !(strain_table[i].first > strain_table[i - 1].first))
          throw std::invalid_argument("loading: strain table times must be strictly increasing");
      }
      return;
  }
  throw std::invalid_argument("loading: unknown kind");
}

}  // namespace nsplast
