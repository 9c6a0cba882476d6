#pragma once

#include <utility>
#include <vector>

namespace nsplast {

/// Drive applied to the material point over a run.
struct LoadingProgram {
  enum class Kind {
    Free,             ///< no external input
    ExternalForce,    ///< F(t) = amplitude * sin(angular_frequency * t)
    PrescribedStrain  ///< strain follows a piecewise-linear (t, eps) table
  };

  Kind kind = Kind::Free;
  double amplitude = 0.0;
  double angular_frequency = 0.0;
  std::vector<std::pair<double, double>> strain_table;  ///< knots, t strictly increasing

  double force(double t) const;
  double strain_at(double t) const;  ///< clamped to the end values outside the table
  void validate() const;             // throws std::invalid_argument
};

}  // namespace nsplast
