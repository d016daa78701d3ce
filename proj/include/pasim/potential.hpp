#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pasim/spline.hpp"

namespace pasim::radial {

// One Born-Oppenheimer potential curve; energies in GHz relative to the
// curve's own dissociation asymptote, distances in bohr.
//
//   model-ground :  V(R) = c12/R^12 - c6/R^6
//   model-excited:  V(R) = c6x/R^6  - c3/R^3
//   tabulated    :  cubic-spline interpolation of sampled (R, V) pairs
class PotentialCurve {
 public:
  enum class Kind { model_ground, model_excited, tabulated };

  Kind kind() const { return kind_; }
  double value(double R_bohr) const;
  double derivative(double R_bohr) const;  // dV/dR, GHz/bohr

  double r_support_min() const { return r_lo_; }
  double r_support_max() const { return r_hi_; }
  double equilibrium_R() const;  // location of the minimum, bohr
  double depth_GHz() const;      // -min(V), >= 0

  // model parameters (zero for kinds that do not use them)
  double c12 = 0, c6 = 0;  // GHz*bohr^12, GHz*bohr^6
  double c6x = 0, c3 = 0;  // GHz*bohr^6,  GHz*bohr^3

  std::string fingerprint() const;  // identity string for caching

  friend PotentialCurve make_model_ground(double, double);
  friend PotentialCurve make_model_excited(double, double);
  friend PotentialCurve make_tabulated(std::vector<double>, std::vector<double>, bool);

 private:
  Kind kind_ = Kind::model_ground;
  double r_lo_ = 1e-2, r_hi_ = 1e9;
  std::shared_ptr<const CubicSpline> table_;
};

PotentialCurve make_model_ground(double c12, double c6);
PotentialCurve make_model_excited(double c6x, double c3);

// In-memory tabulated curve. validate = true applies the file-loader checks
// (strictly increasing R, repulsive head, asymptote reached).
PotentialCurve make_tabulated(std::vector<double> R_bohr, std::vector<double> V_GHz,
                              bool validate = false);

// Plain-text loader: two columns "R_bohr V_GHz", '#' comments, strictly
// increasing R. Validates the repulsive head and that the tail has reached
// the asymptote (|V(R_max)| <= 1e-3 * max|V|).
PotentialCurve load_tabulated_potential(const std::string& path);

// Model curves calibrated so that the designated weakly bound level of each
// curve reproduces the shipped reference constants (see radial.hpp).
PotentialCurve calibrated_ground_curve();
PotentialCurve calibrated_excited_curve();

}  // namespace pasim::radial
