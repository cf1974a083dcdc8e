#pragma once
#include "radke/density.hpp"
#include "radke/radial_weight.hpp"

#include <string>

namespace radke {

enum class TwisterKind { None, SmoothBackground, SmoothedCone, Conical };

/// Twister data: the radial potential of the twisting form and its density.
/// In the S^1-invariant frame the section of O(2) is the constant 1, so the
/// conical twister has identically zero weight; the cone lives in the slope
/// data (solutions carry slopes -+beta). The smoothed-cone weight is
/// (1-beta) log q_eps with q_eps(x) = 1 + 4 eps cosh^2(x/2).
struct TwisterSpec {
  TwisterKind kind = TwisterKind::None;
  double beta = 1.0;   // cone angle for cone kinds, else unused
  double eps = 0.0;    // smoothing for SmoothedCone
  double coeff = 0.0;  // c for SmoothBackground (weight = c * psi0)
  RadialWeight weight; // twister potential (zero weight for None/Conical)
  Density chi;         // twister density (curvature of the weight)
  double mass = 2.0;   // anticanonical mass left to the metric class

  bool translation_symmetric() const {
    return kind == TwisterKind::None || kind == TwisterKind::Conical;
  }
  bool strictly_positive() const {
    return kind == TwisterKind::SmoothBackground || kind == TwisterKind::SmoothedCone;
  }
  std::string tag() const;

  static TwisterSpec none(const Grid& g);
  static TwisterSpec smooth_background(double c, const Grid& g);
  static TwisterSpec smoothed_cone(double beta, double eps, const Grid& g);
  static TwisterSpec conical(double beta, const Grid& g);
};

/// Smoothing family of the conical twister: eps > 0 gives the smoothed cone,
/// eps = 0 degenerates to the conical spec (zero weight, mass 2 beta).
TwisterSpec smoothing_profile(double beta, double eps, const Grid& g);

} // namespace radke
