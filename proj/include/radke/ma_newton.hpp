#pragma once
#include "radke/grid.hpp"

#include <functional>
#include <vector>

namespace radke {

// Shared damped-Newton engine for the normalized Monge-Ampere problems
//   phi'' = (M / Q(phi)) v(phi)   on interior nodes,
//   phi'(-x_max) = a- + Tl,  phi'(x_max) = a+ - Tr,
// where Q is the self-normalizing integral (re-evaluated from phi every
// iteration, never a free unknown) and Tl/Tr are the tail masses of the
// right-hand side beyond the grid. The Jacobian is banded plus a rank-one
// normalizer coupling; since the rank-one column is exactly the image of
// the constants under the banded part, the Newton step reduces to one
// banded solve followed by a free constant shift.

struct MAEvaluation {
  std::vector<double> v;      // RHS numerator samples
  std::vector<double> dscale; // d v_i / d phi_i = -dscale_i * v_i
  double Q = 1.0;
  double Tl = 0.0, Tr = 0.0;  // tail masses entering the slope targets
};

struct MAProblem {
  Grid grid;
  double a_minus = 0.0, a_plus = 0.0; // asymptotic slopes of the solution
  double M = 2.0;                     // curvature mass
  std::function<MAEvaluation(const std::vector<double>& phi)> eval;
};

struct MAOptions {
  double tol = 1e-10;
  int max_iter = 60;
  int max_halvings = 40;
  int order = 6;              // interior stencil order
  bool even_reduction = false;
  enum class Shift { Mean, PinNode, None } shift = Shift::Mean;
  int pin_node = -1;
  bool pin_row = false;       // replace the center row by a value pin
};

struct MAResult {
  std::vector<double> phi;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> trace;
  bool converged = false;
};

MAResult ma_newton(const MAProblem& prob, const std::vector<double>& seed, const MAOptions& opt);

} // namespace radke
