#pragma once

#include "pwlnet/numerics.hpp"

namespace pwlnet {

enum class CouplingKind {
  LinearVoltageDiffusive,  // G(x_i, x_j) = v_j - v_i through the v equation
  SynapticAlpha,           // event-driven alpha-function synapses
  Biharmonic,              // phase-only: H(theta) = -sin(theta - a) + r sin 2theta
  CustomPairwise,          // user feedthrough matrix
};

struct CouplingSpec {
  CouplingKind kind = CouplingKind::LinearVoltageDiffusive;
  double alpha = 1.0;        // synaptic rate
  double a = 0.0, r = 0.0;   // biharmonic parameters
  Mat H;                     // custom feedthrough (m x m)
  bool laplacian_form = true;  // custom: -sigma L H x vs +sigma w H x
  int v_index = 0;

  static CouplingSpec diffusive(int v_index = 0) {
    CouplingSpec c;
    c.kind = CouplingKind::LinearVoltageDiffusive;
    c.v_index = v_index;
    return c;
  }
  static CouplingSpec synaptic(double alpha) {
    if (alpha <= 0) throw ValidationError("coupling: alpha must be positive");
    CouplingSpec c;
    c.kind = CouplingKind::SynapticAlpha;
    c.alpha = alpha;
    return c;
  }
  static CouplingSpec biharmonic(double a, double r) {
    CouplingSpec c;
    c.kind = CouplingKind::Biharmonic;
    c.a = a;
    c.r = r;
    return c;
  }
  static CouplingSpec custom(const Mat& H, bool laplacian_form) {
    CouplingSpec c;
    c.kind = CouplingKind::CustomPairwise;
    c.H = H;
    c.laplacian_form = laplacian_form;
    return c;
  }
};

}  // namespace pwlnet
