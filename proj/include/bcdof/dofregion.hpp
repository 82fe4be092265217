// SPDX-License-Identifier: Apache-2.0
//
// DoF inner and outer regions over (d0, d1, d2), and the symbolic
// Fourier-Motzkin chain that carries one into the other.
#pragma once

#include "bcdof/channel.hpp"
#include "bcdof/polytope.hpp"

namespace bcdof::dofregion {

struct DofTriple {
  Rational d0;
  Rational d1;
  Rational d2;

  Point point() const { return {d0, d1, d2}; }
};

bool contains(const Polytope& p, const DofTriple& x, const Rational& slack = 0);

/// (d0, d1, d2, a1, a2, b) with d >= 0.
Polytope inner_lifted(const SetSizes& sizes);
/// (d0, d1, d2, eta, delta) with d >= 0.
Polytope outer_lifted(const SetSizes& sizes);

Polytope inner_region(const SetSizes& sizes);
Polytope outer_region(const SetSizes& sizes);

/// Each stage of the equivalence chain, with the set sizes kept as the trailing
/// coordinates S1, Sc, S2 so that one run covers every size triple. Stages are
/// the raw combination output; `reduced` is the last stage after redundancy removal.
struct ReplayStages {
  Polytope lifted;       // d0 d1 d2 a1 a2 b | S
  Polytope substituted;  // d0 d1 d2 alpha a2 b | S, a1 = alpha - a2
  Polytope alpha2_gone;  // d0 d1 d2 alpha b | S
  Polytope shifted;      // d0 d1 d2 t1 t2 alpha b | S, in the primed triple
  Polytope t1_gone;      // d0 d1 d2 t2 alpha b | S
  Polytope t2_gone;      // d0 d1 d2 alpha b | S
  Polytope reduced;
  Polytope outer;        // the outer system with eta = b, delta = Sc - alpha
};

ReplayStages replay_equivalence_chain();

} // namespace bcdof::dofregion
