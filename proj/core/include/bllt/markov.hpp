#pragma once

#include "bllt/environment.hpp"
#include "bllt/lattice_function.hpp"

namespace bllt {

/// (P u)(k) = w_k u(k-1) + (1 - 2 w_k) u(k) + w_k u(k+1).
/// Window grows by one site each way; the environment must cover it.
LatticeFunction apply_P(const Environment& env, const LatticeFunction& u);

/// Adjoint with respect to counting measure, i.e. the pushforward of a
/// distribution: (P* u)(j) = w_{j-1} u(j-1) + (1 - 2 w_j) u(j) + w_{j+1} u(j+1).
/// Mass-preserving. Window grows by one site each way.
LatticeFunction apply_P_adjoint(const Environment& env, const LatticeFunction& u);

/// pi-weighted inner product sum_k pi_k u(k) v(k) with pi_k = 1/omega_k.
double inner_pi(const Environment& env, const LatticeFunction& u,
                const LatticeFunction& v);

double norm_l1_pi(const Environment& env, const LatticeFunction& u);
double norm_l2_pi(const Environment& env, const LatticeFunction& u);
/// sup-norm; the pi weighting does not change it.
double norm_linf_pi(const Environment& env, const LatticeFunction& u);

/// Dirichlet form E(u, v) = <grad u, grad v> (plain inner product).
double dirichlet_form(const LatticeFunction& u, const LatticeFunction& v);

/// Two-step Dirichlet form E2(u, v) = <u, (I - P^2) v>_pi.
double dirichlet_form2(const Environment& env, const LatticeFunction& u,
                       const LatticeFunction& v);

} // namespace bllt
