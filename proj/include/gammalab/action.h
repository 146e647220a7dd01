#pragma once

// Discretized action I_f(γ) = ∫ |γ'|^2 + |∇f|^2(γ) dt over piecewise-linear
// paths, its null-Lagrangian variant, and the explicit endpoint-interpolation
// and recovery constructions built from resolvents.

#include <string_view>

#include "gammalab/convex.h"
#include "gammalab/function_io.h"
#include "gammalab/path.h"

namespace gammalab {

enum class Quadrature { kNodeTrapezoid, kMidpoint };

std::string_view quadrature_name(Quadrature rule);
Quadrature parse_quadrature(std::string_view name);

struct ActionBreakdown {
  double kinetic = 0.0;     // exact Dirichlet energy of the interpolant
  double slope_term = 0.0;  // quadrature of |∇f|^2 along the path, may be +∞
  double total = 0.0;
  Quadrature rule = Quadrature::kMidpoint;
  std::size_t intervals = 0;
};

Json to_json(const ActionBreakdown& a);

// Any infinite slope at an evaluation point makes slope_term and total +∞.
ActionBreakdown discrete_action(const LambdaConvexFunction& f, const Path& path,
                                Quadrature rule = Quadrature::kMidpoint);

// Σ Δt |Δx/Δt - ∇f(midpoint)|^2. Throws DomainError on an infinite slope.
double alt_action(const LambdaConvexFunction& f, const Path& path);

struct UpperGradientCheck {
  double integral = 0.0;   // ∫ |∇f|(γ) |γ'| dt, midpoint rule
  double variation = 0.0;  // |f(end) - f(start)|
  double residual = 0.0;   // integral - variation
  // Spread of the slope over each segment's end and mid points, weighted by
  // segment length; bounds the midpoint error when the slope along a segment
  // stays within the sampled range.
  double quadrature_bound = 0.0;
};

UpperGradientCheck upper_gradient_residual(const LambdaConvexFunction& f, const Path& path);

struct DuboisReymondCheck {
  double max_deviation = 0.0;  // max_i |e_i - mean|
  double mean = 0.0;           // mean of e_i = |Δx_i/Δt_i|^2 - |∇f|^2(midpoint_i)
};

DuboisReymondCheck dubois_reymond_residual(const LambdaConvexFunction& f, const Path& path);

// γ(t) = J_τ((1 - t/δ)(x0 + τ∇f(x0)) + (t/δ)(xd + τ∇f(xd))) sampled at M + 1
// uniform times on [t_start, t_start + δ]. Requires (1 + τλ)^-1 <= 2 and
// x0, xd in D(∂f).
Path interpolation_path(const LambdaConvexFunction& f, double tau, double delta, const Vector& x0,
                        const Vector& xd, int samples, double t_start = 0.0);

// 2δ min_i |∇f|^2(x_i) + (40/δ + 12δ/τ^2)|xd - x0|^2 + (12δ + 40τ^2/δ)|∇f(xd) - ∇f(x0)|^2
double interpolation_bound(const LambdaConvexFunction& f, double tau, double delta, const Vector& x0,
                           const Vector& xd);

// Coarsened form with δ = τ: 52/τ |xd - x0|^2 + 210τ max_i |∇f|^2(x_i).
double tau_interpolation_bound(const LambdaConvexFunction& f, double tau, const Vector& x0, const Vector& xd);

// Patch resolution for recovery paths: max(16, ceil(τ N)).
int default_patch_samples(double tau, std::size_t intervals);

struct RecoveryConstruction {
  Path extended;  // on [-τ, 1 + τ]
  Path rescaled;  // the same curve reparametrized onto [0, 1]
  double junction_gap = 0.0;
  double endpoint_gap = 0.0;
};

// Resolvent image t -> J_{f_h,τ}(γ(t)) of a path on [0, 1], joined to xh0 and
// xh1 by interpolation patches of duration τ. Junctions are audited to 1e-8
// and the endpoints are set to xh0, xh1.
RecoveryConstruction recovery_construction(const LambdaConvexFunction& fh, double tau, const Path& gamma,
                                           const Vector& xh0, const Vector& xh1, int patch_samples);

Path recovery_path(const LambdaConvexFunction& fh, double tau, const Path& gamma, const Vector& xh0,
                   const Vector& xh1, int patch_samples);

}  // namespace gammalab
