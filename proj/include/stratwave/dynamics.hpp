#pragma once

// Right-hand sides of the three nonlinear models (full compressible,
// intermediate, soundproof), the two elliptic pressure solvers, the
// advective bilinear form and energy diagnostics.

#include <functional>
#include <string>
#include <vector>

#include "stratwave/modes.hpp"
#include "stratwave/spectral.hpp"

namespace stratwave {

// Model constants and stratification profiles. Profiles are odd sine series
// in z, given as coefficient lists (index m holds the coefficient of
// sin(2*pi*(m+1)*z)); mu = 1 - 2*nu and varpi0 = 1/((gamma-1)*A) are derived.
struct ModelParams {
    double A = 1.0, B = 1.0, C = 1.0;
    double gamma = 1.4;
    double epsilon = 0.1;
    double nu = 0.25;
    double sigma = 0.5;
    std::vector<double> G{1.0};       // sin(2 pi z)
    std::vector<double> H0bar{1.0};   // sin(2 pi z)
    std::vector<double> Gtilde{1.0};  // sin(2 pi z)

    double mu() const { return 1.0 - 2.0 * nu; }
    double varpi0() const { return 1.0 / ((gamma - 1.0) * A); }
    Eta eta() const { return Eta::from_epsilon(epsilon, nu); }

    void validate() const;
    static ModelParams defaults(double epsilon, double nu);
};

// A positive scalar profile or field sampled on the collocation lattice.
struct ThetaField {
    Resolution res;
    std::vector<double> grid;
    double min_value = 0.0;
};

// theta = C + eps^mu * Gt * H0 + eps^(mu+nu) * Gt * H; throws
// NonpositiveTheta when the grid minimum drops to <= 1e-8.
ThetaField theta_field(const SpectralField& h, const ModelParams& p);

struct PressureSolveReport {
    SpectralField p;
    int iterations = 0;
    double residual = 0.0;

    PressureSolveReport(Resolution res) : p(res, Parity::EvenInZ) {}
};

// -lap p = f, zero-mean; IncompatibleRHS when |mean f| > 1e-12 * scale.
PressureSolveReport solve_pressure_poisson(const SpectralField& f);

// The z-profile phi(z) = exp(-eps*A*int_0^z (C G + eps^mu H0bar)) on the
// collocation lattice (one value per z point).
std::vector<double> weight_phi(const ModelParams& p, int nz);

// -div(phi grad p) = f via the fixed-point -lap p_{n+1} = f +
// div((phi-1) grad p_n); iterates until the elliptic residual drops under
// tol. Throws NoConvergence after max_iter, IncompatibleRHS on nonzero mean.
PressureSolveReport solve_pressure_weighted(const SpectralField& f,
                                            const std::vector<double>& phi,
                                            double tol = 1e-11,
                                            int max_iter = 50);

// Full compressible time derivative: each equation solved for d/dt (the q
// equation divided by A, the H equation by B, momentum by theta).
State rhs_full(const State& u, const ModelParams& p);

// B(U1, U2) = v1.grad_h U2 + w1 dz U2
//             + (q1 (div u2)/varpi0, -Gt H1 w2, 0, 0).
State bilinear_B(const State& u1, const State& u2, const ModelParams& p);

// Soundproof time derivative on a divergence-free reduced state; the output
// velocity is divergence-free to the pressure-solve tolerance.
ReducedState rhs_soundproof(const ReducedState& s, const ModelParams& p);

// Intermediate-model time derivative; preserves div(phi u) = 0.
ReducedState rhs_intermediate(const ReducedState& s, const ModelParams& p);

// The pressure fields the two reduced models would use at this state
// (recomputed diagnostics for the experiment metrics).
SpectralField soundproof_pressure(const ReducedState& s,
                                  const ModelParams& p);

// u - grad(psi) with -div(phi grad psi) = -div(phi u), so that
// div(phi u_out) = 0; idempotent; phi == 1 reduces to the Leray projection.
void pseudo_incompressible_project(SpectralField& v1, SpectralField& v2,
                                   SpectralField& w,
                                   const std::vector<double>& phi);
ReducedState pseudo_incompressible_project(ReducedState s,
                                           const std::vector<double>& phi);

// Weighted divergence residual ||div(phi u)|| (phi == 1 gives ||div u||).
double weighted_divergence_norm(const ReducedState& s,
                                const std::vector<double>& phi);
double divergence_norm(const ReducedState& s);

// A ||q||^2 + B ||H||^2 + ||theta^(1/2) v||^2 + ||theta^(1/2) w||^2.
double energy(const State& u, const ModelParams& p);
// (B ||H||^2 + C ||u||^2) / 2 for the reduced models.
double reduced_energy(const ReducedState& s, const ModelParams& p);

// Helpers shared with tests and experiments: profile lifted to a spectral
// field at a resolution, and the primitive int_0^z of a sine-series profile
// sampled on the z lattice.
SpectralField profile_field(const std::vector<double>& sine_coeffs,
                            const Resolution& res);
std::vector<double> profile_primitive_grid(
    const std::vector<double>& sine_coeffs, int nz);

}  // namespace stratwave
