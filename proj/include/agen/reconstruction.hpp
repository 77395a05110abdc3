#pragma once

#include <functional>
#include <span>
#include <vector>

#include "agen/group_models.hpp"
#include "agen/kernel.hpp"

namespace agen {

/// Gauss panels in log(mu) over [mu_min, mu_max].
struct RadialGrid {
  double mu_min = 1e-6;
  double mu_max = 1e6;
  int panels = 40;

  void validate() const;
};

/// Vector function P(mu) sampled on the nodes of a RadialGrid.
struct RadialSamples {
  RadialGrid grid;
  std::vector<double> mu;
  std::vector<double> log_weights;  // weights for ds, s = log mu
  std::vector<StateVector> values;
};

RadialSamples sample_radial(const std::function<StateVector(double)>& P, const RadialGrid& grid);

struct MellinIntegral {
  StateVector value;
  /// Size of the first neglected term of the endpoint expansions.
  double tail_remainder = 0.0;
};

/// int_0^inf mu^{alpha-1} P(mu) dmu for 0 < Re alpha < 1. The interior is
/// integrated on the grid; (0, mu_min) and (mu_max, inf) are closed with
/// P ~ P0 + P1 mu and P ~ c1/mu + c2/mu^2, fitted to the outermost nodes.
MellinIntegral mellin_integrate(const RadialSamples& samples, Complex alpha);

struct ReconstructionOptions {
  RadialGrid grid;
  double rel_tolerance = 1e-12;  // for the Q_mu quadratures
  /// Endpoint remainder allowed, relative to ||x||, after the sin(pi alpha)/pi
  /// prefactor.
  double truncation_tolerance = 1e-6;
};

/// Pr1 (Delta + mu)^{-1} Delta (x, U_i x) = mu Q_mu x + Q_mu U_i x.
StateVector delta_resolvent_action(const GroupModel& g, const KernelParam& p,
                                   const StateVector& x, double rel_tolerance = 1e-12);

struct ReconstructionStep {
  Complex parameter;  // z for the Delta variant, alpha for the CZ variant
  StateVector approx;
  double error = 0.0;           // ||approx - U_t x||
  double error_reversed = 0.0;  // ||approx - U_{-t} x||
  /// ||approx - exact value of the integral at this parameter||; the
  /// quadrature floor.
  double quadrature_residual = 0.0;
};

struct ReconstructionReport {
  double t = 0.0;
  std::vector<ReconstructionStep> steps;
  StateVector final_approx;
  double tail_remainder = 0.0;
  /// Errors strictly decrease along the sequence.
  bool monotone = true;
};

/// U_t x approximated by sin(-i pi z)/pi int_0^inf mu^{-iz-1} Pr1 (Delta +
/// mu)^{-1} Delta (x, U_i x) dmu for each z of the sequence (0 < Im z < 1).
/// Errors are reported against the oracle; the sequence is never
/// extrapolated. Throws TruncationDominates if the endpoint remainder
/// exceeds options.truncation_tolerance.
ReconstructionReport reconstruct_Ut_delta(const GroupModel& g, double t, const StateVector& x,
                                          std::span<const Complex> z_sequence,
                                          const ReconstructionOptions& options = {});

/// mu -> Pr1 (Delta + mu)^{-1} Delta (x, U_i x) on the radial grid; reusable
/// across t and z.
RadialSamples sample_delta_action(const GroupModel& g, const StateVector& x,
                                  const ReconstructionOptions& options = {});

ReconstructionReport reconstruct_Ut_delta(const GroupModel& g, double t, const StateVector& x,
                                          std::span<const Complex> z_sequence,
                                          const RadialSamples& samples,
                                          const ReconstructionOptions& options = {});

enum class Orientation { Forward, Reversed, Indistinguishable };

struct CzReport {
  ReconstructionReport report;
  /// Forward if the approximations converge to U_t x, Reversed if to U_{-t} x,
  /// Indistinguishable if U_t x and U_{-t} x are closer than the error.
  Orientation orientation = Orientation::Forward;
};

/// sin(pi alpha)/pi int_0^inf lambda^{alpha-1} (lambda + U_i)^{-1} U_i x dlambda
/// with the resolvent of U_i from a direct solve. alpha_sequence must have
/// 0 < Re alpha < 1. The orientation is decided from the errors of the last
/// approximation.
CzReport reconstruct_Ut_cz(const GroupModel& g, double t, const StateVector& x,
                           std::span<const Complex> alpha_sequence,
                           const ReconstructionOptions& options = {});

/// lambda -> (lambda + U_i)^{-1} U_i x on the radial grid.
RadialSamples sample_classical_resolvent(const GroupModel& g, const StateVector& x,
                                         const ReconstructionOptions& options = {});

CzReport reconstruct_Ut_cz(const GroupModel& g, double t, const StateVector& x,
                           std::span<const Complex> alpha_sequence, const RadialSamples& samples,
                           const ReconstructionOptions& options = {});

struct BoundFitRow {
  double magnitude = 0.0;
  double y_direct = 0.0;         // ||mu Q x + Q U_i x||
  double shifted_difference = 0.0;  // relative, vector-level
};

struct BoundFitReport {
  double r = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double fit_residual = 0.0;  // RMS in log y
  double c_r = 0.0;           // max y(mu) |mu|^r over the samples
  double max_shifted_difference = 0.0;
  bool slope_ok = false;      // slope <= -r + 0.1
  std::vector<BoundFitRow> rows;
};

/// y(mu) = ||mu Q_mu x + Q_mu U_i x|| along mu = m e^{i ray_arg} for the given
/// magnitudes, cross-checked against mu^{-r} int i mu^{it} U_t U_{ir} x /
/// (e^{pi(t+ir)} - e^{-pi(t+ir)}) dt integrated on the line R + ir. The slope
/// of log y against log m is fitted over the largest decade of magnitudes.
/// Throws FitUnstable if the RMS fit residual exceeds 0.1.
BoundFitReport decay_bound_fit(const GroupModel& g, double ray_arg,
                               std::span<const double> magnitudes, const StateVector& x, double r,
                               double rel_tolerance = 1e-12);

/// The shifted-line vector for a single mu.
StateVector shifted_line_representation(const GroupModel& g, const KernelParam& p,
                                        const StateVector& x, double r,
                                        double rel_tolerance = 1e-12);

}  // namespace agen
