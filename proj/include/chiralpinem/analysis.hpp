#pragma once

#include <vector>

#include "chiralpinem/grid.hpp"
#include "chiralpinem/nearfield.hpp"
#include "chiralpinem/optics.hpp"
#include "chiralpinem/pinem.hpp"

namespace chiralpinem::analysis {

using nearfield::InteractionField;

/// Radial weighting for azimuthal decompositions. r_hi = 0 means "use the
/// grid's usable radius" (full-field weighting).
struct RadialRange {
    double r_lo = 0.0;
    double r_hi = 0.0;
};

/// Azimuthal power spectrum P_m, normalized to sum 1 over |m| <= m_max.
///
/// Implementation note: coefficients are accumulated as
///   C_{j,m} = sum_pixels W_j(R_p) field(p) exp(-i m phi_p)
/// over a bank of narrow Gaussian radial windows W_j covering the requested
/// range, and P_m = sum_j |C_{j,m}|^2 (normalized). Projecting with the
/// pixel azimuth phi_p makes the spectrum commute exactly with pixelwise
/// exp(i q phi) multiplication, and the smooth windows keep cross-order
/// leakage at rounding level.
struct OAMSpectrum {
    int m_max = 0;
    std::vector<double> power;  // index m + m_max
    double r_lo = 0.0, r_hi = 0.0;
    double window_sigma = 0.0;
    int n_windows = 0;

    double p(int m) const { return power[m + m_max]; }
};

OAMSpectrum oam_spectrum(const ComplexField& field, const RadialRange& range = {},
                         int m_max = 8, double center_x = 0.0, double center_y = 0.0);

/// Unwrapped phase winding around a circle of the given radius.
struct ChargeResult {
    int charge = 0;
    double residual = 0.0;  // pre-rounding defect, in turns
};

ChargeResult topological_charge(const ComplexField& field, double loop_radius,
                                double noise_floor_rel = 1e-3, double center_x = 0.0,
                                double center_y = 0.0);

/// h = (P_{+1} - P_{-1}) / (P_{+1} + P_{-1}) over the annulus.
double helicity_of_field(const InteractionField& beta, const RadialRange& annulus);

/// Median spacing of successive intensity maxima along a ray from the given
/// origin, with parabolic sub-pixel peak refinement. r_max = 0 means "to the
/// usable radius". Throws InsufficientFringesError below 3 maxima.
double fringe_period(const RealField& intensity, double angle, double r_min = 0.0,
                     double r_max = 0.0, double center_x = 0.0, double center_y = 0.0);

/// Azimuthal average of a map around its grid center.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> mean;
};

RadialProfile ring_average(const RealField& map);

/// Radius of the profile's maximum, parabolic-refined; ignores empty bins.
double peak_radius(const RadialProfile& profile);

/// Peak radius of a map's ring feature, ignoring everything inside r_min
/// (e.g. a central background spot).
double ring_peak_radius(const RealField& map, double r_min = 0.0);

/// Least-squares fit of y ~ offset + amplitude * cos(2 pi t / period + phase),
/// by period grid search plus golden-section refinement.
struct SinusoidFit {
    double period = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
    double phase = 0.0;
    double rms_residual = 0.0;
};

SinusoidFit fit_sinusoid(const std::vector<double>& t, const std::vector<double>& y,
                         double period_lo, double period_hi);

int count_sign_changes(const std::vector<double>& y);

/// Everything needed to evaluate one two-pulse delay point.
struct DelayScanConfig {
    nearfield::HoleGeometry hole;
    Grid2D grid;
    optics::IncidentLight light;
    optics::MaterialStack stack;
    optics::ElectronBeam beam;
    Complex A{0.0, 0.0};
    Complex B{0.0, 0.0};
    nearfield::PulsePair pulse;  // delay overridden per scan point
    pinem::Passband passband;
    RadialRange helicity_annulus{0.1e-6, 0.35e-6};
    double fringe_angle = 0.0;
    double fringe_r_min = 0.0;
    double fringe_r_max = 0.0;
    bool keep_maps = false;
};

/// Observables vs inter-pulse delay.
struct DelayScan {
    std::vector<double> delays;         // s, strictly increasing
    std::vector<double> helicity;       // in [-1, 1]
    std::vector<double> fringe_periods; // m
    std::vector<double> intensity;      // integrated inelastic signal
    std::vector<RealField> maps;        // energy-filtered maps if kept
    int l_max = 0;                      // truncation used (fixed across the scan)
};

DelayScan run_delay_scan(const DelayScanConfig& cfg, const std::vector<double>& delays);

}  // namespace chiralpinem::analysis
