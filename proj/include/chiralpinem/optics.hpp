#pragma once

#include <complex>

#include "chiralpinem/constants.hpp"

namespace chiralpinem::optics {

using Complex = std::complex<double>;

/// Incident light polarization decomposed into circular components.
/// a_plus multiplies the sigma = +1 channel, a_minus the sigma = -1 channel;
/// |a_plus|^2 + |a_minus|^2 = 1 once normalized.
struct PolarizationState {
    Complex a_plus{1.0, 0.0};
    Complex a_minus{0.0, 0.0};

    double norm_sq() const { return std::norm(a_plus) + std::norm(a_minus); }
    bool is_normalized(double tol = 1e-9) const { return std::abs(norm_sq() - 1.0) <= tol; }

    static PolarizationState circular(int sigma);
    static PolarizationState linear_x();
    static PolarizationState linear_y();
};

/// Decompose a Jones vector (E_x, E_y) into circular components,
/// a_pm = (E_x -/+ i E_y) / sqrt(2), and normalize.
PolarizationState jones_to_circular(Complex jones_x, Complex jones_y);

/// Stokes S3/S0 (circular polarization degree) of a state; equals
/// |a_plus|^2 - |a_minus|^2 for a normalized state.
double circular_degree(const PolarizationState& p);

struct ElectronBeam {
    double kinetic_energy_ev = 200e3;
    double transverse_coherence = 0.85e-6;  // m, 1/e^2 intensity radius
};

/// Relativistic speed for the given kinetic energy,
/// v = c * sqrt(1 - (m c^2 / (m c^2 + E))^2).
double derive_electron_velocity(const ElectronBeam& beam);

struct IncidentLight {
    double photon_energy_ev = 1.57;
    double field_amplitude = 8e7;          // V/m
    PolarizationState polarization{};
    double incidence_angle_delta = 4.5 * constants::pi / 180.0;  // rad
    double sample_tilt_alpha = 4.5 * constants::pi / 180.0;      // rad

    double angular_frequency() const {
        return photon_energy_ev * constants::ev_to_joule / constants::hbar;
    }
    double vacuum_wavelength() const {
        return 2.0 * constants::pi * constants::speed_of_light / angular_frequency();
    }
    double optical_period() const { return 2.0 * constants::pi / angular_frequency(); }
};

struct MaterialStack {
    Complex eps_metal{-29.0, 0.3};
    double eps_dielectric = 4.0;
    double spp_decay_length = 10e-6;  // m, amplitude decay; <= 0 disables

    /// Bound SPP exists when Re(eps_metal) < -eps_dielectric.
    bool supports_bound_mode() const { return eps_metal.real() < -eps_dielectric; }
};

/// SPP dispersion k = (w/c) sqrt(em*ed / (em+ed)), principal square root
/// branch with Re >= 0 (forward-propagating convention).
Complex derive_spp_wavevector(const IncidentLight& light, const MaterialStack& stack);

/// k_spp with the configured extra amplitude decay folded into Im(k):
/// Im(k_eff) = Im(k_spp) + 1/spp_decay_length.
Complex effective_spp_wavevector(const IncidentLight& light, const MaterialStack& stack);

}  // namespace chiralpinem::optics
