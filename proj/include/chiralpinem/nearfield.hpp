#pragma once

#include <string>

#include "chiralpinem/grid.hpp"
#include "chiralpinem/optics.hpp"

namespace chiralpinem::nearfield {

using optics::PolarizationState;

struct HoleGeometry {
    double radius = 0.4e-6;  // m
    double center_x = 0.0;
    double center_y = 0.0;
};

/// Complex electron-plasmon interaction field beta(x, y) on a grid, with the
/// amplitudes it was synthesized from. A is the semi-infinite light (reference)
/// term, B the SPP launch amplitude, k_spp the effective complex wavenumber
/// (propagation loss included in the imaginary part).
struct InteractionField {
    Grid2D grid;
    HoleGeometry hole;
    std::vector<Complex> values;
    Complex A{0.0, 0.0};
    Complex B{0.0, 0.0};
    Complex k_spp{0.0, 0.0};

    Complex& at(int ix, int iy) { return values[grid.index(ix, iy)]; }
    const Complex& at(int ix, int iy) const { return values[grid.index(ix, iy)]; }
    ComplexField as_complex_field() const;
};

/// Two phase-locked pulses with independent polarizations.
struct PulsePair {
    PolarizationState pol_1{};
    PolarizationState pol_2{};
    double rel_amplitude_2 = 1.0;
    double delay = 0.0;            // s
    double envelope_fwhm = 55e-15; // s, intensity FWHM
    // w(dt) = 1 is the quasi-monochromatic default; the Gaussian mode
    // attenuates the second term by the pulse cross-correlation envelope.
    enum class Envelope { Phasor, Gaussian };
    Envelope envelope = Envelope::Phasor;
};

/// Analytic stand-in for the FDTD near field of a circular nanohole:
///   outside (R >= radius):
///     beta = A + B * sum_sigma a_sigma exp(i k_spp (R - radius)) sqrt(radius/R) exp(i sigma phi)
///   inside (R < radius):
///     beta = C * sum_sigma a_sigma J1(Re(k_spp) R) exp(i sigma phi)
/// with C = B * c, c real, chosen so |beta| is continuous at the rim along
/// phi = 0. beta(center) = 0 exactly (J1(0) = 0).
InteractionField synthesize_beta(const HoleGeometry& geom, const Grid2D& grid,
                                 const optics::IncidentLight& light,
                                 const optics::MaterialStack& stack,
                                 Complex A, Complex B);

/// beta_total = beta_1 + w(delay) * exp(i omega delay) * beta_2.
/// field_2 must share the grid of field_1 and is expected to have been
/// synthesized with pol_2 and rel_amplitude_2 already applied.
InteractionField superpose_two_pulses(const InteractionField& field_1,
                                      const InteractionField& field_2,
                                      const PulsePair& pulse,
                                      const optics::IncidentLight& light);

enum class Preset { Holography, VortexDetection };

Preset preset_from_string(const std::string& name);
std::string to_string(Preset p);

/// Reference (light-field) amplitude for a preset: vortex_detection gives
/// A = 0, holography gives A = B / b_over_a.
Complex reference_amplitude(Preset preset, Complex B, double b_over_a = 1.0);

/// Binary beta grid file: 64-byte header (magic "BETA", u32 version, u32 nx,
/// u32 ny, f64 extent_x, f64 extent_y in meters, zero padding) followed by
/// row-major interleaved (re, im) f64 pairs, little-endian.
void write_beta_file(const std::string& path, const InteractionField& field);
InteractionField read_beta_file(const std::string& path, const HoleGeometry& hole);

}  // namespace chiralpinem::nearfield
