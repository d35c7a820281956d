#pragma once

#include <vector>

#include "chiralpinem/grid.hpp"
#include "chiralpinem/nearfield.hpp"
#include "chiralpinem/optics.hpp"

namespace chiralpinem::pinem {

using nearfield::HoleGeometry;
using nearfield::InteractionField;

/// Incident electron wavefunction: Gaussian envelope with 1/e^2 intensity
/// radius equal to the beam transverse coherence, centered on the hole and
/// normalized so that sum |psi|^2 * pixel_area = 1 on the grid.
struct IncidentWavefunction {
    ComplexField psi;
    double coherence_radius = 0.0;  // m
};

IncidentWavefunction make_incident_wavefunction(const Grid2D& grid,
                                                const optics::ElectronBeam& beam,
                                                const HoleGeometry& hole);

/// Family of inelastically scattered sideband components psi_l for
/// l in [-l_max, l_max]; psi(0) is the zero-loss component.
struct SidebandSet {
    Grid2D grid;
    HoleGeometry hole;
    int l_max = 0;
    std::vector<std::vector<Complex>> fields;  // index l + l_max

    const std::vector<Complex>& psi(int l) const { return fields[l + l_max]; }
    std::vector<Complex>& psi(int l) { return fields[l + l_max]; }

    ComplexField psi_field(int l) const;

    /// sum over l and pixels of |psi_l|^2 * pixel_area; 1 minus this is the
    /// truncation defect.
    double total_norm() const;
};

/// Truncation order for this field: smallest L with
/// sum_{|l| > L} J_l(2 |beta|_max)^2 < tail. The default tail is stricter
/// than the 1e-9 unitarity budget so downstream consistency checks keep
/// margin.
int default_l_max(const InteractionField& beta, double tail = 2.5e-10);

/// psi_l(x, y) = psi_inc(x, y) * J_l(2|beta|) * exp(i l arg(-beta)).
/// Pixels with beta = 0 yield psi_0 = psi_inc and psi_l = 0 for l != 0.
SidebandSet build_sidebands(const IncidentWavefunction& psi_inc,
                            const InteractionField& beta, int l_max);

/// Which sidebands an energy-filtered image integrates. Default: every
/// l != 0 (full zero-loss depletion signal). max_abs_l = 0 means unbounded.
struct Passband {
    int min_abs_l = 1;
    int max_abs_l = 0;
};

/// I(x, y) = sum over passband of |psi_l|^2.
RealField energy_filtered_map(const SidebandSet& sidebands, const Passband& band = {});

/// Closed-form cross-check: I = |psi_inc|^2 (1 - J0(2|beta|)^2), equal to the
/// full-passband sideband sum up to the truncation defect.
RealField energy_filtered_closed_form(const IncidentWavefunction& psi_inc,
                                      const InteractionField& beta);

/// Line through the hole center at a fixed angle, sampled symmetrically.
struct LineCut {
    double angle = 0.0;        // rad, direction of increasing s
    double half_length = 0.0;  // m; 0 = use the grid's usable radius
    int n_samples = 0;         // 0 = one sample per pixel step
};

/// M(s, l) = |psi_l(x(s), y(s))|^2 along a cut through the hole center.
struct SpaceEnergyMap {
    std::vector<double> s;       // signed position along the cut (m)
    std::vector<int> l;          // sideband orders, ascending
    std::vector<double> values;  // row-major [s index][l index]

    double at(std::size_t is, std::size_t il) const { return values[is * l.size() + il]; }
};

SpaceEnergyMap space_energy_map(const SidebandSet& sidebands, const LineCut& cut);

}  // namespace chiralpinem::pinem
