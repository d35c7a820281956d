#pragma once

#include <vector>

#include "chiralpinem/grid.hpp"
#include "chiralpinem/pinem.hpp"

namespace chiralpinem::farfield {

using nearfield::HoleGeometry;
using pinem::IncidentWavefunction;
using pinem::SidebandSet;

struct DetectorModel {
    double momentum_broadening_sigma = 0.35e6;      // 1/m; 0 disables broadening
    double aperture_radius_image_plane = 7.5e-6;    // m
    double film_intensity_transmissivity = 0.013;   // dimensionless
};

struct FarFieldOptions {
    int pad_factor = 2;       // zero-padding before the transform
    bool keep_per_l = false;  // retain the per-order complex momentum fields
};

/// Momentum-space intensity I_F(k_x, k_y) with calibrated axes
/// (k = 2 pi / distance). When requested, the per-order fields Psi_l are
/// retained alongside.
struct FarFieldMap {
    Grid2D kgrid;
    RealField intensity;            // broadened total
    RealField intensity_unbroadened;
    std::vector<int> l_values;
    std::vector<ComplexField> per_l;  // empty unless keep_per_l

    const ComplexField& psi_l(int l) const;
};

/// Real-space amplitude transmission applied before the transform: 1 inside
/// the hole, sqrt(film transmissivity) on the film within the aperture disc,
/// 0 beyond the aperture.
RealField transmission_mask(const Grid2D& grid, const HoleGeometry& hole,
                            const DetectorModel& detector);

/// Psi_l = centered DFT of (psi_l * mask) after zero-padding;
/// I_F = sum_l |Psi_l|^2, then convolved with an isotropic Gaussian of width
/// momentum_broadening_sigma.
FarFieldMap far_field(const SidebandSet& sidebands, const DetectorModel& detector,
                      const FarFieldOptions& options = {});

/// SI-style reference: far field of psi_inc passed through a spiral phase
/// plate of order l confined to the hole (film + aperture handled as above).
FarFieldMap spiral_phase_plate_reference(int l, const HoleGeometry& geom,
                                         const IncidentWavefunction& psi_inc,
                                         const DetectorModel& detector,
                                         const FarFieldOptions& options = {});

enum class ProfileAxis { Horizontal, Vertical };

struct LineProfile {
    std::vector<double> k;          // 1/m, along the axis through k = 0
    std::vector<double> intensity;
};

LineProfile line_profile(const FarFieldMap& map, ProfileAxis axis);

}  // namespace chiralpinem::farfield
