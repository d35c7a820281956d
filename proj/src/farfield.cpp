#include "chiralpinem/farfield.hpp"

#include <cmath>
#include <stdexcept>

#include "chiralpinem/errors.hpp"
#include "chiralpinem/fft.hpp"

namespace chiralpinem::farfield {

const ComplexField& FarFieldMap::psi_l(int l) const {
    for (std::size_t i = 0; i < l_values.size(); ++i)
        if (l_values[i] == l) return per_l[i];
    throw std::out_of_range("FarFieldMap::psi_l: order not retained");
}

RealField transmission_mask(const Grid2D& grid, const HoleGeometry& hole,
                            const DetectorModel& detector) {
    if (detector.aperture_radius_image_plane < 0.0 ||
        detector.film_intensity_transmissivity < 0.0 ||
        detector.momentum_broadening_sigma < 0.0)
        throw std::domain_error("DetectorModel: parameters must be >= 0");
    const double t_amp = std::sqrt(detector.film_intensity_transmissivity);
    RealField mask{};
    mask.grid = grid;
    mask.values.resize(grid.size());
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y(iy) - hole.center_y;
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x(ix) - hole.center_x;
            const double R = std::hypot(x, y);
            double v = 0.0;
            if (R <= detector.aperture_radius_image_plane)
                v = (R < hole.radius) ? 1.0 : t_amp;
            mask.values[grid.index(ix, iy)] = v;
        }
    }
    return mask;
}

namespace {

FarFieldMap transform_set(const std::vector<const std::vector<Complex>*>& fields,
                          const std::vector<int>& l_values, const Grid2D& grid,
                          const RealField& mask, const DetectorModel& detector,
                          const FarFieldOptions& options) {
    if (options.pad_factor < 1)
        throw std::invalid_argument("far_field: pad_factor must be >= 1");

    FarFieldMap out;
    out.l_values = l_values;

    ComplexField work(grid);
    bool first = true;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::vector<Complex>& src = *fields[i];
        for (std::size_t p = 0; p < src.size(); ++p)
            work.values[p] = src[p] * mask.values[p];
        ComplexField big = fft::zero_pad(work, options.pad_factor);
        ComplexField F = fft::forward_centered(big);
        if (first) {
            out.kgrid = F.grid;
            out.intensity_unbroadened.grid = F.grid;
            out.intensity_unbroadened.values.assign(F.grid.size(), 0.0);
            first = false;
        }
        for (std::size_t p = 0; p < F.values.size(); ++p)
            out.intensity_unbroadened.values[p] += std::norm(F.values[p]);
        if (options.keep_per_l) out.per_l.push_back(std::move(F));
    }
    out.intensity = fft::gaussian_blur(out.intensity_unbroadened,
                                       detector.momentum_broadening_sigma);
    return out;
}

}  // namespace

FarFieldMap far_field(const SidebandSet& sidebands, const DetectorModel& detector,
                      const FarFieldOptions& options) {
    const Grid2D& grid = sidebands.grid;
    const RealField mask = transmission_mask(grid, sidebands.hole, detector);
    std::vector<const std::vector<Complex>*> fields;
    std::vector<int> ls;
    for (int l = -sidebands.l_max; l <= sidebands.l_max; ++l) {
        fields.push_back(&sidebands.psi(l));
        ls.push_back(l);
    }
    return transform_set(fields, ls, grid, mask, detector, options);
}

FarFieldMap spiral_phase_plate_reference(int l, const HoleGeometry& geom,
                                         const IncidentWavefunction& psi_inc,
                                         const DetectorModel& detector,
                                         const FarFieldOptions& options) {
    const Grid2D& grid = psi_inc.psi.grid;
    const RealField mask = transmission_mask(grid, geom, detector);

    std::vector<Complex> ref(grid.size());
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y(iy) - geom.center_y;
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x(ix) - geom.center_x;
            const double R = std::hypot(x, y);
            Complex v = psi_inc.psi.at(ix, iy);
            if (R < geom.radius && l != 0) {
                if (R == 0.0) {
                    v = Complex(0.0, 0.0);  // vortex core, phase undefined
                } else {
                    const Complex e_phi = Complex(x, y) / R;
                    Complex pw(1.0, 0.0);
                    for (int q = 0; q < std::abs(l); ++q) pw *= e_phi;
                    v *= (l > 0) ? pw : std::conj(pw);
                }
            }
            ref[grid.index(ix, iy)] = v;
        }
    }
    std::vector<const std::vector<Complex>*> fields{&ref};
    return transform_set(fields, {l}, grid, mask, detector, options);
}

LineProfile line_profile(const FarFieldMap& map, ProfileAxis axis) {
    const Grid2D& g = map.kgrid;
    LineProfile out;
    if (axis == ProfileAxis::Horizontal) {
        const int iy = g.ny / 2;  // k_y = 0 row
        out.k.resize(g.nx);
        out.intensity.resize(g.nx);
        for (int ix = 0; ix < g.nx; ++ix) {
            out.k[ix] = g.x(ix);
            out.intensity[ix] = map.intensity.at(ix, iy);
        }
    } else {
        const int ix = g.nx / 2;  // k_x = 0 column
        out.k.resize(g.ny);
        out.intensity.resize(g.ny);
        for (int iy = 0; iy < g.ny; ++iy) {
            out.k[iy] = g.y(iy);
            out.intensity[iy] = map.intensity.at(ix, iy);
        }
    }
    return out;
}

}  // namespace chiralpinem::farfield
