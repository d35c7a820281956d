#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chiralpinem {

using Complex = std::complex<double>;

/// Regular 2D grid centered on the hole. Pixel (ix, iy) sits at
/// x = (ix - nx/2) * dx, y = (iy - ny/2) * dy, so index (nx/2, ny/2) is
/// exactly the hole center and the layout is FFT-aligned. extent_x/extent_y
/// are physical half-widths: x spans [-extent_x, extent_x).
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double extent_x = 0.0;  // m
    double extent_y = 0.0;  // m

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double extent_x_, double extent_y_);

    double dx() const { return 2.0 * extent_x / nx; }
    double dy() const { return 2.0 * extent_y / ny; }
    double pixel_area() const { return dx() * dy(); }
    double x(int ix) const { return (static_cast<double>(ix) - nx / 2) * dx(); }
    double y(int iy) const { return (static_cast<double>(iy) - ny / 2) * dy(); }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx + ix; }

    // Largest radius fully contained in the grid (interpolation stays in bounds).
    double usable_radius() const;

    bool same_as(const Grid2D& o) const {
        return nx == o.nx && ny == o.ny && extent_x == o.extent_x && extent_y == o.extent_y;
    }
};

/// Complex scalar field sampled on a Grid2D, row-major (y rows, x columns).
struct ComplexField {
    Grid2D grid;
    std::vector<Complex> values;

    ComplexField() = default;
    explicit ComplexField(const Grid2D& g) : grid(g), values(g.size(), Complex(0.0, 0.0)) {}

    Complex& at(int ix, int iy) { return values[grid.index(ix, iy)]; }
    const Complex& at(int ix, int iy) const { return values[grid.index(ix, iy)]; }

    /// Bilinear interpolation at a physical point; (x, y) must lie inside the
    /// pixel-center hull of the grid.
    Complex sample(double x, double y) const;

    double max_abs() const;
};

/// Real scalar field on a Grid2D, same layout as ComplexField.
struct RealField {
    Grid2D grid;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(const Grid2D& g) : grid(g), values(g.size(), 0.0) {}

    double& at(int ix, int iy) { return values[grid.index(ix, iy)]; }
    const double& at(int ix, int iy) const { return values[grid.index(ix, iy)]; }

    double sample(double x, double y) const;
    double max_value() const;
    double sum() const;
};

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

}  // namespace chiralpinem
