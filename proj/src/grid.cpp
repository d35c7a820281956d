#include "chiralpinem/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "chiralpinem/errors.hpp"

namespace chiralpinem {

Grid2D::Grid2D(int nx_, int ny_, double extent_x_, double extent_y_)
    : nx(nx_), ny(ny_), extent_x(extent_x_), extent_y(extent_y_) {
    if (nx < 16 || ny < 16) throw std::invalid_argument("Grid2D: nx, ny must be >= 16");
    if (nx % 2 != 0 || ny % 2 != 0) throw std::invalid_argument("Grid2D: nx, ny must be even");
    if (!(extent_x > 0.0) || !(extent_y > 0.0))
        throw std::invalid_argument("Grid2D: extents must be positive");
}

double Grid2D::usable_radius() const {
    // One pixel margin on each side so bilinear stencils never leave the grid;
    // the -nx/2 row has no positive partner, hence the extra dx.
    const double rx = extent_x - 2.0 * dx();
    const double ry = extent_y - 2.0 * dy();
    return std::min(rx, ry);
}

namespace {

template <typename Field, typename T>
T bilinear(const Field& f, double x, double y) {
    const Grid2D& g = f.grid;
    const double fx = x / g.dx() + g.nx / 2;
    const double fy = y / g.dy() + g.ny / 2;
    const int ix = static_cast<int>(std::floor(fx));
    const int iy = static_cast<int>(std::floor(fy));
    if (ix < 0 || iy < 0 || ix + 1 >= g.nx || iy + 1 >= g.ny)
        throw std::domain_error("sample point outside grid");
    const double tx = fx - ix;
    const double ty = fy - iy;
    const T v00 = f.at(ix, iy);
    const T v10 = f.at(ix + 1, iy);
    const T v01 = f.at(ix, iy + 1);
    const T v11 = f.at(ix + 1, iy + 1);
    return v00 * ((1.0 - tx) * (1.0 - ty)) + v10 * (tx * (1.0 - ty)) +
           v01 * ((1.0 - tx) * ty) + v11 * (tx * ty);
}

}  // namespace

Complex ComplexField::sample(double x, double y) const {
    return bilinear<ComplexField, Complex>(*this, x, y);
}

double ComplexField::max_abs() const {
    double m = 0.0;
    for (const Complex& v : values) m = std::max(m, std::abs(v));
    return m;
}

double RealField::sample(double x, double y) const {
    return bilinear<RealField, double>(*this, x, y);
}

double RealField::max_value() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::max(m, v);
    return m;
}

double RealField::sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
    if (!a.same_as(b)) throw ShapeError(std::string(what) + ": grid mismatch");
}

}  // namespace chiralpinem
