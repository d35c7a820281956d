#include "chiralpinem/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

#include "chiralpinem/constants.hpp"

namespace chiralpinem::fft {

namespace {

struct FftwBuffer {
    fftw_complex* p = nullptr;
    explicit FftwBuffer(std::size_t n) {
        p = fftw_alloc_complex(n);
        if (!p) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct FftwPlan {
    fftw_plan p = nullptr;
    FftwPlan(int ny, int nx, fftw_complex* in, fftw_complex* out, int sign) {
        p = fftw_plan_dft_2d(ny, nx, in, out, sign, FFTW_ESTIMATE);
        if (!p) throw std::runtime_error("fftw_plan_dft_2d failed");
    }
    ~FftwPlan() { fftw_destroy_plan(p); }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
};

// Centered layout <-> FFT layout; for even N the half-size shift is an
// involution, so the same permutation serves both directions.
inline int shifted(int i, int n) { return (i + n / 2) % n; }

}  // namespace

ComplexField zero_pad(const ComplexField& f, int factor) {
    if (factor < 1) throw std::invalid_argument("zero_pad: factor must be >= 1");
    if (factor == 1) return f;
    const Grid2D& g = f.grid;
    Grid2D big(g.nx * factor, g.ny * factor, g.extent_x * factor, g.extent_y * factor);
    ComplexField out(big);
    const int ox = (big.nx - g.nx) / 2;
    const int oy = (big.ny - g.ny) / 2;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            out.at(ix + ox, iy + oy) = f.at(ix, iy);
    return out;
}

ComplexField forward_centered(const ComplexField& f) {
    const Grid2D& g = f.grid;
    const std::size_t n = g.size();
    FftwBuffer in(n), out(n);
    FftwPlan plan(g.ny, g.nx, in.p, out.p, FFTW_FORWARD);

    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const Complex& v = f.at(ix, iy);
            fftw_complex& dst = in.p[static_cast<std::size_t>(shifted(iy, g.ny)) * g.nx +
                                     shifted(ix, g.nx)];
            dst[0] = v.real();
            dst[1] = v.imag();
        }
    fftw_execute(plan.p);

    const double dkx = 2.0 * constants::pi / (g.nx * g.dx());
    const double dky = 2.0 * constants::pi / (g.ny * g.dy());
    Grid2D kgrid(g.nx, g.ny, 0.5 * g.nx * dkx, 0.5 * g.ny * dky);
    ComplexField F(kgrid);
    const double area = g.pixel_area();
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const fftw_complex& src = out.p[static_cast<std::size_t>(shifted(iy, g.ny)) * g.nx +
                                            shifted(ix, g.nx)];
            F.at(ix, iy) = Complex(src[0], src[1]) * area;
        }
    return F;
}

RealField gaussian_blur(const RealField& map, double sigma) {
    if (!(sigma > 0.0)) return map;
    const Grid2D& g = map.grid;
    const std::size_t n = g.size();

    // On-grid normalized kernel, centered layout.
    std::vector<double> kernel(n);
    double ksum = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix);
            const double v = std::exp(-0.5 * (x * x + y * y) / (sigma * sigma));
            kernel[g.index(ix, iy)] = v;
            ksum += v;
        }
    }
    for (double& v : kernel) v /= ksum;

    FftwBuffer a(n), b(n);
    FftwPlan fwd(g.ny, g.nx, a.p, b.p, FFTW_FORWARD);
    FftwPlan bwd(g.ny, g.nx, a.p, b.p, FFTW_BACKWARD);

    std::vector<Complex> map_hat(n), ker_hat(n);
    auto transform = [&](const std::vector<double>& src, std::vector<Complex>& dst) {
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                fftw_complex& c = a.p[static_cast<std::size_t>(shifted(iy, g.ny)) * g.nx +
                                      shifted(ix, g.nx)];
                c[0] = src[g.index(ix, iy)];
                c[1] = 0.0;
            }
        fftw_execute(fwd.p);
        for (std::size_t i = 0; i < n; ++i) dst[i] = Complex(b.p[i][0], b.p[i][1]);
    };
    transform(map.values, map_hat);
    transform(kernel, ker_hat);

    for (std::size_t i = 0; i < n; ++i) {
        const Complex prod = map_hat[i] * ker_hat[i];
        a.p[i][0] = prod.real();
        a.p[i][1] = prod.imag();
    }
    fftw_execute(bwd.p);

    RealField out{};
    out.grid = g;
    out.values.resize(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const fftw_complex& c = b.p[static_cast<std::size_t>(shifted(iy, g.ny)) * g.nx +
                                        shifted(ix, g.nx)];
            out.at(ix, iy) = c[0] * scale;
        }
    return out;
}

}  // namespace chiralpinem::fft
