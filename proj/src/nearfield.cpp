#include "chiralpinem/nearfield.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "chiralpinem/bessel.hpp"
#include "chiralpinem/errors.hpp"

namespace chiralpinem::nearfield {

static_assert(std::endian::native == std::endian::little,
              "beta file I/O assumes a little-endian host");

ComplexField InteractionField::as_complex_field() const {
    ComplexField f(grid);
    f.values = values;
    return f;
}

InteractionField synthesize_beta(const HoleGeometry& geom, const Grid2D& grid,
                                 const optics::IncidentLight& light,
                                 const optics::MaterialStack& stack,
                                 Complex A, Complex B) {
    if (!(geom.radius > 0.0)) throw std::domain_error("synthesize_beta: hole radius must be > 0");
    if (std::min(grid.extent_x, grid.extent_y) < 2.0 * geom.radius)
        throw std::invalid_argument("synthesize_beta: grid extent must be >= 2x hole radius");
    const PolarizationState& pol = light.polarization;
    if (!pol.is_normalized())
        throw std::domain_error("synthesize_beta: polarization state not normalized");

    const Complex k = optics::effective_spp_wavevector(light, stack);
    const double k_r = k.real();

    // Continuity factor: match |beta| across the rim along phi = 0,
    //   |C * s * J1(k_r a)| = |A + B s|,  s = a_plus + a_minus.
    // Falls back to channel-wise continuity (c = 1/|J1(k_r a)|) when the
    // phi = 0 condition is degenerate (s = 0 or B = 0).
    const Complex s = pol.a_plus + pol.a_minus;
    const double j1_rim = std::abs(bessel::j1(k_r * geom.radius));
    const double j1_guard = std::max(j1_rim, 1e-9);  // rim exactly on a J1 zero
    double c_factor;
    if (std::abs(B * s) > 1e-300)
        c_factor = std::abs(A + B * s) / (std::abs(B * s) * j1_guard);
    else
        c_factor = 1.0 / j1_guard;
    const Complex C = B * c_factor;

    InteractionField field;
    field.grid = grid;
    field.hole = geom;
    field.values.assign(grid.size(), Complex(0.0, 0.0));
    field.A = A;
    field.B = B;
    field.k_spp = k;

    std::vector<double> j1_scratch;
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y(iy) - geom.center_y;
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x(ix) - geom.center_x;
            const double R = std::hypot(x, y);
            Complex val;
            if (R == 0.0) {
                val = Complex(0.0, 0.0);  // J1(0) = 0; phase at the core fixed to 0
            } else {
                const Complex e_phi = Complex(x, y) / R;  // exp(i phi)
                const Complex chan = pol.a_plus * e_phi + pol.a_minus * std::conj(e_phi);
                if (R >= geom.radius) {
                    const Complex prop =
                        std::exp(Complex(0.0, 1.0) * k * (R - geom.radius)) *
                        std::sqrt(geom.radius / R);
                    val = A + B * chan * prop;
                } else {
                    bessel::j_array(k_r * R, 1, j1_scratch);
                    val = C * chan * j1_scratch[1];
                }
            }
            field.values[grid.index(ix, iy)] = val;
        }
    }
    return field;
}

InteractionField superpose_two_pulses(const InteractionField& field_1,
                                      const InteractionField& field_2,
                                      const PulsePair& pulse,
                                      const optics::IncidentLight& light) {
    require_same_grid(field_1.grid, field_2.grid, "superpose_two_pulses");

    if (!(pulse.envelope_fwhm > 0.0))
        throw std::domain_error("superpose_two_pulses: envelope_fwhm must be > 0");
    double w = 1.0;
    if (pulse.envelope == PulsePair::Envelope::Gaussian) {
        const double t = pulse.delay / pulse.envelope_fwhm;
        w = std::exp(-2.0 * std::log(2.0) * t * t);  // pulse cross-correlation
    }
    const Complex phase =
        w * std::exp(Complex(0.0, light.angular_frequency() * pulse.delay));

    InteractionField out = field_1;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] += phase * field_2.values[i];
    out.A = field_1.A + phase * field_2.A;
    out.B = field_1.B + phase * field_2.B;
    return out;
}

Preset preset_from_string(const std::string& name) {
    if (name == "holography") return Preset::Holography;
    if (name == "vortex_detection") return Preset::VortexDetection;
    throw ConfigError("scenario.preset: unknown preset '" + name + "'");
}

std::string to_string(Preset p) {
    return p == Preset::Holography ? "holography" : "vortex_detection";
}

Complex reference_amplitude(Preset preset, Complex B, double b_over_a) {
    if (preset == Preset::VortexDetection) return Complex(0.0, 0.0);
    if (!(b_over_a > 0.0))
        throw std::domain_error("reference_amplitude: b_over_a must be > 0");
    return B / b_over_a;
}

namespace {

constexpr std::size_t kHeaderSize = 64;
constexpr std::uint32_t kBetaVersion = 1;

}  // namespace

void write_beta_file(const std::string& path, const InteractionField& field) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_beta_file: cannot open " + path);

    char header[kHeaderSize] = {};
    std::memcpy(header, "BETA", 4);
    const std::uint32_t version = kBetaVersion;
    const std::uint32_t nx = static_cast<std::uint32_t>(field.grid.nx);
    const std::uint32_t ny = static_cast<std::uint32_t>(field.grid.ny);
    std::memcpy(header + 4, &version, 4);
    std::memcpy(header + 8, &nx, 4);
    std::memcpy(header + 12, &ny, 4);
    std::memcpy(header + 16, &field.grid.extent_x, 8);
    std::memcpy(header + 24, &field.grid.extent_y, 8);
    os.write(header, kHeaderSize);

    std::vector<double> row(2 * field.grid.nx);
    for (int iy = 0; iy < field.grid.ny; ++iy) {
        for (int ix = 0; ix < field.grid.nx; ++ix) {
            const Complex& v = field.values[field.grid.index(ix, iy)];
            row[2 * ix] = v.real();
            row[2 * ix + 1] = v.imag();
        }
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    if (!os) throw std::runtime_error("write_beta_file: write failed for " + path);
}

InteractionField read_beta_file(const std::string& path, const HoleGeometry& hole) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_beta_file: cannot open " + path);

    char header[kHeaderSize];
    is.read(header, kHeaderSize);
    if (!is || std::memcmp(header, "BETA", 4) != 0)
        throw std::runtime_error("read_beta_file: bad magic in " + path);
    std::uint32_t version, nx, ny;
    double extent_x, extent_y;
    std::memcpy(&version, header + 4, 4);
    std::memcpy(&nx, header + 8, 4);
    std::memcpy(&ny, header + 12, 4);
    std::memcpy(&extent_x, header + 16, 8);
    std::memcpy(&extent_y, header + 24, 8);
    if (version != kBetaVersion)
        throw std::runtime_error("read_beta_file: unsupported version in " + path);

    InteractionField field;
    field.grid = Grid2D(static_cast<int>(nx), static_cast<int>(ny), extent_x, extent_y);
    field.hole = hole;
    field.values.resize(field.grid.size());

    std::vector<double> row(2 * nx);
    for (std::uint32_t iy = 0; iy < ny; ++iy) {
        is.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(double)));
        if (!is) throw std::runtime_error("read_beta_file: truncated data in " + path);
        for (std::uint32_t ix = 0; ix < nx; ++ix)
            field.values[field.grid.index(static_cast<int>(ix), static_cast<int>(iy))] =
                Complex(row[2 * ix], row[2 * ix + 1]);
    }
    return field;
}

}  // namespace chiralpinem::nearfield
