#include "chiralpinem/optics.hpp"

#include <cmath>
#include <stdexcept>

#include "chiralpinem/errors.hpp"

namespace chiralpinem::optics {

namespace {
constexpr double inv_sqrt2 = 0.7071067811865475244;
}

PolarizationState PolarizationState::circular(int sigma) {
    if (sigma == 1) return PolarizationState{Complex(1.0, 0.0), Complex(0.0, 0.0)};
    if (sigma == -1) return PolarizationState{Complex(0.0, 0.0), Complex(1.0, 0.0)};
    throw std::domain_error("PolarizationState::circular: sigma must be +1 or -1");
}

PolarizationState PolarizationState::linear_x() {
    return PolarizationState{Complex(inv_sqrt2, 0.0), Complex(inv_sqrt2, 0.0)};
}

PolarizationState PolarizationState::linear_y() {
    // (E_x, E_y) = (0, 1): a_pm = -/+ i / sqrt(2)
    return PolarizationState{Complex(0.0, -inv_sqrt2), Complex(0.0, inv_sqrt2)};
}

PolarizationState jones_to_circular(Complex jones_x, Complex jones_y) {
    if (jones_x == Complex(0.0, 0.0) && jones_y == Complex(0.0, 0.0))
        throw std::domain_error("jones_to_circular: zero Jones vector");
    const Complex i(0.0, 1.0);
    Complex ap = (jones_x - i * jones_y) * inv_sqrt2;
    Complex am = (jones_x + i * jones_y) * inv_sqrt2;
    const double n = std::sqrt(std::norm(ap) + std::norm(am));
    return PolarizationState{ap / n, am / n};
}

double circular_degree(const PolarizationState& p) {
    const double n = p.norm_sq();
    return (std::norm(p.a_plus) - std::norm(p.a_minus)) / n;
}

double derive_electron_velocity(const ElectronBeam& beam) {
    if (!(beam.kinetic_energy_ev > 0.0))
        throw std::domain_error("derive_electron_velocity: kinetic energy must be > 0");
    const double mc2 = constants::electron_rest_energy_ev;
    const double r = mc2 / (mc2 + beam.kinetic_energy_ev);
    return constants::speed_of_light * std::sqrt(1.0 - r * r);
}

Complex derive_spp_wavevector(const IncidentLight& light, const MaterialStack& stack) {
    const Complex em = stack.eps_metal;
    const double ed = stack.eps_dielectric;
    const Complex denom = em + ed;
    if (std::abs(denom) < 1e-12 * (std::abs(em) + std::abs(ed)))
        throw PoleError("derive_spp_wavevector: eps_metal + eps_dielectric = 0");
    if (!stack.supports_bound_mode())
        throw std::domain_error(
            "derive_spp_wavevector: no bound SPP, requires Re(eps_metal) < -eps_dielectric");
    const double k0 = light.angular_frequency() / constants::speed_of_light;
    Complex k = k0 * std::sqrt(em * ed / denom);
    if (k.real() < 0.0) k = -k;  // principal branch, forward-propagating
    return k;
}

Complex effective_spp_wavevector(const IncidentLight& light, const MaterialStack& stack) {
    Complex k = derive_spp_wavevector(light, stack);
    if (stack.spp_decay_length > 0.0)
        k += Complex(0.0, 1.0 / stack.spp_decay_length);
    return k;
}

}  // namespace chiralpinem::optics
