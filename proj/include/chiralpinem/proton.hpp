#pragma once

#include <string>
#include <vector>

namespace chiralpinem::proton {

/// Internal charge density model. The exponential profile is the standard
/// dipole-form-factor density exp(-r/a) with a = rms/sqrt(12); the Gaussian
/// alternative uses sigma = rms/sqrt(3). Total charge +e either way.
struct ProtonModel {
    double rms_charge_radius = 0.84e-15;  // m
    enum class Profile { Exponential, Gaussian };
    Profile profile = Profile::Exponential;
};

ProtonModel::Profile profile_from_string(const std::string& name);
std::string to_string(ProtonModel::Profile p);

/// Lowest-order Laguerre-Gauss ring, |psi(R)|^2 ~ R^(2|l|) exp(-2 R^2 / w^2),
/// unit-normalized in 2D; probability current purely azimuthal,
/// J_phi = (hbar l / (m_p R)) |psi|^2.
struct OAMWavefunction {
    int l = 1;
    double waist = 0.0;  // m
};

/// Direct 3D grid quadrature: cubic n^3 grid, transverse half-width
/// extent_waists * waist, current uniform along z (periodic, so the slab
/// length cancels exactly). Convergence is checked against the same
/// computation at n/2.
struct QuadratureSpec {
    int n = 256;
    double extent_waists = 4.0;
    double convergence_tol = 1e-3;
};

struct MomentResult {
    double mu_over_mu_n = 0.0;
    double convergence_defect = 0.0;  // |mu(n) - mu(n/2)| / max |mu|
    int n = 0;
};

/// mu_z = (1/2) integral [r x j]_z d^3r with j = rho_p (*) J_prob, evaluated
/// by FFT-based 3D convolution (the charge density enters through its
/// analytic form factor). Returned in units of the nuclear magneton.
/// Throws ResolutionError when the convergence check fails.
MomentResult magnetic_moment(const ProtonModel& model, const OAMWavefunction& wf,
                             const QuadratureSpec& quad);

struct SweepPoint {
    double waist = 0.0;  // m
    double mu_over_mu_n = 0.0;
    double convergence_defect = 0.0;
};

/// mu_z(w) over an ascending list of waists at fixed l.
std::vector<SweepPoint> moment_vs_waist_sweep(const ProtonModel& model, int l,
                                              const std::vector<double>& waists,
                                              const QuadratureSpec& quad);

}  // namespace chiralpinem::proton
