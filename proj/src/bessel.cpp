#include "chiralpinem/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace chiralpinem::bessel {

namespace {

// Start order for the downward recurrence: high enough above both the
// requested order and the turning point l ~ x that J_start(x) < 1e-18,
// which bounds the seed contamination and the normalization-tail error.
int start_order(double x, int nmax) {
    const int from_x =
        static_cast<int>(std::ceil(1.1 * x)) + 26 + static_cast<int>(3.2 * std::sqrt(x));
    return std::max(from_x, nmax + 12);
}

}  // namespace

void j_array(double x, int nmax, std::vector<double>& out) {
    if (x < 0.0) throw std::domain_error("bessel::j_array: x must be >= 0");
    if (nmax < 0) throw std::domain_error("bessel::j_array: nmax must be >= 0");
    out.assign(nmax + 1, 0.0);

    if (x == 0.0) {
        out[0] = 1.0;
        return;
    }
    if (x < 1e-10) {
        // Leading series terms; higher orders underflow the normalization anyway.
        out[0] = 1.0 - 0.25 * x * x;
        if (nmax >= 1) out[1] = 0.5 * x;
        if (nmax >= 2) out[2] = 0.125 * x * x;
        return;
    }

    const int m_start = start_order(x, nmax);
    double jp = 0.0;       // J_{k+1}
    double jc = 1e-300;    // J_k seed
    double norm = 0.0;     // accumulates J0 + 2*sum J_{2k}
    const double inv_x = 1.0 / x;

    for (int k = m_start; k >= 1; --k) {
        double jm = 2.0 * k * inv_x * jc - jp;  // J_{k-1}
        jp = jc;
        jc = jm;
        if (k - 1 <= nmax) out[k - 1] = jc;
        if (k - 1 >= 1 && (k - 1) % 2 == 0) norm += 2.0 * jc;
        if (std::abs(jc) > 1e250) {
            // Rescale everything accumulated so far to avoid overflow.
            const double s = 1e-250;
            jc *= s;
            jp *= s;
            norm *= s;
            for (double& v : out) v *= s;
        }
    }
    norm += jc;  // J_0 term

    const double inv_norm = 1.0 / norm;
    for (double& v : out) v *= inv_norm;
}

double j0(double x) {
    std::vector<double> tmp;
    j_array(std::abs(x), 0, tmp);
    return tmp[0];
}

double j1(double x) {
    std::vector<double> tmp;
    const double ax = std::abs(x);
    j_array(ax, 1, tmp);
    return x < 0.0 ? -tmp[1] : tmp[1];
}

double jn(int n, double x) {
    const int an = std::abs(n);
    std::vector<double> tmp;
    double sign = 1.0;
    double ax = x;
    if (x < 0.0) {
        ax = -x;
        if (an % 2 != 0) sign = -sign;  // J_n(-x) = (-1)^n J_n(x)
    }
    j_array(ax, an, tmp);
    if (n < 0 && an % 2 != 0) sign = -sign;  // J_{-n} = (-1)^n J_n
    return sign * tmp[an];
}

int truncation_order(double x, double tail, int l_min) {
    if (x < 0.0) throw std::domain_error("bessel::truncation_order: x must be >= 0");
    const int lo = std::max(1, l_min);
    if (x == 0.0) return lo;
    const int cap = static_cast<int>(std::ceil(x)) + 60;
    std::vector<double> j;
    j_array(x, std::max(lo, cap), j);
    double sum = j[0] * j[0];
    int l = 0;
    while (true) {
        ++l;
        if (l >= static_cast<int>(j.size())) break;
        sum += 2.0 * j[l] * j[l];
        if (l >= lo && 1.0 - sum < tail) return l;
    }
    return static_cast<int>(j.size()) - 1;
}

}  // namespace chiralpinem::bessel
