#pragma once

#include <cmath>
#include <vector>

#include "larmor/core/types.hpp"

namespace larmor {

/// Physicists' Hermite polynomial by H0 = 1, H1 = 2x, H_{n+1} = 2x H_n - 2n H_{n-1}.
inline double hermite(int n, double x) {
    require(n >= 0, "hermite: degree must be non-negative");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Normalized Hermite-function polynomial parts p_0..p_nmax at u, with
/// psi_n(u) = p_n(u) exp(-u^2/2) orthonormal on the real line.
inline std::vector<double> hermite_function_polys(int nmax, double u) {
    std::vector<double> p(static_cast<std::size_t>(nmax) + 1);
    p[0] = std::pow(kPi, -0.25);
    if (nmax >= 1) p[1] = std::sqrt(2.0) * u * p[0];
    for (int n = 1; n < nmax; ++n) {
        p[n + 1] = std::sqrt(2.0 / (n + 1)) * u * p[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * p[n - 1];
    }
    return p;
}

/// Oscillator inverse length alpha = sqrt(m w / hbar).
inline double oscillator_alpha(const OscParams& params, double hbar) {
    require(params.omega() > 0.0, "oscillator eigenstates need a positive frequency");
    require(std::isfinite(hbar) && hbar > 0.0, "hbar must be positive");
    return std::sqrt(params.mass() * params.omega() / hbar);
}

/// Normalized oscillator eigenfunction sqrt(alpha / (sqrt(pi) 2^n n!)) H_n(alpha x) exp(-alpha^2 x^2 / 2).
///
/// Evaluated through the normalized recurrence, which stays finite for large n.
inline double eigenfunction(int n, const OscParams& params, double hbar, double x) {
    require(n >= 0, "eigenfunction: level must be non-negative");
    const double alpha = oscillator_alpha(params, hbar);
    const double u = alpha * x;
    return std::sqrt(alpha) * hermite_function_polys(n, u)[static_cast<std::size_t>(n)] * std::exp(-0.5 * u * u);
}

/// Planar levels n1, n2 and the axial wavenumber k (momentum / hbar).
struct EigenLabel {
    int n1 = 0;
    int n2 = 0;
    double k = 0.0;

    EigenLabel(int a, int b, double wavenumber = 0.0) : n1(a), n2(b), k(wavenumber) {
        require(a >= 0 && b >= 0, "EigenLabel: levels must be non-negative");
        require(std::isfinite(wavenumber), "EigenLabel: wavenumber must be finite");
    }
};

/// E = hbar w (n1 + 1/2) + hbar w (n2 + 1/2) + hbar^2 k^2 / 2m.
inline double energy(const EigenLabel& label, const OscParams& params, double hbar) {
    const double w = params.omega();
    return hbar * w * (label.n1 + 0.5) + hbar * w * (label.n2 + 0.5) +
           hbar * hbar * label.k * label.k / (2.0 * params.mass());
}

}  // namespace larmor
