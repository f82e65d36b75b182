#pragma once

#include "larmor/classical/canonical_map.hpp"
#include "larmor/classical/hamiltonians.hpp"
#include "larmor/quantum/spectral_maps.hpp"

namespace larmor {

/// Quantum rotation into the lab frame: psi(t, x) = phi(t, R(angle) x) on the planar grid.
inline WaveFunction unitary_qt1_angle(SpectralEngine& engine, const WaveFunction& phi, double angle,
                                      const SupportPolicy& policy = {}) {
    require(phi.grid().dims() == 2, "unitary_qt1: needs a planar (2D) grid");
    return spectral_rotate(engine, phi, angle, policy);
}

/// Rotation angle w t with w the oscillator (Larmor) frequency, i.e. positive q B3.
inline WaveFunction unitary_qt1(SpectralEngine& engine, const WaveFunction& phi, double t, const OscParams& params,
                                const SupportPolicy& policy = {}) {
    return unitary_qt1_angle(engine, phi, params.omega() * t, policy);
}

/// Signed Larmor angle q B3 t / 2mc taken from the field.
inline WaveFunction unitary_qt1(SpectralEngine& engine, const WaveFunction& phi, double t, const StaticField& field,
                                const SupportPolicy& policy = {}) {
    require(field.is_axial(), "unitary_qt1: magnetic field must be along z");
    return unitary_qt1_angle(engine, phi, field.larmor_rate() * t, policy);
}

/// Quantum shift to the moving origin:
///   phi(t, Q) = exp(i (f(t, Q) + A(t)) / hbar) varphi(t, Q - Q_nh(t)), f = <Q - Q_nh, P_nh>.
///
/// f depends on Q and is applied to the amplitudes; A is appended to the ledger as
/// "action". Only the grid's axes (x, or x and y) are used; the axial part of the
/// moving origin is left to the caller.
inline WaveFunction unitary_qt2(SpectralEngine& engine, const WaveFunction& varphi, double t, const CanonicalMap& ct,
                                const SupportPolicy& policy = {}) {
    const Grid& g = varphi.grid();
    const Vec6 origin = ct.moving_origin(t);
    const Vec3 action = ct.phase_by_axis(t);
    const double hbar = varphi.hbar();
    const Eigen::Vector2d q_nh(origin(0), g.dims() == 2 ? origin(2) : 0.0);
    const Eigen::Vector2d p_nh(origin(1), g.dims() == 2 ? origin(3) : 0.0);
    const double a = g.dims() == 2 ? action(0) + action(1) : action(0);

    WaveFunction shifted = spectral_shift(engine, varphi, q_nh, policy);
    if (p_nh.x() != 0.0 || p_nh.y() != 0.0) {
        Eigen::VectorXcd amp = shifted.amplitudes();
        const int n = g.points();
        if (g.dims() == 1) {
            for (int i = 0; i < n; ++i) amp(i) *= std::polar(1.0, (g.coordinate(i) - q_nh.x()) * p_nh.x() / hbar);
        } else {
            for (int ix = 0; ix < n; ++ix) {
                for (int iy = 0; iy < n; ++iy) {
                    const double f = (g.coordinate(ix) - q_nh.x()) * p_nh.x() + (g.coordinate(iy) - q_nh.y()) * p_nh.y();
                    amp(g.index(ix, iy)) *= std::polar(1.0, f / hbar);
                }
            }
        }
        shifted = shifted.with_amplitudes(std::move(amp));
    }
    return shifted.with_phase("action", a / hbar);
}

}  // namespace larmor
