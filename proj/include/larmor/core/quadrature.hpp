#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace larmor {

/// Resolution of the composite quadratures used for convolution integrals and actions.
struct QuadratureSpec {
    double panels_per_unit_time = 1e4;
    int min_panels = 2;

    int panels_for(double length) const {
        if (!(panels_per_unit_time > 0.0)) {
            throw std::invalid_argument("QuadratureSpec: panels_per_unit_time must be positive");
        }
        int n = static_cast<int>(std::ceil(std::abs(length) * panels_per_unit_time));
        n = std::max(n, std::max(min_panels, 2));
        if (n % 2 != 0) ++n;
        return n;
    }
};

/// Composite Simpson rule on [a, b] with an even number of panels.
///
/// Works for any value type closed under addition and scalar multiplication
/// (double, Eigen vectors, ...).
template <typename F>
auto simpson(F&& f, double a, double b, int panels) {
    if (panels < 2 || panels % 2 != 0) {
        throw std::invalid_argument("simpson: panel count must be even and >= 2");
    }
    using Value = std::decay_t<decltype(f(a))>;
    const double h = (b - a) / panels;
    Value sum = f(a);
    sum += f(b);
    for (int i = 1; i < panels; ++i) {
        const double w = (i % 2 == 1) ? 4.0 : 2.0;
        sum += w * f(a + i * h);
    }
    return Value((h / 3.0) * sum);
}

}  // namespace larmor
