#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "larmor/core/types.hpp"

namespace larmor {

struct ConstantDrive {
    Vec3 force = Vec3::Zero();
};

/// One term amplitude * cos(angular_frequency * t + phase).
struct SinusoidTerm {
    Vec3 amplitude = Vec3::Zero();
    double angular_frequency = 0.0;
    double phase = 0.0;
};

struct SinusoidBank {
    std::vector<SinusoidTerm> terms;
};

/// Tabulated force with linear interpolation; evaluable only inside [front, back].
class SampledDrive {
public:
    SampledDrive(std::vector<double> times, std::vector<Vec3> values)
        : times_(std::move(times)), values_(std::move(values)) {
        require(times_.size() >= 2, "SampledDrive: need at least two samples");
        require(times_.size() == values_.size(), "SampledDrive: times and values differ in length");
        for (std::size_t i = 1; i < times_.size(); ++i) {
            require(times_[i] > times_[i - 1], "SampledDrive: sample times must be strictly increasing");
        }
    }

    double front() const { return times_.front(); }
    double back() const { return times_.back(); }

    Vec3 operator()(double t) const {
        if (t < front() || t > back()) {
            throw std::out_of_range("SampledDrive: time " + std::to_string(t) + " outside sampled window");
        }
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        std::size_t hi = static_cast<std::size_t>(it - times_.begin());
        if (hi >= times_.size()) hi = times_.size() - 1;
        const std::size_t lo = hi - 1;
        const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
        return (1.0 - w) * values_[lo] + w * values_[hi];
    }

private:
    std::vector<double> times_;
    std::vector<Vec3> values_;
};

/// Spatially homogeneous force k(t) = q E(t), the sum of any number of parts.
class Drive {
public:
    using Part = std::variant<ConstantDrive, SinusoidBank, SampledDrive>;

    Drive() = default;

    static Drive none() { return Drive(); }
    static Drive constant(const Vec3& force) { return Drive(Part(ConstantDrive{force})); }
    static Drive sinusoids(std::vector<SinusoidTerm> terms) {
        return Drive(Part(SinusoidBank{std::move(terms)}));
    }
    static Drive sampled(SampledDrive table) { return Drive(Part(std::move(table))); }

    Vec3 operator()(double t) const {
        Vec3 k = Vec3::Zero();
        for (const auto& part : parts_) k += evaluate(part, t);
        return k;
    }

    /// Interval on which every part is evaluable.
    std::pair<double, double> window() const {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const auto& part : parts_) {
            if (const auto* s = std::get_if<SampledDrive>(&part)) {
                lo = std::max(lo, s->front());
                hi = std::min(hi, s->back());
            }
        }
        return {lo, hi};
    }

    bool covers(double t0, double t1) const {
        const auto [lo, hi] = window();
        return lo <= std::min(t0, t1) && std::max(t0, t1) <= hi;
    }

    void require_covers(double t0, double t1) const {
        if (!covers(t0, t1)) {
            throw std::out_of_range("Drive: not evaluable on [" + std::to_string(t0) + ", " +
                                    std::to_string(t1) + "]");
        }
    }

    /// True when the drive is identically zero by construction.
    bool is_zero() const {
        for (const auto& part : parts_) {
            if (const auto* c = std::get_if<ConstantDrive>(&part)) {
                if (!c->force.isZero(0.0)) return false;
            } else if (const auto* b = std::get_if<SinusoidBank>(&part)) {
                for (const auto& term : b->terms) {
                    if (!term.amplitude.isZero(0.0)) return false;
                }
            } else {
                return false;
            }
        }
        return true;
    }

    /// Largest angular frequency present; sampled tables report their Nyquist rate.
    double max_angular_frequency() const {
        double w = 0.0;
        for (const auto& part : parts_) {
            if (const auto* b = std::get_if<SinusoidBank>(&part)) {
                for (const auto& term : b->terms) w = std::max(w, std::abs(term.angular_frequency));
            }
        }
        return w;
    }

    Drive operator+(const Drive& other) const {
        Drive sum = *this;
        sum.parts_.insert(sum.parts_.end(), other.parts_.begin(), other.parts_.end());
        return sum;
    }

    Drive scaled(double factor) const {
        Drive out;
        for (const auto& part : parts_) {
            if (const auto* c = std::get_if<ConstantDrive>(&part)) {
                out.parts_.emplace_back(ConstantDrive{factor * c->force});
            } else if (const auto* b = std::get_if<SinusoidBank>(&part)) {
                SinusoidBank scaled_bank = *b;
                for (auto& term : scaled_bank.terms) term.amplitude *= factor;
                out.parts_.emplace_back(std::move(scaled_bank));
            } else {
                throw std::invalid_argument("Drive::scaled: sampled parts cannot be rescaled");
            }
        }
        return out;
    }

    const std::vector<Part>& parts() const { return parts_; }

private:
    explicit Drive(Part part) { parts_.push_back(std::move(part)); }

    static Vec3 evaluate(const Part& part, double t) {
        return std::visit(
            [t](const auto& p) -> Vec3 {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, ConstantDrive>) {
                    return p.force;
                } else if constexpr (std::is_same_v<T, SinusoidBank>) {
                    Vec3 k = Vec3::Zero();
                    for (const auto& term : p.terms) {
                        k += term.amplitude * std::cos(term.angular_frequency * t + term.phase);
                    }
                    return k;
                } else {
                    return p(t);
                }
            },
            part);
    }

    std::vector<Part> parts_;
};

/// Force q R_z(rate t) E from a static field E seen in a frame rotating at `rate`.
inline Drive rotating_force(double charge, const Vec3& field, double rate) {
    const double e1 = charge * field.x();
    const double e2 = charge * field.y();
    std::vector<SinusoidTerm> terms;
    terms.push_back({Vec3(e1, e2, 0.0), rate, 0.0});
    terms.push_back({Vec3(e2, -e1, 0.0), rate, kPi / 2.0});
    terms.push_back({Vec3(0.0, 0.0, charge * field.z()), 0.0, 0.0});
    return Drive::sinusoids(std::move(terms));
}

}  // namespace larmor
