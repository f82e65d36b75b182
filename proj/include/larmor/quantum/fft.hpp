#pragma once

#include <algorithm>
#include <complex>
#include <mutex>

#include <fftw3.h>

#include "larmor/quantum/grid.hpp"

namespace larmor {

namespace detail {

// FFTW's planner is not thread-safe; plan execution is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace detail

/// FFTW plans for one grid: the full transform and batched transforms along each axis.
///
/// Plans use FFTW_ESTIMATE so results do not depend on timing measurements.
/// Backward transforms are normalized. One engine must not be used from two threads at once.
class SpectralEngine {
public:
    explicit SpectralEngine(const Grid& grid) : grid_(grid), size_(grid.size()) {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(size_)));
        const int n = grid.points();
        if (grid.dims() == 1) {
            full_[0] = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
            full_[1] = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        } else {
            full_[0] = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
            full_[1] = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
            for (int s = 0; s < 2; ++s) {
                const int sign = s == 0 ? FFTW_FORWARD : FFTW_BACKWARD;
                // x is the slow index: stride n between samples, neighbouring transforms 1 apart.
                axis_[0][s] = fftw_plan_many_dft(1, &n, n, buf_, nullptr, n, 1, buf_, nullptr, n, 1, sign,
                                                 FFTW_ESTIMATE);
                axis_[1][s] = fftw_plan_many_dft(1, &n, n, buf_, nullptr, 1, n, buf_, nullptr, 1, n, sign,
                                                 FFTW_ESTIMATE);
            }
        }
    }

    ~SpectralEngine() {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        for (auto& p : full_) {
            if (p) fftw_destroy_plan(p);
        }
        for (auto& a : axis_) {
            for (auto& p : a) {
                if (p) fftw_destroy_plan(p);
            }
        }
        fftw_free(buf_);
    }

    SpectralEngine(const SpectralEngine&) = delete;
    SpectralEngine& operator=(const SpectralEngine&) = delete;

    const Grid& grid() const { return grid_; }

    void forward(Eigen::VectorXcd& data) { run(full_[0], data, 1.0); }
    void backward(Eigen::VectorXcd& data) { run(full_[1], data, 1.0 / static_cast<double>(size_)); }

    /// Transform along one axis only (0 = x, 1 = y). In one dimension axis 0 is the full transform.
    void forward_axis(Eigen::VectorXcd& data, int axis) {
        if (grid_.dims() == 1) return forward(data);
        run(axis_[axis][0], data, 1.0);
    }
    void backward_axis(Eigen::VectorXcd& data, int axis) {
        if (grid_.dims() == 1) return backward(data);
        run(axis_[axis][1], data, 1.0 / grid_.points());
    }

private:
    void run(fftw_plan plan, Eigen::VectorXcd& data, double scale) {
        require(data.size() == size_, "SpectralEngine: data size does not match the grid");
        auto* in = reinterpret_cast<fftw_complex*>(data.data());
        std::copy(&in[0][0], &in[0][0] + 2 * size_, &buf_[0][0]);
        fftw_execute(plan);
        std::copy(&buf_[0][0], &buf_[0][0] + 2 * size_, &in[0][0]);
        if (scale != 1.0) data *= scale;
    }

    Grid grid_;
    long size_;
    fftw_complex* buf_ = nullptr;
    fftw_plan full_[2] = {nullptr, nullptr};
    fftw_plan axis_[2][2] = {{nullptr, nullptr}, {nullptr, nullptr}};
};

}  // namespace larmor
