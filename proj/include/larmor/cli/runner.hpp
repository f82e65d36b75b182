#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "larmor/classical/equivalence.hpp"
#include "larmor/cli/csv.hpp"
#include "larmor/cli/scenario.hpp"
#include "larmor/quantum/eigenstates.hpp"
#include "larmor/quantum/evolution.hpp"
#include "larmor/tdfields/case2.hpp"

namespace larmor::cli {

struct CheckResult {
    std::string name;
    double defect = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string note;
};

struct RunReport {
    std::string scenario;
    Mode mode = Mode::ClassicalEquivalence;
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts;
    double wall_seconds = 0.0;

    bool passed() const {
        if (checks.empty()) return false;
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }
};

struct RunOptions {
    std::string out_dir = ".";
    bool check_only = false;
    double tolerance_scale = 1.0;
    /// Threads available inside one scenario (stability maps).
    int inner_threads = 1;
};

namespace detail {

class Recorder {
public:
    Recorder(const Scenario& s, const RunOptions& o, RunReport& r) : s_(s), o_(o), r_(r) {}

    void record(const std::string& name, double defect, const std::string& note = "") {
        if (r_.find(name)) throw std::logic_error("check recorded twice: " + name);
        CheckResult c;
        c.name = name;
        c.defect = defect;
        c.tolerance = s_.tolerance(name) * o_.tolerance_scale;
        c.passed = std::isfinite(defect) && defect <= c.tolerance;
        c.note = note;
        r_.checks.push_back(c);
    }

    /// Runs `body`; if it throws, every check it owns is recorded as failed with the error text.
    void guard(const std::vector<std::string>& owned, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            for (const auto& name : owned) {
                if (!r_.find(name)) record(name, std::numeric_limits<double>::infinity(), e.what());
            }
        }
    }

    bool artifacts() const { return !o_.check_only; }

    std::string artifact(const std::string& suffix) {
        const std::filesystem::path p = std::filesystem::path(o_.out_dir) / (s_.output_prefix + "_" + suffix + ".csv");
        r_.artifacts.push_back(p.string());
        return p.string();
    }

private:
    const Scenario& s_;
    const RunOptions& o_;
    RunReport& r_;
};

inline std::vector<std::string> phase_space_header(const std::string& prefix) {
    std::vector<std::string> h;
    for (int i = 1; i <= 3; ++i) {
        h.push_back(prefix + "Q" + std::to_string(i));
        h.push_back(prefix + "P" + std::to_string(i));
    }
    return h;
}

inline std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

template <typename V>
void put(CsvWriter::Row& row, const V& v) {
    for (int i = 0; i < v.size(); ++i) row << static_cast<double>(v(i));
}

inline QuadratureSpec quad_of(const Scenario& s) { return QuadratureSpec{static_cast<double>(s.numerics.quadrature_panels)}; }

inline void run_classical(const Scenario& s, Recorder& rec) {
    const StaticField field = StaticField::axial(s.field.b3, s.field.electric, s.field.charge, s.field.mass);
    const PhaseState z0 = PhaseState::from_qp(s.initial.position, s.initial.momentum);
    EquivalenceOptions opt;
    opt.dt = s.numerics.dt;
    opt.sample_every = s.numerics.sample_every;
    opt.quad = quad_of(s);

    const bool drive_free = s.field.electric.isZero(0.0);
    std::vector<std::string> owned = {"equivalence", "symplectic_ct1", "symplectic_ct2", "homogeneous_energy"};
    if (drive_free) owned.push_back("phase_A_zero");
    rec.guard(owned, [&] {
        const EquivalenceReport r = equivalence_report(field, z0, s.horizon, opt);
        rec.record("equivalence", r.max_deviation);
        rec.record("symplectic_ct1", r.symplectic_defect_ct1);
        rec.record("symplectic_ct2", r.symplectic_defect_ct2);
        rec.record("homogeneous_energy", r.homogeneous_energy_drift);
        if (drive_free) rec.record("phase_A_zero", r.max_abs_phase);
        if (rec.artifacts()) {
            CsvWriter csv(rec.artifact("trajectory"),
                          concat(concat(concat({"t"}, phase_space_header("x_")), phase_space_header("")),
                                 concat(phase_space_header("ref_"), {"phase_A"})));
            for (const auto& sample : r.samples) {
                auto row = csv.row();
                row << sample.t;
                put(row, sample.lab);
                put(row, sample.mapped);
                put(row, sample.reference);
                row << sample.phase;
            }
        }
    });

    if (s.numerics.random_cases > 0) {
        rec.guard({"random_equivalence"}, [&] {
            std::mt19937_64 rng(s.seed);
            auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
            double worst = 0.0;
            for (int i = 0; i < s.numerics.random_cases; ++i) {
                const double b3 = uni(0.5, 2.0) * (uni(0, 1) < 0.5 ? -1.0 : 1.0);
                const Vec3 e(uni(-0.3, 0.3), uni(-0.3, 0.3), uni(-0.3, 0.3));
                const Vec3 q(uni(-1, 1), uni(-1, 1), uni(-1, 1));
                const Vec3 p(uni(-1, 1), uni(-1, 1), uni(-1, 1));
                const StaticField f = StaticField::axial(b3, e, s.field.charge, s.field.mass);
                const double horizon = 10.0 / f.oscillator().omega();
                worst = std::max(worst, equivalence_report(f, PhaseState::from_qp(q, p), horizon, opt).max_deviation);
            }
            rec.record("random_equivalence", worst);
        });
    }
}

inline WaveFunction coherent_state(const Grid& g, const OscParams& p, double hbar, const Vec3& q0, const Vec3& p0) {
    return WaveFunction::sample(g, hbar, [&](double x, double y) {
        const double amp = eigenfunction(0, p, hbar, x - q0.x()) * eigenfunction(0, p, hbar, y - q0.y());
        return std::polar(amp, (p0.x() * x + p0.y() * y) / hbar);
    });
}

inline void write_wavefunction(const std::string& path, const WaveFunction& psi) {
    const Grid& g = psi.grid();
    const ComplexVector a = psi.resolved();
    CsvWriter csv(path, {"x", "y", "re", "im", "abs2"});
    for (int ix = 0; ix < g.points(); ++ix) {
        for (int iy = 0; iy < g.points(); ++iy) {
            const Complex c = a(g.index(ix, iy));
            csv.row() << g.coordinate(ix) << g.coordinate(iy) << c.real() << c.imag() << std::norm(c);
        }
    }
}

inline void run_quantum(const Scenario& s, Recorder& rec) {
    const Grid g(2, s.grid.points, s.grid.half_width);
    SpectralEngine engine(g);
    const double hbar = s.grid.hbar;
    const StaticField field = StaticField::axial(s.field.b3, s.field.electric, s.field.charge, s.field.mass);
    const QuantumPipeline pipeline(field, s.horizon, hbar, quad_of(s));
    const OscParams osc = pipeline.oscillator();
    const WaveFunction start = coherent_state(g, osc, hbar, s.initial.position, s.initial.momentum);
    const double t = s.horizon;
    const double dt = s.numerics.dt;

    std::optional<WaveFunction> via_h2;
    rec.guard({"qt2_link"}, [&] {
        const WaveFunction via_h3 =
            unitary_qt2(engine, split_step_evolve(start, GridHamiltonian::h3(osc), t, dt), t, pipeline.shift);
        via_h2 = split_step_evolve(start, GridHamiltonian::h2(osc, pipeline.larmor_drive()), t, dt);
        rec.record("qt2_link", l2_distance(via_h3, *via_h2));
    });
    rec.guard({"qt1_link", "norm"}, [&] {
        if (!via_h2) throw std::runtime_error("H2 evolution unavailable");
        const WaveFunction via_h1 = split_step_evolve(start, GridHamiltonian::h1_planar(field), t, dt);
        rec.record("qt1_link", l2_distance(unitary_qt1(engine, *via_h2, t, field), via_h1));
        rec.record("norm", std::abs(via_h1.norm() - start.norm()));
        if (rec.artifacts()) write_wavefunction(rec.artifact("wavefunction"), via_h1);
    });

    if (s.field.electric.isZero(0.0)) {
        rec.guard({"qt2_identity"}, [&] {
            rec.record("qt2_identity", l2_distance(unitary_qt2(engine, start, t, pipeline.shift), start));
        });
        rec.guard({"dynamical_phase_only"}, [&] {
            const EigenLabel label(s.initial.n1, s.initial.n2, s.initial.k);
            const TransformedEigenstate out = transformed_eigenstate(engine, label, t, pipeline, g);
            double defect = std::abs(out.planar.total_phase() - out.planar.phase("dynamical"));
            double axial_dynamical = 0.0;
            for (const auto& e : out.axial.ledger) {
                if (e.name == "dynamical_axial") axial_dynamical += e.radians;
            }
            defect += std::abs(out.axial.total_phase() - axial_dynamical);
            rec.record("dynamical_phase_only", defect);
        });
    }
}

inline void run_expansion(const Scenario& s, Recorder& rec) {
    const ExpansionSpec& e = s.expansion;
    const OscParams p(e.mass, e.omega);
    const double hbar = s.grid.hbar;

    rec.guard({"hermite_shift"}, [&] {
        double worst = 0.0;
        for (int n = 0; n <= e.hermite_max; ++n) {
            const auto c = hermite_shift_expand(n, e.shift);
            double scale = 0.0;
            double residual = 0.0;
            for (int j = 0; j < 50; ++j) {
                const double u = -3.0 + 6.0 * j / 49.0;
                double sum = 0.0;
                for (const auto& [k, ck] : c.values) sum += ck * hermite(k, u);
                const double exact = hermite(n, u + e.shift);
                scale = std::max(scale, std::abs(exact));
                residual = std::max(residual, std::abs(sum - exact));
            }
            worst = std::max(worst, residual / scale);
        }
        rec.record("hermite_shift", worst);
    });

    rec.guard({"rotation_orthogonality", "level_one_rotation"}, [&] {
        double worst = 0.0;
        std::optional<CsvWriter> csv;
        if (rec.artifacts()) csv.emplace(rec.artifact("rotation_coefficients"), std::vector<std::string>{"level", "k1", "k2", "m1", "m2", "coefficient"});
        for (int level = 0; level <= e.max_level; ++level) {
            Eigen::MatrixXd m(level + 1, level + 1);
            for (int k1 = 0; k1 <= level; ++k1) {
                const auto c = rotate_product_expand(k1, level - k1, e.theta, p, hbar);
                for (int m1 = 0; m1 <= level; ++m1) {
                    m(k1, m1) = c.at({m1, level - m1});
                    if (csv) csv->row() << level << k1 << (level - k1) << m1 << (level - m1) << m(k1, m1);
                }
            }
            worst = std::max(worst, (m.transpose() * m - Eigen::MatrixXd::Identity(level + 1, level + 1)).cwiseAbs().maxCoeff());
        }
        rec.record("rotation_orthogonality", worst);
        const auto c = rotate_product_expand(1, 0, e.theta, p, hbar);
        rec.record("level_one_rotation",
                   std::max(std::abs(c.at({1, 0}) - std::cos(e.theta)), std::abs(c.at({0, 1}) + std::sin(e.theta))));
    });

    if (e.spectrum) {
        rec.guard({"spectrum"}, [&] {
            const Grid g(2, s.grid.points, s.grid.half_width);
            SpectralEngine engine(g);
            const GridHamiltonian h = GridHamiltonian::h3(p);
            std::optional<CsvWriter> csv;
            if (rec.artifacts()) csv.emplace(rec.artifact("spectrum"), std::vector<std::string>{"n1", "n2", "expectation", "exact"});
            double worst = 0.0;
            for (int level = 0; level <= 3; ++level) {
                for (int n1 = level; n1 >= 0; --n1) {
                    const int n2 = level - n1;
                    const double got = expectation(engine, h, eigenstate_on_grid(g, n1, n2, p, hbar), 0.0);
                    const double exact = energy(EigenLabel(n1, n2), p, hbar);
                    worst = std::max(worst, std::abs(got / exact - 1.0));
                    if (csv) csv->row() << n1 << n2 << got << exact;
                }
            }
            rec.record("spectrum", worst);
        });
    }
}

inline void run_hill(const Scenario& s, const RunOptions& o, Recorder& rec) {
    const HillSpec& h = s.hill;
    const bool constant = h.system == "constant";
    const auto family = [constant](double p1, double p2) {
        return constant ? HillSystem::constant(p1 * p1, p2) : HillSystem::mathieu(p1, p2);
    };
    const long steps = s.numerics.monodromy_steps;

    std::vector<std::string> owned = {"determinant"};
    if (constant) owned.push_back("constant_trace");
    rec.guard(owned, [&] {
        const auto rows = stability_map(family, h.param1, h.param2, steps, o.inner_threads);
        double det = 0.0;
        double trace = 0.0;
        for (const auto& r : rows) {
            det = std::max(det, std::abs(r.determinant - 1.0));
            if (constant) trace = std::max(trace, std::abs(r.trace - 2.0 * std::cos(r.param1 * r.param2)));
        }
        rec.record("determinant", det);
        if (constant) rec.record("constant_trace", trace);
        if (rec.artifacts()) {
            CsvWriter csv(rec.artifact("stability"), {"param1", "param2", "trace", "determinant", "classification"});
            for (const auto& r : rows) csv.row() << r.param1 << r.param2 << r.trace << r.determinant << std::string(to_string(r.classification));
        }
    });

    if (!h.brackets.empty()) {
        rec.guard({"boundary_crosscheck"}, [&] {
            const double p2 = h.boundary_param2;
            const auto one = [&](double p1) { return family(p1, p2); };
            std::optional<CsvWriter> csv;
            if (rec.artifacts()) csv.emplace(rec.artifact("boundaries"), std::vector<std::string>{"lo", "hi", "param2", "boundary_rk4", "boundary_piecewise"});
            double worst = 0.0;
            for (const auto& [lo, hi] : h.brackets) {
                const double a = locate_stability_boundary(one, lo, hi, h.boundary_tolerance, steps);
                const double b = locate_stability_boundary_piecewise(one, lo, hi, h.boundary_tolerance, h.brute_force_pieces);
                worst = std::max(worst, std::abs(a - b));
                if (csv) csv->row() << lo << hi << p2 << a << b;
            }
            rec.record("boundary_crosscheck", worst);
        });
    }
}

inline void run_case1(const Scenario& s, Recorder& rec) {
    const FieldSpec& f = s.field;
    const double b0 = f.b3;
    const double b1 = f.b3_amplitude;
    const double nu = f.b3_frequency;
    const std::function<double(double)> b3 = [b0, b1, nu](double t) { return b0 + b1 * std::cos(nu * t); };
    const Vec3 e = f.electric;
    const TimeVaryingField field = TimeVaryingField::fixed_axis(b3, [e](double) { return e; }, f.charge, f.mass);
    const double scale = f.charge / (f.mass * kSpeedOfLight);
    // Analytic A(t) of this B3 profile; the Simpson form is what rotation_closed_form checks.
    const AngleFn angle = [=](double t) { return scale * (b0 * t + (b1 != 0.0 ? b1 * std::sin(nu * t) / nu : 0.0)); };

    rec.guard({"rotation_closed_form"}, [&] {
        double worst = 0.0;
        long step = 0;
        rotation_case1_ode(b3, f.charge, f.mass, s.horizon, s.numerics.rotation_dt, [&](double t, const Mat3& r) {
            if (++step % s.numerics.sample_every != 0) return;
            const Mat3 closed = rotation_case1(b3, f.charge, f.mass, t, quad_of(s));
            worst = std::max(worst, (closed - r).cwiseAbs().maxCoeff());
        });
        worst = std::max(worst, (rotation_case1(b3, f.charge, f.mass, s.horizon, quad_of(s)) -
                                 rotation_case1_ode(b3, f.charge, f.mass, s.horizon, s.numerics.rotation_dt))
                                    .cwiseAbs()
                                    .maxCoeff());
        rec.record("rotation_closed_form", worst);
    });

    rec.guard({"larmor_reduction"}, [&] {
        const CanonicalMap map = case1_larmor_map(angle);
        const PhaseState z0 = PhaseState::from_qp(s.initial.position, s.initial.momentum);
        std::vector<std::pair<double, Vec6>> lab;
        std::vector<Vec6> reduced;
        const auto every = s.numerics.sample_every;
        rk4_trajectory([&](const PhaseState& z, double t) { return eval_H4(field, z, t); }, z0, s.horizon,
                       s.numerics.dt, [&](long k, double t, const PhaseState& z) {
                           if (k % every == 0) lab.emplace_back(t, z.as_vec6());
                       });
        rk4_trajectory([&](const PhaseState& z, double t) { return eval_case1_reduced(field, z, t, angle); }, z0,
                       s.horizon, s.numerics.dt, [&](long k, double, const PhaseState& z) {
                           if (k % every == 0) reduced.push_back(z.as_vec6());
                       });
        double worst = 0.0;
        std::optional<CsvWriter> csv;
        if (rec.artifacts()) csv.emplace(rec.artifact("trajectory"), concat(concat({"t"}, phase_space_header("x_")), phase_space_header("")));
        for (std::size_t i = 0; i < lab.size() && i < reduced.size(); ++i) {
            const Vec6 mapped = map.forward(lab[i].first, PhaseState(lab[i].second)).as_vec6();
            worst = std::max(worst, (mapped - reduced[i]).cwiseAbs().maxCoeff());
            if (csv) {
                auto row = csv->row();
                row << lab[i].first;
                put(row, lab[i].second);
                put(row, reduced[i]);
            }
        }
        if (lab.size() != reduced.size()) throw std::logic_error("trajectory sample counts differ");
        rec.record("larmor_reduction", worst);
    });

    rec.guard({"hill_determinant"}, [&] {
        const double w0 = std::abs(scale * b0);
        const double period = (b1 != 0.0) ? 2.0 * kPi / nu : (w0 > 0.0 ? 2.0 * kPi / w0 : s.horizon);
        const HillSystem hill = case1_hill_system(field, period, angle);
        const MonodromyReport r = hill_monodromy_steps(hill, s.numerics.monodromy_steps);
        rec.record("hill_determinant", std::abs(r.determinant - 1.0));
        if (rec.artifacts()) {
            CsvWriter csv(rec.artifact("monodromy"), {"period", "m11", "m12", "m21", "m22", "trace", "determinant",
                                                      "classification", "floquet_re", "floquet_im"});
            csv.row() << period << r.monodromy(0, 0) << r.monodromy(0, 1) << r.monodromy(1, 0) << r.monodromy(1, 1)
                      << r.trace << r.determinant << std::string(to_string(r.classification))
                      << r.floquet_exponents[0].real() << r.floquet_exponents[0].imag();
        }
    });
}

inline void run_case2(const Scenario& s, Recorder& rec) {
    const FieldSpec& f = s.field;
    const Vec3 e = f.electric;
    const TimeVaryingField field =
        TimeVaryingField::rotating(f.b1, f.b3, f.alpha, [e](double) { return e; }, f.charge, f.mass);
    const H5Data h5 = ct3_reduce(field);
    const VectorHillSystem sys = ct4_reduce(h5);
    const CanonicalMap a = ct3_map(field);
    const CanonicalMap b = ct4_map(h5);

    rec.guard({"conjugation"}, [&] {
        // With the frame map F(t) = R_z(-alpha t) of ct3: F Omega_1(t) F^-1 = Omega_1(0).
        const double span = f.alpha != 0.0 ? 2.0 * kPi / std::abs(f.alpha) : s.horizon;
        const Mat3 w0 = omega1(field, 0.0);
        double worst = 0.0;
        for (int k = 0; k <= 256; ++k) {
            const double t = span * k / 256.0;
            const Mat3 frame = rotation_about_z(-f.alpha * t);
            worst = std::max(worst, (frame * omega1(field, t) * frame.transpose() - w0).cwiseAbs().maxCoeff());
        }
        rec.record("conjugation", worst);
    });

    rec.guard({"symplectic_ct3", "symplectic_ct4"}, [&] {
        std::mt19937_64 rng(s.seed);
        auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
        double d3 = 0.0;
        double d4 = 0.0;
        for (int i = 0; i < s.numerics.symplectic_samples; ++i) {
            Vec6 v;
            for (int j = 0; j < 6; ++j) v(j) = uni(-2, 2);
            const double t = uni(0, s.horizon);
            d3 = std::max(d3, map_symplectic_defect(a.forward, t, PhaseState(v)));
            d4 = std::max(d4, map_symplectic_defect(b.forward, t, PhaseState(v)));
        }
        rec.record("symplectic_ct3", d3);
        rec.record("symplectic_ct4", d4);
    });

    rec.guard({"reduction"}, [&] {
        const CanonicalMap both = CanonicalMap::compose(a, b);
        const PhaseState z0 = PhaseState::from_qp(s.initial.position, s.initial.momentum);
        std::vector<std::pair<double, Vec6>> lab;
        std::vector<Vec6> reduced;
        const auto every = s.numerics.sample_every;
        rk4_trajectory([&](const PhaseState& z, double t) { return eval_H4(field, z, t); }, z0, s.horizon,
                       s.numerics.dt, [&](long k, double t, const PhaseState& z) {
                           if (k % every == 0) lab.emplace_back(t, z.as_vec6());
                       });
        rk4_trajectory([&](const PhaseState& z, double t) { return eval_vector_hill(sys, z, t); }, z0, s.horizon,
                       s.numerics.dt, [&](long k, double, const PhaseState& z) {
                           if (k % every == 0) reduced.push_back(z.as_vec6());
                       });
        if (lab.size() != reduced.size()) throw std::logic_error("trajectory sample counts differ");
        double worst = 0.0;
        std::optional<CsvWriter> csv;
        if (rec.artifacts()) csv.emplace(rec.artifact("trajectory"), concat(concat({"t"}, phase_space_header("x_")), phase_space_header("")));
        for (std::size_t i = 0; i < lab.size(); ++i) {
            const Vec6 mapped = both.forward(lab[i].first, PhaseState(lab[i].second)).as_vec6();
            worst = std::max(worst, (mapped - reduced[i]).cwiseAbs().maxCoeff());
            if (csv) {
                auto row = csv->row();
                row << lab[i].first;
                put(row, lab[i].second);
                put(row, reduced[i]);
            }
        }
        rec.record("reduction", worst);
    });

    rec.guard({"monodromy_symplectic", "monodromy_exponential"}, [&] {
        const Mat6 mono = vector_monodromy(sys, sys.period / static_cast<double>(s.numerics.monodromy_steps));
        const double size = 1.0 + mono.cwiseAbs().maxCoeff();
        rec.record("monodromy_symplectic", symplectic_defect(Eigen::MatrixXd(mono)) / size);
        const Mat6 reference = (sys.period * h5_generator(h5)).exp();
        rec.record("monodromy_exponential", (mono - reference).cwiseAbs().maxCoeff() / size);
        if (rec.artifacts()) {
            CsvWriter csv(rec.artifact("monodromy"), {"period", "row", "c1", "c2", "c3", "c4", "c5", "c6"});
            for (int i = 0; i < 6; ++i) {
                auto row = csv.row();
                row << sys.period << (i + 1);
                put(row, Vec6(mono.row(i).transpose()));
            }
        }
    });

    if (f.alpha == 0.0 && f.b1 == 0.0) {
        rec.guard({"static_limit"}, [&] {
            const StaticField stat = StaticField::axial(f.b3, e, f.charge, f.mass);
            const CanonicalMap both = CanonicalMap::compose(a, b);
            const CanonicalMap larmor = ct1(stat);
            const Drive drive = ct1_drive(stat);
            const double w = stat.oscillator().omega();
            std::mt19937_64 rng(s.seed + 1);
            auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
            double worst = 0.0;
            for (int i = 0; i < s.numerics.symplectic_samples; ++i) {
                Vec6 v;
                for (int j = 0; j < 6; ++j) v(j) = uni(-2, 2);
                const double t = uni(0, s.horizon);
                const PhaseState z(v);
                worst = std::max(worst, (both.forward(t, z).as_vec6() - larmor.forward(t, z).as_vec6()).cwiseAbs().maxCoeff());
                worst = std::max(worst, (sys.drive(t) - drive(t)).cwiseAbs().maxCoeff());
                Mat3 k = Mat3::Zero();
                k(0, 0) = k(1, 1) = f.mass * w * w;
                worst = std::max(worst, (sys.stiffness(t) - k).cwiseAbs().maxCoeff());
            }
            rec.record("static_limit", worst);
        });
    }
}

}  // namespace detail

/// Executes the scenario's pipeline, writes its CSV artifacts unless check_only, and reports every check.
inline RunReport run(const Scenario& s, const RunOptions& options = {}) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.scenario = s.name;
    report.mode = s.mode;
    if (!options.check_only) std::filesystem::create_directories(options.out_dir);
    detail::Recorder rec(s, options, report);
    switch (s.mode) {
    case Mode::ClassicalEquivalence: detail::run_classical(s, rec); break;
    case Mode::QuantumPipeline: detail::run_quantum(s, rec); break;
    case Mode::EigenstateExpansion: detail::run_expansion(s, rec); break;
    case Mode::HillStability: detail::run_hill(s, options, rec); break;
    case Mode::Case1: detail::run_case1(s, rec); break;
    case Mode::Case2: detail::run_case2(s, rec); break;
    }
    if (!options.check_only) {
        CsvWriter csv(rec.artifact("report"), {"check", "defect", "tolerance", "passed"});
        for (const auto& c : report.checks) {
            csv.row() << c.name << c.defect << c.tolerance << std::string(c.passed ? "true" : "false");
        }
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace larmor::cli
