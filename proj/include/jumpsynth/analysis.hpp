#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "jumpsynth/errors.hpp"
#include "jumpsynth/system_model.hpp"
#include "jumpsynth/wasserstein.hpp"

namespace jumpsynth {

/// Largest eigenvalue modulus of a square real matrix.
inline double spectral_radius(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols())
        throw InputError("spectral radius: matrix is " + std::to_string(matrix.rows()) + "x" +
                         std::to_string(matrix.cols()) + ", expected square");
    if (matrix.rows() == 0) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("spectral radius: eigenvalue iteration did not converge for a " +
                             std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) +
                             " matrix");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Throws PreconditionError if any mode has spectral radius >= 1.
inline void require_all_schur(const JumpSystem& system) {
    for (int i = 0; i < system.m; ++i) {
        const double rho = spectral_radius(system.modes[static_cast<std::size_t>(i)]);
        if (rho >= 1.0)
            throw PreconditionError("stability: mode " + std::to_string(i + 1) +
                                    " is not Schur stable (spectral radius " + std::to_string(rho) +
                                    ")");
    }
}

/// Outcome of the mean-square stability certificate on a realized trace.
struct MsStabilityVerdict {
    bool stable = false;
    double initial_w2 = 0.0;
    double final_w2 = 0.0;
    double threshold = 0.0;
    /// Index into jump_times of the first non-decreasing pair, if any.
    std::optional<int> violating_jump;
};

/**
 * @brief Certifies mean-square stability of a realized trajectory: W^2 must be
 * non-increasing across successive jump times and the final value must fall
 * below threshold * W^2(0).
 */
inline MsStabilityVerdict verify_ms_stability(const W2Trace& trace, const std::vector<int>& jump_times,
                                              double threshold) {
    if (trace.values.empty()) throw InputError("ms stability: empty trace");
    if (threshold <= 0.0) throw InputError("ms stability: threshold must be positive");
    MsStabilityVerdict v;
    v.initial_w2 = trace.values.front();
    v.final_w2 = trace.values.back();
    v.threshold = threshold;
    const int len = static_cast<int>(trace.values.size());
    double prev = -1.0;
    for (std::size_t j = 0; j < jump_times.size(); ++j) {
        const int t = jump_times[j];
        if (t < 0 || t >= len)
            throw InputError("ms stability: jump time " + std::to_string(t) + " outside trace");
        const double w = trace.values[static_cast<std::size_t>(t)];
        if (j > 0 && w > prev && !v.violating_jump)
            v.violating_jump = static_cast<int>(j);
        prev = w;
    }
    const bool decreasing = !v.violating_jump.has_value();
    const bool settled = v.final_w2 < threshold * v.initial_w2 || v.initial_w2 == 0.0;
    v.stable = decreasing && settled;
    return v;
}

/**
 * @brief Sampled screen for a single mode that makes switching unnecessary.
 *
 * Returns mode i when ||A_i x|| < ||A_j x|| for all j != i over `samples`
 * quasi-uniform sphere directions scaled by `radius`, and rho(A_i) is strictly
 * minimal. A nullopt result is inconclusive by design.
 */
inline std::optional<int> dominance_check(const JumpSystem& system, int samples, double radius) {
    if (system.m < 2) throw InputError("dominance: at least two modes required");
    if (samples <= 0) throw InputError("dominance: sample count must be positive");
    if (radius <= 0.0) throw InputError("dominance: radius must be positive");

    std::vector<double> radii(static_cast<std::size_t>(system.m));
    for (int i = 0; i < system.m; ++i)
        radii[static_cast<std::size_t>(i)] = spectral_radius(system.modes[static_cast<std::size_t>(i)]);

    // Fixed-seed Gaussian directions, normalized onto the sphere.
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    auto uniform01 = [&rng] { return std::ldexp(static_cast<double>(rng() >> 11), -53); };
    auto gaussian = [&] {
        double u = 0.0;
        while (u <= 0.0) u = uniform01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * uniform01());
    };

    const int n = system.n;
    std::vector<char> candidate(static_cast<std::size_t>(system.m), 1);
    for (int i = 0; i < system.m; ++i)
        for (int j = 0; j < system.m; ++j)
            if (j != i && !(radii[static_cast<std::size_t>(i)] < radii[static_cast<std::size_t>(j)]))
                candidate[static_cast<std::size_t>(i)] = 0;

    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd x(n);
        do {
            for (int c = 0; c < n; ++c) x(c) = gaussian();
        } while (x.norm() == 0.0);
        x *= radius / x.norm();
        std::vector<double> norms(static_cast<std::size_t>(system.m));
        for (int i = 0; i < system.m; ++i)
            norms[static_cast<std::size_t>(i)] = (system.modes[static_cast<std::size_t>(i)] * x).norm();
        for (int i = 0; i < system.m; ++i) {
            if (!candidate[static_cast<std::size_t>(i)]) continue;
            for (int j = 0; j < system.m; ++j)
                if (j != i && !(norms[static_cast<std::size_t>(i)] < norms[static_cast<std::size_t>(j)]))
                    candidate[static_cast<std::size_t>(i)] = 0;
        }
    }
    for (int i = 0; i < system.m; ++i)
        if (candidate[static_cast<std::size_t>(i)]) return i;
    return std::nullopt;
}

/// Static per-mode stability data plus the trajectory certificate.
struct StabilityReport {
    std::map<int, double> per_mode_spectral_radius; ///< 0-based mode -> rho
    bool all_schur = false;
    MsStabilityVerdict ms_verdict;
};

inline StabilityReport analyze_stability(const JumpSystem& system, const W2Trace& trace,
                                         const std::vector<int>& jump_times, double threshold) {
    StabilityReport r;
    r.all_schur = true;
    for (int i = 0; i < system.m; ++i) {
        const double rho = spectral_radius(system.modes[static_cast<std::size_t>(i)]);
        r.per_mode_spectral_radius[i] = rho;
        if (rho >= 1.0) r.all_schur = false;
    }
    r.ms_verdict = verify_ms_stability(trace, jump_times, threshold);
    return r;
}

} // namespace jumpsynth
