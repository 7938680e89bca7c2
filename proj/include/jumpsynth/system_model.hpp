#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jumpsynth/errors.hpp"
#include "jumpsynth/schedule.hpp"

namespace jumpsynth {

/**
 * @brief Gaussian state PDF: mean vector and covariance matrix.
 *
 * The covariance is symmetrized on construction and must be positive
 * semidefinite; eigenvalues in [-1e-10, 0) are clamped to zero.
 */
struct GaussianBelief {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;

    GaussianBelief(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
        : mu(std::move(mean)), sigma(std::move(covariance)) {
        if (sigma.rows() != sigma.cols())
            throw ConfigError("belief: covariance is " + std::to_string(sigma.rows()) + "x" +
                              std::to_string(sigma.cols()) + ", expected square");
        if (sigma.rows() != mu.size())
            throw ConfigError("belief: covariance dimension " + std::to_string(sigma.rows()) +
                              " does not match mean dimension " + std::to_string(mu.size()));
        const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
        if (sigma.size() > 0 && (sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw ConfigError("belief: covariance is not symmetric within tolerance");
        sigma = ((sigma + sigma.transpose()) / 2.0).eval();
        if (sigma.size() > 0) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
            if (es.info() != Eigen::Success)
                throw NumericalError("belief: covariance eigendecomposition failed");
            const double min_eig = es.eigenvalues().minCoeff();
            if (min_eig < -1e-10)
                throw ConfigError("belief: covariance is not positive semidefinite (min eigenvalue " +
                                  std::to_string(min_eig) + ")");
            if (min_eig < 0.0) {
                Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
                sigma = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
                sigma = ((sigma + sigma.transpose()) / 2.0).eval();
            }
        }
    }

    Eigen::Index dim() const { return mu.size(); }
};

/**
 * @brief Jump linear system x(k+1) = A_{sigma(k)} x(k): an ordered family of
 * square mode matrices sharing one state dimension.
 */
struct JumpSystem {
    std::vector<Eigen::MatrixXd> modes;
    int n = 0; ///< state dimension
    int m = 0; ///< mode count

    static JumpSystem from_modes(std::vector<Eigen::MatrixXd> mode_matrices) {
        if (mode_matrices.empty())
            throw ConfigError("system: at least one mode matrix is required");
        const Eigen::Index n = mode_matrices.front().rows();
        for (std::size_t i = 0; i < mode_matrices.size(); ++i) {
            const auto& a = mode_matrices[i];
            if (a.rows() != a.cols() || a.rows() != n)
                throw ConfigError("system: mode " + std::to_string(i + 1) + " matrix is " +
                                  std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                  ", expected " + std::to_string(n) + "x" + std::to_string(n));
        }
        JumpSystem sys;
        sys.n = static_cast<int>(n);
        sys.m = static_cast<int>(mode_matrices.size());
        sys.modes = std::move(mode_matrices);
        return sys;
    }

    /// Bounds-checked mode access (0-based index).
    const Eigen::MatrixXd& mode(int index) const {
        if (index < 0 || index >= m)
            throw InputError("system: mode index " + std::to_string(index + 1) + " outside 1.." +
                             std::to_string(m));
        return modes[static_cast<std::size_t>(index)];
    }
};

/// Plant x(k+1) = A x + B u with a family of state-feedback gains u = K_i x.
struct PlantWithControllers {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    std::vector<Eigen::MatrixXd> gains;
};

/// Closed-loop mode matrices A + B K_i.
inline JumpSystem build_closed_loop(const PlantWithControllers& plant) {
    if (plant.A.rows() != plant.A.cols())
        throw ConfigError("plant: A is " + std::to_string(plant.A.rows()) + "x" +
                          std::to_string(plant.A.cols()) + ", expected square");
    if (plant.B.rows() != plant.A.rows())
        throw ConfigError("plant: B has " + std::to_string(plant.B.rows()) + " rows, expected " +
                          std::to_string(plant.A.rows()));
    if (plant.gains.empty())
        throw ConfigError("plant: at least one gain is required");
    std::vector<Eigen::MatrixXd> modes;
    modes.reserve(plant.gains.size());
    for (std::size_t i = 0; i < plant.gains.size(); ++i) {
        const auto& k = plant.gains[i];
        if (k.rows() != plant.B.cols() || k.cols() != plant.A.rows())
            throw ConfigError("plant: gain " + std::to_string(i + 1) + " is " + std::to_string(k.rows()) +
                              "x" + std::to_string(k.cols()) + ", expected " +
                              std::to_string(plant.B.cols()) + "x" + std::to_string(plant.A.rows()));
        modes.push_back(plant.A + plant.B * k);
    }
    return JumpSystem::from_modes(std::move(modes));
}

namespace detail {

/// One-step moment update, no invariant re-validation. Shared by every
/// propagation loop so all routes perform the identical arithmetic.
inline void propagate_raw(Eigen::VectorXd& mu, Eigen::MatrixXd& sigma, const Eigen::MatrixXd& a) {
    mu = a * mu;
    sigma = a * sigma * a.transpose();
    sigma = ((sigma + sigma.transpose()) / 2.0).eval();
}

inline double w2_raw(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma) {
    return mu.squaredNorm() + sigma.trace();
}

} // namespace detail

/// One-step belief update: mu' = A mu, sigma' = A sigma A^T.
inline GaussianBelief propagate(const GaussianBelief& belief, const Eigen::MatrixXd& mode_matrix) {
    if (mode_matrix.rows() != mode_matrix.cols() || mode_matrix.rows() != belief.dim())
        throw ConfigError("propagate: mode matrix is " + std::to_string(mode_matrix.rows()) + "x" +
                          std::to_string(mode_matrix.cols()) + ", expected " +
                          std::to_string(belief.dim()) + "x" + std::to_string(belief.dim()));
    Eigen::VectorXd mu = belief.mu;
    Eigen::MatrixXd sigma = belief.sigma;
    detail::propagate_raw(mu, sigma, mode_matrix);
    return GaussianBelief(std::move(mu), std::move(sigma));
}

/**
 * @brief Beliefs along a schedule, at k = 0..steps inclusive.
 *
 * Element 0 is the initial belief.
 */
inline std::vector<GaussianBelief> simulate_schedule(const JumpSystem& system,
                                                     const GaussianBelief& initial,
                                                     const SwitchingSchedule& schedule, int steps) {
    if (steps < 0) throw InputError("simulate: negative step count");
    if (schedule.total_steps < steps)
        throw InputError("simulate: schedule covers " + std::to_string(schedule.total_steps) +
                         " steps, " + std::to_string(steps) + " requested");
    if (initial.dim() != system.n)
        throw ConfigError("simulate: belief dimension " + std::to_string(initial.dim()) +
                          " does not match state dimension " + std::to_string(system.n));
    std::vector<GaussianBelief> beliefs;
    beliefs.reserve(static_cast<std::size_t>(steps) + 1);
    beliefs.push_back(initial);
    for (int k = 0; k < steps; ++k)
        beliefs.push_back(propagate(beliefs.back(), system.mode(schedule.mode_at(k))));
    return beliefs;
}

} // namespace jumpsynth
