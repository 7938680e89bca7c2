#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jumpsynth/errors.hpp"
#include "jumpsynth/schedule.hpp"
#include "jumpsynth/system_model.hpp"

namespace jumpsynth {

/**
 * @brief Squared Wasserstein-2 distance between a Gaussian belief and the
 * Dirac measure at the origin: ||mu||^2 + tr(Sigma).
 */
inline double w2_gaussian_dirac(const GaussianBelief& belief) {
    return std::max(0.0, detail::w2_raw(belief.mu, belief.sigma));
}

/**
 * @brief Per-step squared Wasserstein distances and their discrete-time area.
 *
 * values[k] holds W^2(k) for k = 0..K; area = dk * sum of values.
 */
struct W2Trace {
    std::vector<double> values;
    double dk = 1.0;
    double area = 0.0;

    static W2Trace from_values(std::vector<double> values, double dk) {
        if (dk <= 0.0) throw InputError("trace: sampling interval dk must be positive");
        W2Trace t;
        t.dk = dk;
        t.values = std::move(values);
        double sum = 0.0;
        for (double& v : t.values) {
            if (v < 0.0) v = 0.0; // rounding guard; W^2 is nonnegative by construction
            sum += v;
        }
        t.area = dk * sum;
        return t;
    }
};

/**
 * @brief W^2(k) as the linear functional vec(I_n)^T [prod_p (A_{s_p} x A_{s_p})] vec(mu0 mu0^T + Sigma0).
 *
 * The factor for the first applied mode (sequence[0]) acts on the initial
 * second-moment vector first. Each Kronecker factor is applied through
 * (A x A) vec(X) = vec(A X A^T), so the n^2 x n^2 product is never formed.
 * An empty sequence yields the static W^2 of the initial belief.
 */
inline double w2_kron_form(const JumpSystem& system, const GaussianBelief& initial,
                           std::span<const int> sequence) {
    if (initial.dim() != system.n)
        throw ConfigError("kron form: belief dimension " + std::to_string(initial.dim()) +
                          " does not match state dimension " + std::to_string(system.n));
    Eigen::MatrixXd second_moment = initial.mu * initial.mu.transpose() + initial.sigma;
    for (int idx : sequence) {
        const Eigen::MatrixXd& a = system.mode(idx);
        second_moment = a * second_moment * a.transpose();
    }
    return std::max(0.0, second_moment.trace());
}

/**
 * @brief Same functional with each (A x A) materialized as a dense n^2 x n^2
 * matrix acting on the running n^2-vector. Cross-check route; capped at n <= 8.
 */
inline double w2_kron_form_dense(const JumpSystem& system, const GaussianBelief& initial,
                                 std::span<const int> sequence) {
    if (initial.dim() != system.n)
        throw ConfigError("kron form: belief dimension " + std::to_string(initial.dim()) +
                          " does not match state dimension " + std::to_string(system.n));
    const int n = system.n;
    if (n > 8)
        throw InputError("kron form: dense n^2 x n^2 route capped at n <= 8, got n = " +
                         std::to_string(n));
    const Eigen::MatrixXd second_moment = initial.mu * initial.mu.transpose() + initial.sigma;
    Eigen::VectorXd vec = Eigen::Map<const Eigen::VectorXd>(second_moment.data(), n * n);
    for (int idx : sequence) {
        const Eigen::MatrixXd& a = system.mode(idx);
        Eigen::MatrixXd kron(n * n, n * n);
        for (int bc = 0; bc < n; ++bc)
            for (int br = 0; br < n; ++br)
                kron.block(br * n, bc * n, n, n) = a(br, bc) * a;
        vec = (kron * vec).eval();
    }
    Eigen::VectorXd vec_identity =
        Eigen::Map<const Eigen::VectorXd>(Eigen::MatrixXd::Identity(n, n).eval().data(), n * n);
    return std::max(0.0, vec_identity.dot(vec));
}

/**
 * @brief W^2 along a schedule: values[k] is the squared distance of the k-th
 * propagated belief, k = 0..steps.
 */
inline W2Trace w2_trajectory(const JumpSystem& system, const GaussianBelief& initial,
                             const SwitchingSchedule& schedule, int steps, double dk) {
    if (dk <= 0.0) throw InputError("trajectory: sampling interval dk must be positive");
    const auto beliefs = simulate_schedule(system, initial, schedule, steps);
    std::vector<double> values;
    values.reserve(beliefs.size());
    for (const auto& b : beliefs) values.push_back(w2_gaussian_dirac(b));
    return W2Trace::from_values(std::move(values), dk);
}

} // namespace jumpsynth
