#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pauli.hpp"

namespace parvqe {

/// Deterministic energy functional of the parameter vector.
struct ObjectiveSpec {
    std::function<double(const std::vector<double>&)> evaluate;
    size_t parameter_count = 0;
};

/// Evaluation backend: a batch is a set of independent evaluations the
/// backend may run concurrently. Results come back ordered by input index.
class Executor {
  public:
    virtual ~Executor() = default;
    virtual std::vector<double> evaluate_batch(const std::vector<std::vector<double>>& thetas) = 0;

    double evaluate(const std::vector<double>& theta) { return evaluate_batch({theta})[0]; }
};

class LocalExecutor : public Executor {
  public:
    explicit LocalExecutor(ObjectiveSpec obj) : obj_(std::move(obj)) {}
    std::vector<double> evaluate_batch(const std::vector<std::vector<double>>& thetas) override {
        std::vector<double> out;
        out.reserve(thetas.size());
        for (const auto& t : thetas) out.push_back(obj_.evaluate(t));
        return out;
    }

  private:
    ObjectiveSpec obj_;
};

struct OptimizerConfig {
    double energy_tolerance = 1e-7;    // Hartree
    size_t max_iterations = 200;
    double finite_difference_step = 1e-4;  // radians
    size_t line_search_max_evals = 3;  // the N_s source
};

struct IterationRecord {
    size_t iteration = 0;
    std::vector<double> theta;
    double energy = 0.0;
    double gradient_norm = 0.0;
    size_t parallel_evaluations = 0;    // 2 * N_p, one independent batch
    size_t sequential_evaluations = 0;  // line-search evals, <= N_s cap
    double seconds = 0.0;
};

enum class OptimizeStatus { Converged, IterationLimit, Failed };

struct OptimizeResult {
    std::vector<double> theta;
    double energy = 0.0;
    OptimizeStatus status = OptimizeStatus::Failed;
    std::vector<IterationRecord> trace;
};

/// Central differences, all 2*N_p evaluations submitted as one batch.
inline std::vector<double> parallel_gradient(size_t n_params, const std::vector<double>& theta,
                                             double h, Executor& executor) {
    if (!(h > 0)) throw std::invalid_argument("parallel_gradient: step must be positive");
    std::vector<std::vector<double>> batch;
    batch.reserve(2 * n_params);
    for (size_t i = 0; i < n_params; ++i) {
        auto plus = theta, minus = theta;
        plus[i] += h;
        minus[i] -= h;
        batch.push_back(std::move(plus));
        batch.push_back(std::move(minus));
    }
    std::vector<double> values = executor.evaluate_batch(batch);
    std::vector<double> grad(n_params);
    for (size_t i = 0; i < n_params; ++i) {
        if (!std::isfinite(values[2 * i]) || !std::isfinite(values[2 * i + 1]))
            throw std::runtime_error("parallel_gradient: non-finite energy at parameter " +
                                     std::to_string(i));
        grad[i] = (values[2 * i] - values[2 * i + 1]) / (2 * h);
    }
    return grad;
}

/// Quasi-Newton (BFGS inverse-Hessian) outer loop with a backtracking line
/// search capped at line_search_max_evals sequential evaluations. Reproduces
/// the N_p-parallel / N_s-sequential evaluation profile per iteration.
inline OptimizeResult optimize(const ObjectiveSpec& obj, const std::vector<double>& theta0,
                               const OptimizerConfig& cfg, Executor& executor) {
    using clock = std::chrono::steady_clock;
    const size_t n = obj.parameter_count;
    if (theta0.size() != n)
        throw std::invalid_argument("optimize: theta0 length != parameter count");

    OptimizeResult result;
    result.theta = theta0;
    if (n == 0) {
        result.energy = executor.evaluate(theta0);
        result.status = OptimizeStatus::Converged;
        return result;
    }

    double energy = executor.evaluate(result.theta);
    if (!std::isfinite(energy)) throw std::runtime_error("optimize: non-finite initial energy");

    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(static_cast<long>(n), static_cast<long>(n));
    Eigen::VectorXd grad_prev;
    Eigen::VectorXd theta_prev;
    double step_scale = 1.0;

    for (size_t iter = 0; iter < cfg.max_iterations; ++iter) {
        auto t0 = clock::now();
        IterationRecord rec;
        rec.iteration = iter;

        std::vector<double> g =
            parallel_gradient(n, result.theta, cfg.finite_difference_step, executor);
        rec.parallel_evaluations = 2 * n;
        Eigen::VectorXd grad = Eigen::Map<Eigen::VectorXd>(g.data(), static_cast<long>(n));
        rec.gradient_norm = grad.norm();

        if (grad_prev.size() > 0) {
            // BFGS inverse update from the accepted step
            Eigen::VectorXd theta_now =
                Eigen::Map<Eigen::VectorXd>(result.theta.data(), static_cast<long>(n));
            Eigen::VectorXd s = theta_now - theta_prev;
            Eigen::VectorXd y = grad - grad_prev;
            double sy = s.dot(y);
            if (sy > 1e-14) {
                Eigen::MatrixXd id =
                    Eigen::MatrixXd::Identity(static_cast<long>(n), static_cast<long>(n));
                Eigen::MatrixXd left = id - (s * y.transpose()) / sy;
                hinv = left * hinv * left.transpose() + (s * s.transpose()) / sy;
            }
        }

        Eigen::VectorXd direction = -(hinv * grad);
        if (direction.dot(grad) >= 0) direction = -grad;  // safeguard: fall back to steepest descent

        double alpha = step_scale;
        bool accepted = false;
        double new_energy = energy;
        std::vector<double> candidate(n);
        for (size_t ls = 0; ls < cfg.line_search_max_evals; ++ls) {
            for (size_t i = 0; i < n; ++i)
                candidate[i] = result.theta[i] + alpha * direction(static_cast<long>(i));
            double e = executor.evaluate(candidate);
            ++rec.sequential_evaluations;
            if (!std::isfinite(e)) throw std::runtime_error("optimize: non-finite energy");
            // Armijo decrease condition
            if (e <= energy + 1e-4 * alpha * grad.dot(direction)) {
                new_energy = e;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }

        if (accepted) {
            theta_prev = Eigen::Map<Eigen::VectorXd>(result.theta.data(), static_cast<long>(n));
            grad_prev = grad;
            for (size_t i = 0; i < n; ++i)
                result.theta[i] += alpha * direction(static_cast<long>(i));
            step_scale = 1.0;
        } else {
            // No decrease within the eval cap: damp and reset curvature.
            step_scale *= 0.25;
            hinv.setIdentity();
            grad_prev.resize(0);
        }

        double delta = std::abs(new_energy - energy);
        if (accepted) energy = new_energy;

        rec.theta = result.theta;
        rec.energy = energy;
        rec.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        result.trace.push_back(rec);

        if (accepted && delta < cfg.energy_tolerance) {
            result.energy = energy;
            result.status = OptimizeStatus::Converged;
            return result;
        }
        if (rec.gradient_norm < 1e-12) {
            result.energy = energy;
            result.status = OptimizeStatus::Converged;
            return result;
        }
    }
    result.energy = energy;
    result.status = OptimizeStatus::IterationLimit;
    return result;
}

// Trace CSV: iteration, energy, grad-norm, eval counts, seconds.
inline void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& os) {
    os << "iteration,energy,gradient_norm,parallel_evaluations,sequential_evaluations,seconds\n";
    for (const auto& r : trace)
        os << r.iteration << "," << format_double(r.energy) << "," << format_double(r.gradient_norm)
           << "," << r.parallel_evaluations << "," << r.sequential_evaluations << ","
           << format_double(r.seconds) << "\n";
}

inline const char* status_name(OptimizeStatus s) {
    switch (s) {
    case OptimizeStatus::Converged: return "converged";
    case OptimizeStatus::IterationLimit: return "iteration_limit";
    case OptimizeStatus::Failed: return "failed";
    }
    return "unknown";
}

}  // namespace parvqe
