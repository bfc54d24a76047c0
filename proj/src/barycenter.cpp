// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include "aquaclust/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "aquaclust/kernels.hpp"
#include "aquaclust/parallel.hpp"
#include "aquaclust/reduce.hpp"
#include "aquaclust/sdtw.hpp"

namespace aquaclust::barycenter {

namespace {

std::size_t checked_length(const std::vector<std::vector<double>>& family) {
    if (family.empty()) throw std::invalid_argument("family must be non-empty");
    const std::size_t len = family.front().size();
    if (len == 0) throw std::invalid_argument("family members must be non-empty");
    for (const auto& member : family) {
        if (member.size() != len) {
            throw std::invalid_argument("family members must share one length");
        }
    }
    return len;
}

double inf_norm(std::span<const double> v) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::fabs(x));
    return mx;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Per-member scratch for one (x, family) evaluation: forward accumulators are
// kept so the backward pass can reuse them after a line-search trial is
// accepted.
class FamilyEval {
public:
    FamilyEval(const std::vector<std::vector<double>>& family, double gamma, std::size_t dim)
        : family_(family), gamma_(gamma), dim_(dim) {
        const std::size_t members = family.size();
        cost_.resize(members);
        acc_.resize(members);
        values_.resize(members);
        for (std::size_t l = 0; l < members; ++l) {
            cost_[l].resize(dim * family[l].size());
            acc_[l].resize((dim + 1) * (family[l].size() + 1));
        }
    }

    // forward passes only
    double value(std::span<const double> x) {
        parallel_for(family_.size(), [&](std::size_t l) {
            const auto& y = family_[l];
            kernels::cost_sq_euclid(x.data(), dim_, y.data(), y.size(), cost_[l].data());
            kernels::sdtw_forward(cost_[l].data(), dim_, y.size(), gamma_, acc_[l].data());
            values_[l] = acc_[l][dim_ * (y.size() + 1) + y.size()];
        });
        return stable_sum(values_);
    }

    // backward passes over the accumulators produced by the latest value(x)
    // call; x must be that same point
    void gradient(std::span<const double> x, std::span<double> grad) {
        const std::size_t members = family_.size();
        std::vector<double> member_grads(members * dim_);
        parallel_for(members, [&](std::size_t l) {
            const auto& y = family_[l];
            const std::size_t n = y.size();
            std::vector<double> expect(dim_ * n);
            kernels::sdtw_backward(cost_[l].data(), acc_[l].data(), dim_, n, gamma_,
                                   expect.data());
            double* g = member_grads.data() + l * dim_;
            for (std::size_t i = 0; i < dim_; ++i) {
                double gi = 0.0;
                const double* row = expect.data() + i * n;
                for (std::size_t j = 0; j < n; ++j) gi += row[j] * 2.0 * (x[i] - y[j]);
                g[i] = gi;
            }
        });
        std::vector<double> column(members);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t l = 0; l < members; ++l) column[l] = member_grads[l * dim_ + i];
            grad[i] = stable_sum(column);
        }
    }

private:
    const std::vector<std::vector<double>>& family_;
    double gamma_;
    std::size_t dim_;
    std::vector<std::vector<double>> cost_;
    std::vector<std::vector<double>> acc_;
    std::vector<double> values_;
};

}  // namespace

std::pair<double, std::vector<double>> objective(std::span<const double> x,
                                                 const std::vector<std::vector<double>>& family,
                                                 double gamma) {
    checked_length(family);
    FamilyEval eval(family, gamma, x.size());
    const double value = eval.value(x);
    std::vector<double> grad(x.size());
    eval.gradient(x, grad);
    return {value, std::move(grad)};
}

double objective_value(std::span<const double> x, const std::vector<std::vector<double>>& family,
                       double gamma) {
    checked_length(family);
    FamilyEval eval(family, gamma, x.size());
    return eval.value(x);
}

std::vector<double> euclidean_mean(const std::vector<std::vector<double>>& family) {
    const std::size_t len = checked_length(family);
    std::vector<double> mean(len);
    std::vector<double> column(family.size());
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t l = 0; l < family.size(); ++l) column[l] = family[l][i];
        mean[i] = stable_sum(column) / static_cast<double>(family.size());
    }
    return mean;
}

std::size_t medoid_index(const std::vector<std::vector<double>>& family, double gamma) {
    checked_length(family);
    const std::size_t members = family.size();
    std::vector<double> totals(members);
    parallel_for(members, [&](std::size_t i) {
        std::vector<double> dists(members);
        for (std::size_t j = 0; j < members; ++j) {
            dists[j] = sdtw::soft_dtw_value(family[i], family[j], gamma);
        }
        totals[i] = stable_sum(dists);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < members; ++i) {
        if (totals[i] < totals[best]) best = i;
    }
    return best;
}

Result compute(const std::vector<std::vector<double>>& family, std::vector<double> init,
               double gamma, const Options& opts) {
    const std::size_t len = checked_length(family);
    if (init.size() != len) {
        throw std::invalid_argument("initial center length does not match the family");
    }
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");

    const std::size_t dim = len;
    FamilyEval eval(family, gamma, dim);

    std::vector<double> x = std::move(init);
    double fx = eval.value(x);
    std::vector<double> grad(dim);
    eval.gradient(x, grad);

    // dense inverse-Hessian approximation
    std::vector<double> h(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) h[i * dim + i] = 1.0;
    bool h_scaled = false;

    std::vector<double> direction(dim);
    std::vector<double> x_trial(dim);
    std::vector<double> grad_new(dim);
    std::vector<double> s(dim);
    std::vector<double> y(dim);
    std::vector<double> hy(dim);

    constexpr double armijo_c1 = 1e-4;
    int iterations = 0;
    bool converged = inf_norm(grad) <= opts.grad_tol;

    for (int iter = 0; iter < opts.max_iter && !converged; ++iter) {
        // direction = -H * grad
        for (std::size_t i = 0; i < dim; ++i) {
            direction[i] = -dot(std::span(h).subspan(i * dim, dim), grad);
        }
        double slope = dot(grad, direction);
        if (!(slope < 0.0)) {
            // H lost positive definiteness; fall back to steepest descent
            std::fill(h.begin(), h.end(), 0.0);
            for (std::size_t i = 0; i < dim; ++i) h[i * dim + i] = 1.0;
            h_scaled = false;
            for (std::size_t i = 0; i < dim; ++i) direction[i] = -grad[i];
            slope = dot(grad, direction);
        }

        // Armijo backtracking; only strictly decreasing steps are accepted
        double alpha = 1.0;
        double f_trial = fx;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < dim; ++i) x_trial[i] = x[i] + alpha * direction[i];
            f_trial = eval.value(x_trial);
            if (!std::isfinite(f_trial)) {
                char msg[160];
                std::snprintf(msg, sizeof(msg),
                              "non-finite objective during line search (iter %d, alpha %.3g)",
                              iter, alpha);
                throw std::runtime_error(msg);
            }
            if (f_trial <= fx + armijo_c1 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;

        eval.gradient(x_trial, grad_new);
        for (std::size_t i = 0; i < dim; ++i) {
            s[i] = x_trial[i] - x[i];
            y[i] = grad_new[i] - grad[i];
        }
        x = x_trial;
        fx = f_trial;
        grad = grad_new;
        ++iterations;

        if (inf_norm(grad) <= opts.grad_tol) {
            converged = true;
            break;
        }

        const double sy = dot(s, y);
        const double yy = dot(y, y);
        if (sy > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(yy)) {
            if (!h_scaled) {
                const double scale = sy / yy;
                for (std::size_t i = 0; i < dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j) {
                        h[i * dim + j] = (i == j) ? scale : 0.0;
                    }
                }
                h_scaled = true;
            }
            // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
            const double rho = 1.0 / sy;
            for (std::size_t i = 0; i < dim; ++i) {
                hy[i] = dot(std::span(h).subspan(i * dim, dim), y);
            }
            const double yhy = dot(y, hy);
            const double coeff = (1.0 + rho * yhy) * rho;
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    h[i * dim + j] += coeff * s[i] * s[j] - rho * (s[i] * hy[j] + hy[i] * s[j]);
                }
            }
        }
    }

    Result result;
    result.center = std::move(x);
    result.objective = fx;
    result.iterations = iterations;
    result.gradient_norm = inf_norm(grad);
    result.converged = result.gradient_norm <= opts.grad_tol;
    return result;
}

Result compute(const std::vector<std::vector<double>>& family, Init init, double gamma,
               const Options& opts) {
    std::vector<double> start;
    if (init == Init::euclidean_mean) {
        start = euclidean_mean(family);
    } else {
        start = family[medoid_index(family, gamma)];
    }
    return compute(family, std::move(start), gamma, opts);
}

}  // namespace aquaclust::barycenter
