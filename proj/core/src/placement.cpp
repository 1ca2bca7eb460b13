#include "uavnet/placement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace uavnet {

namespace {

double pow_alpha(double x, double alpha) {
    return (alpha == 2.0) ? x * x : std::pow(x, alpha);
}

double weight_of_elevation(double theta_deg, const Environment& env) {
    const double p = los_probability(theta_deg, env);
    return p * env.eta_los + (1.0 - p) * env.eta_nlos;
}

}  // namespace

double required_power(double d, double altitude_m, const Environment& env, double gamma) {
    const double dd = std::max(d, std::max(altitude_m, 1.0));
    const double theta = rad_to_deg(std::asin(std::clamp(altitude_m / dd, 0.0, 1.0)));
    return gamma * env.noise_w * weight_of_elevation(theta, env) *
           pow_alpha(env.k_o() * dd, env.pathloss_exp);
}

QuadFit fit_quadratic(double altitude_m, const Environment& env, double gamma,
                      double d_min_m, double d_max_m, int n_samples) {
    if (!(d_max_m > d_min_m) || n_samples < 3) {
        throw std::invalid_argument("fit_quadratic: empty domain");
    }
    QuadFit fit;
    fit.altitude_m = altitude_m;
    fit.d_min_m = d_min_m;
    fit.d_max_m = d_max_m;

    const std::size_t n = static_cast<std::size_t>(n_samples);
    std::vector<double> u(n), y(n);
    double su = 0.0, suu = 0.0, sy = 0.0, suy = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const double d = d_min_m + (d_max_m - d_min_m) * static_cast<double>(s) /
                                       static_cast<double>(n - 1);
        u[s] = d * d;
        y[s] = required_power(d, altitude_m, env, gamma);
        su += u[s];
        suu += u[s] * u[s];
        sy += y[s];
        suy += u[s] * y[s];
    }
    const double dn = static_cast<double>(n);
    const double det = dn * suu - su * su;
    fit.alpha1 = (dn * suy - su * sy) / det;
    fit.alpha2 = (sy - fit.alpha1 * su) / dn;

    fit.max_rel_err = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const double approx = fit.alpha1 * u[s] + fit.alpha2;
        fit.max_rel_err = std::max(fit.max_rel_err, std::fabs(approx - y[s]) / y[s]);
    }
    return fit;
}

ServiceRadius service_radius(double altitude_m, const Environment& env, double gamma,
                             double cap_w) {
    ServiceRadius out;
    const double d_lo = std::max(altitude_m, 1.0);
    if (required_power(d_lo, altitude_m, env, gamma) > cap_w) {
        return out;  // not servable even directly overhead
    }
    double hi = d_lo;
    constexpr double kMaxRadius = 1.0e9;
    while (required_power(hi, altitude_m, env, gamma) <= cap_w) {
        hi *= 2.0;
        if (hi > kMaxRadius) {
            out.feasible = true;
            out.d_m = kMaxRadius;
            return out;
        }
    }
    double lo = hi * 0.5;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (required_power(mid, altitude_m, env, gamma) <= cap_w) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.feasible = true;
    out.d_m = lo;
    return out;
}

PlacementResult qcqp_dual_place(const std::vector<Vec3>& members,
                                const std::vector<double>& caps_w,
                                double altitude_m, const Environment& env, double gamma,
                                std::vector<double>* warm_lambda) {
    if (members.empty() || members.size() != caps_w.size()) {
        throw std::invalid_argument("qcqp_dual_place: bad member set");
    }
    PlacementResult result;
    const std::size_t m = members.size();

    // Squared 2D service radii for the constrained members.
    std::vector<double> rad2(m, -1.0);  // <0: unconstrained
    for (std::size_t i = 0; i < m; ++i) {
        if (caps_w[i] <= 0.0) continue;
        const ServiceRadius sr = service_radius(altitude_m, env, gamma, caps_w[i]);
        if (!sr.feasible) {
            result.status = PlaceStatus::infeasible;
            return result;
        }
        rad2[i] = std::max(sr.d_m * sr.d_m - altitude_m * altitude_m, 0.0);
    }

    double cx = 0.0, cy = 0.0;
    for (const Vec3& p : members) {
        cx += p.x;
        cy += p.y;
    }
    cx /= static_cast<double>(m);
    cy /= static_cast<double>(m);

    // Quick certificate for pairwise-disjoint service disks.
    for (std::size_t i = 0; i < m; ++i) {
        if (rad2[i] < 0.0) continue;
        for (std::size_t j = i + 1; j < m; ++j) {
            if (rad2[j] < 0.0) continue;
            const double dx = members[i].x - members[j].x;
            const double dy = members[i].y - members[j].y;
            const double reach = std::sqrt(rad2[i]) + std::sqrt(rad2[j]);
            if (dx * dx + dy * dy > reach * reach) {
                result.status = PlaceStatus::infeasible;
                return result;
            }
        }
    }

    auto weighted_centroid = [&](const std::vector<double>& lambda, double* sx, double* sy) {
        double wsum = static_cast<double>(m);
        double x = cx * static_cast<double>(m);
        double y = cy * static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) {
            if (rad2[i] < 0.0) continue;
            wsum += lambda[i];
            x += lambda[i] * members[i].x;
            y += lambda[i] * members[i].y;
        }
        *sx = x / wsum;
        *sy = y / wsum;
    };

    auto dual_value = [&](const std::vector<double>& lambda, double sx, double sy) {
        double value = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double dx = sx - members[i].x;
            const double dy = sy - members[i].y;
            const double g = dx * dx + dy * dy;
            value += g + altitude_m * altitude_m;
            if (rad2[i] >= 0.0) value += lambda[i] * (g - rad2[i]);
        }
        return value;
    };

    std::vector<double> lambda(m, 0.0);
    if (warm_lambda != nullptr && warm_lambda->size() == m) {
        for (std::size_t i = 0; i < m; ++i) {
            lambda[i] = (rad2[i] < 0.0) ? 0.0 : std::max(0.0, (*warm_lambda)[i]);
        }
    }
    double sx = 0.0, sy = 0.0;
    weighted_centroid(lambda, &sx, &sy);

    double scale_m2 = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = cx - members[i].x;
        const double dy = cy - members[i].y;
        scale_m2 = std::max(scale_m2, dx * dx + dy * dy);
        if (rad2[i] > 0.0) scale_m2 = std::max(scale_m2, rad2[i]);
    }

    // Projected ascent with momentum; the momentum resets whenever it stops
    // paying, which keeps the iteration monotone in the dual value.
    std::vector<double> grad(m, 0.0);
    std::vector<double> lambda_prev = lambda;
    double step = 1.0 / scale_m2;
    double fval = dual_value(lambda, sx, sy);
    double momentum = 0.0;
    int iterations = 0;
    constexpr int kMaxIter = 50000;
    const double tol = 1e-10 * scale_m2;
    bool unbounded = false;

    std::vector<double> point(m, 0.0), trial(m, 0.0);
    for (; iterations < kMaxIter; ++iterations) {
        double feas = 0.0, comp = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (rad2[i] < 0.0) {
                grad[i] = 0.0;
                continue;
            }
            const double dx = sx - members[i].x;
            const double dy = sy - members[i].y;
            grad[i] = dx * dx + dy * dy - rad2[i];
            feas = std::max(feas, grad[i]);
            comp = std::max(comp, std::fabs(lambda[i] * grad[i]));
        }
        if (feas <= tol && comp <= tol) break;

        double lsum = 0.0;
        for (double l : lambda) lsum += l;
        if (lsum > 1e12 * static_cast<double>(m)) {
            unbounded = true;
            break;
        }

        double tx = 0.0, ty = 0.0, ftrial = 0.0;
        bool accepted = false;
        for (int phase = 0; phase < 2 && !accepted; ++phase) {
            const double omega = (phase == 0) ? momentum : 0.0;
            std::vector<double> pgrad = grad;
            if (omega > 0.0) {
                for (std::size_t i = 0; i < m; ++i) {
                    point[i] = (rad2[i] < 0.0)
                                   ? 0.0
                                   : std::max(0.0, lambda[i] + omega * (lambda[i] - lambda_prev[i]));
                }
                double px = 0.0, py = 0.0;
                weighted_centroid(point, &px, &py);
                for (std::size_t i = 0; i < m; ++i) {
                    if (rad2[i] < 0.0) continue;
                    const double dx = px - members[i].x;
                    const double dy = py - members[i].y;
                    pgrad[i] = dx * dx + dy * dy - rad2[i];
                }
            } else {
                point = lambda;
            }
            const int tries = (phase == 0 && momentum > 0.0) ? 2 : 60;
            for (int bt = 0; bt < tries; ++bt) {
                for (std::size_t i = 0; i < m; ++i) {
                    trial[i] = (rad2[i] < 0.0) ? 0.0 : std::max(0.0, point[i] + step * pgrad[i]);
                }
                weighted_centroid(trial, &tx, &ty);
                ftrial = dual_value(trial, tx, ty);
                if (ftrial >= fval - 1e-15 * std::fabs(fval)) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) momentum = 0.0;
        }
        if (!accepted) break;
        lambda_prev = lambda;
        lambda.swap(trial);
        sx = tx;
        sy = ty;
        fval = ftrial;
        step *= 1.3;
        momentum = std::min(0.95, momentum + 0.25);
    }

    if (unbounded) {
        result.status = PlaceStatus::infeasible;
        return result;
    }
    // Certify primal feasibility at the dual solution.
    for (std::size_t i = 0; i < m; ++i) {
        if (rad2[i] < 0.0) continue;
        const double dx = sx - members[i].x;
        const double dy = sy - members[i].y;
        if (dx * dx + dy * dy - rad2[i] > 1e-6 * scale_m2) {
            result.status = PlaceStatus::infeasible;
            return result;
        }
    }

    result.status = PlaceStatus::ok;
    result.position = Vec3{sx, sy, altitude_m};
    result.dual_vars = lambda;
    result.iterations = iterations;
    result.objective_w = 0.0;
    for (const Vec3& p : members) {
        result.objective_w += required_power(distance(p, result.position), altitude_m, env, gamma);
    }
    return result;
}

AltitudeSearch optimal_altitude(const std::vector<Vec3>& members,
                                const std::vector<double>& caps_w,
                                const Environment& env, double gamma,
                                const std::vector<double>& h_grid_m,
                                double fit_radius_m) {
    if (h_grid_m.empty()) {
        throw std::invalid_argument("optimal_altitude: empty altitude grid");
    }
    double cx = 0.0, cy = 0.0;
    for (const Vec3& p : members) {
        cx += p.x;
        cy += p.y;
    }
    cx /= static_cast<double>(members.size());
    cy /= static_cast<double>(members.size());

    AltitudeSearch best;
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<double> warm;  // multipliers carry over between altitudes
    for (double h : h_grid_m) {
        PlacementResult res = qcqp_dual_place(members, caps_w, h, env, gamma, &warm);
        if (res.status != PlaceStatus::ok) continue;
        warm = res.dual_vars;
        const double d_lo = std::max(h, 1.0);
        const double d_hi = std::sqrt(h * h + fit_radius_m * fit_radius_m) + 1.0;
        const QuadFit fit = fit_quadratic(h, env, gamma, d_lo, d_hi);
        const double dx = res.position.x - cx;
        const double dy = res.position.y - cy;
        const double score = fit.alpha1 * (h * h + dx * dx + dy * dy) + fit.alpha2;
        if (score < best_score) {
            best_score = score;
            best.feasible = true;
            best.h_star_m = h;
            best.placement = res;
            best.fit = fit;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// SQP placement for the interference case
// ---------------------------------------------------------------------------

namespace {

struct LossEval {
    double value = 0.0;
    std::array<double, 3> grad{};  // d/dx, d/dy, d/dh
};

// Average path loss toward a UAV at v and its gradient in v.
LossEval avg_loss_with_grad(const Vec3& ground, const Vec3& v, const Environment& env) {
    LossEval out;
    const double dx = v.x - ground.x;
    const double dy = v.y - ground.y;
    const double dh = v.h - ground.h;
    const double d = std::sqrt(dx * dx + dy * dy + dh * dh);
    const double r = std::max(std::sqrt(dx * dx + dy * dy), 1e-6);
    const double d_eff = std::max(d, 1.0);

    const double theta = rad_to_deg(std::asin(std::clamp(dh / std::max(d, 1e-12), -1.0, 1.0)));
    const double p = los_probability(theta, env);
    const double d_eta = env.eta_nlos - env.eta_los;
    const double w = env.eta_nlos - d_eta * p;
    const double alpha = env.pathloss_exp;
    const double ko = env.k_o();
    const double dist_pow = pow_alpha(ko * d_eff, alpha);

    out.value = w * dist_pow;

    // dtheta/dv (degrees): e_h / r - dh * (v - u) / (r d^2)
    const double deg = 180.0 / kPi;
    std::array<double, 3> dtheta = {
        deg * (-dh * dx / (r * d * d)),
        deg * (-dh * dy / (r * d * d)),
        deg * (1.0 / r - dh * dh / (r * d * d)),
    };
    const double dw_dtheta = -d_eta * env.beta_env * p * (1.0 - p);
    const double dist_term = (d > 1.0) ? w * alpha * dist_pow / d : 0.0;
    const std::array<double, 3> ddist = {dx / std::max(d, 1e-12), dy / std::max(d, 1e-12),
                                         dh / std::max(d, 1e-12)};
    for (int k = 0; k < 3; ++k) {
        out.grad[k] = dist_pow * dw_dtheta * dtheta[k] + dist_term * ddist[k];
    }
    return out;
}

// Small dense convex QP: min g'd + 1/2 d'H d  s.t.  A d <= b, solved with a
// primal-dual interior-point iteration. Rows are normalized by the caller.
struct QpSolution {
    bool ok = false;
    Eigen::Vector3d step = Eigen::Vector3d::Zero();
    Eigen::VectorXd duals;
};

QpSolution solve_qp(const Eigen::Matrix3d& H, const Eigen::Vector3d& g,
                    const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    QpSolution sol;
    const int m = static_cast<int>(A.rows());
    if (m == 0) {
        sol.step = H.ldlt().solve(-g);
        sol.ok = true;
        sol.duals = Eigen::VectorXd();
        return sol;
    }

    Eigen::Vector3d d = Eigen::Vector3d::Zero();
    Eigen::VectorXd s(m), z(m);
    for (int i = 0; i < m; ++i) {
        s(i) = std::max(1.0, b(i) + 1.0);
        z(i) = 1.0;
    }

    const double gscale = std::max({1.0, g.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    for (int iter = 0; iter < 80; ++iter) {
        const Eigen::Vector3d r_d = H * d + g + A.transpose() * z;
        const Eigen::VectorXd r_p = A * d + s - b;
        const double mu = s.dot(z) / m;
        if (r_d.cwiseAbs().maxCoeff() < 1e-12 * gscale &&
            r_p.cwiseAbs().maxCoeff() < 1e-12 * gscale && mu < 1e-13 * gscale) {
            break;
        }
        const double sigma = 0.2;
        const Eigen::VectorXd r_c = s.cwiseProduct(z).array() - sigma * mu;

        Eigen::Matrix3d M = H;
        Eigen::Vector3d rhs = -r_d;
        for (int i = 0; i < m; ++i) {
            const double w = z(i) / s(i);
            M += w * A.row(i).transpose() * A.row(i);
            rhs -= A.row(i).transpose() * ((z(i) * r_p(i) - r_c(i)) / s(i));
        }
        const Eigen::Vector3d dd = M.ldlt().solve(rhs);
        const Eigen::VectorXd ds = -r_p - A * dd;
        Eigen::VectorXd dz(m);
        for (int i = 0; i < m; ++i) {
            dz(i) = (-r_c(i) - z(i) * ds(i)) / s(i);
        }

        double step_len = 1.0;
        for (int i = 0; i < m; ++i) {
            if (ds(i) < 0.0) step_len = std::min(step_len, -0.995 * s(i) / ds(i));
            if (dz(i) < 0.0) step_len = std::min(step_len, -0.995 * z(i) / dz(i));
        }
        d += step_len * dd;
        s += step_len * ds;
        z += step_len * dz;
    }
    sol.ok = true;
    sol.step = d;
    sol.duals = z;
    return sol;
}

}  // namespace

namespace detail {

void objective_terms(const SqpProblem& problem, const Vec3& v, const Environment& env,
                     double gamma, std::vector<double>* values,
                     std::vector<std::array<double, 3>>* gradients) {
    const std::size_t m = problem.members.size();
    values->assign(m, 0.0);
    if (gradients != nullptr) {
        gradients->assign(m, {0.0, 0.0, 0.0});
    }
    for (std::size_t i = 0; i < m; ++i) {
        const LossEval own = avg_loss_with_grad(problem.members[i], v, env);
        double interference = env.noise_w;
        std::array<double, 3> d_interf{};
        for (std::size_t k = 0; k < problem.interferer_pos[i].size(); ++k) {
            const LossEval lk = avg_loss_with_grad(problem.interferer_pos[i][k], v, env);
            const double pw = problem.interferer_pw[i][k];
            interference += pw / lk.value;
            for (int c = 0; c < 3; ++c) {
                d_interf[c] -= pw * lk.grad[c] / (lk.value * lk.value);
            }
        }
        (*values)[i] = gamma * own.value * interference;
        if (gradients != nullptr) {
            for (int c = 0; c < 3; ++c) {
                (*gradients)[i][c] =
                    gamma * (own.grad[c] * interference + own.value * d_interf[c]);
            }
        }
    }
}

}  // namespace detail

PlacementResult sqp_place(const SqpProblem& problem, const Vec3& start,
                          const Environment& env, double gamma, const SqpOptions& opts) {
    const std::size_t m = problem.members.size();
    if (m == 0 || problem.interferer_pos.size() != m || problem.interferer_pw.size() != m ||
        problem.caps_w.size() != m) {
        throw std::invalid_argument("sqp_place: inconsistent problem");
    }

    Vec3 v = start;
    v.h = std::clamp(v.h, opts.h_lo_m, opts.h_hi_m);

    std::vector<double> f0;
    std::vector<std::array<double, 3>> g0;
    detail::objective_terms(problem, v, env, gamma, &f0, &g0);
    double start_total = 0.0;
    for (double f : f0) start_total += f;
    const double f_scale = std::max(start_total, 1e-300);

    auto eval = [&](const Vec3& at, std::vector<double>* vals,
                    std::vector<std::array<double, 3>>* grads) {
        detail::objective_terms(problem, at, env, gamma, vals, grads);
        for (double& x : *vals) x /= f_scale;
        if (grads != nullptr) {
            for (auto& g : *grads) {
                for (int c = 0; c < 3; ++c) g[c] /= f_scale;
            }
        }
    };

    std::vector<double> caps(m);
    std::vector<bool> constrained(m);
    for (std::size_t i = 0; i < m; ++i) {
        constrained[i] = problem.caps_w[i] > 0.0;
        caps[i] = constrained[i] ? problem.caps_w[i] / f_scale : 0.0;
    }

    std::vector<double> fv;
    std::vector<std::array<double, 3>> gv;
    eval(v, &fv, &gv);

    auto total_of = [](const std::vector<double>& vals) {
        double t = 0.0;
        for (double x : vals) t += x;
        return t;
    };
    auto violation_of = [&](const std::vector<double>& vals) {
        double viol = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (constrained[i]) viol += std::max(0.0, vals[i] - caps[i]);
        }
        return viol;
    };

    std::vector<double> lambda(m, 0.0);
    double merit_mu = 1.0;
    PlacementResult result;
    result.position = v;
    int iter = 0;
    bool made_step = false;
    bool kkt_met = false;
    // A pinned altitude drops the vertical direction from the subproblem.
    const bool fixed_altitude = (opts.h_hi_m - opts.h_lo_m) < 1e-9;

    for (; iter < opts.max_iterations; ++iter) {
        // KKT residual on the scaled problem.
        Eigen::Vector3d grad_obj = Eigen::Vector3d::Zero();
        for (const auto& g : gv) grad_obj += Eigen::Vector3d(g[0], g[1], g[2]);
        if (fixed_altitude) grad_obj(2) = 0.0;
        Eigen::Vector3d grad_lag = grad_obj;
        double feas = 0.0, comp = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!constrained[i]) continue;
            Eigen::Vector3d gi(gv[i][0], gv[i][1], gv[i][2]);
            if (fixed_altitude) gi(2) = 0.0;
            grad_lag += lambda[i] * gi;
            feas = std::max(feas, fv[i] - caps[i]);
            comp = std::max(comp, std::fabs(lambda[i] * (fv[i] - caps[i])));
        }
        const double kkt_scale = 1.0 + grad_obj.cwiseAbs().maxCoeff();
        if (grad_lag.cwiseAbs().maxCoeff() <= opts.kkt_tol * kkt_scale &&
            feas <= opts.kkt_tol && comp <= opts.kkt_tol) {
            kkt_met = true;
            break;
        }

        // Lagrangian Hessian by central differences of the gradient.
        const double h_fd = 1e-2;
        Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
        for (int c = 0; c < 3; ++c) {
            Vec3 vp = v, vm = v;
            (c == 0 ? vp.x : c == 1 ? vp.y : vp.h) += h_fd;
            (c == 0 ? vm.x : c == 1 ? vm.y : vm.h) -= h_fd;
            std::vector<double> fp, fm;
            std::vector<std::array<double, 3>> gp, gm;
            eval(vp, &fp, &gp);
            eval(vm, &fm, &gm);
            for (int r = 0; r < 3; ++r) {
                double gpl = 0.0, gml = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double w = 1.0 + (constrained[i] ? lambda[i] : 0.0);
                    gpl += w * gp[i][r];
                    gml += w * gm[i][r];
                }
                H(r, c) = (gpl - gml) / (2.0 * h_fd);
            }
        }
        H = 0.5 * (H + H.transpose()).eval();
        if (fixed_altitude) {
            H.row(2).setZero();
            H.col(2).setZero();
            H(2, 2) = 1.0;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(H);
        const double lam_min = eig.eigenvalues().minCoeff();
        if (lam_min < 1e-12) {
            H += (std::fabs(std::min(lam_min, 0.0)) + 1e-6) * Eigen::Matrix3d::Identity();
        }

        // Linearized constraints: member caps, altitude box, trust bounds.
        std::vector<Eigen::Vector3d> rows;
        std::vector<double> rhs;
        std::vector<int> member_row(m, -1);
        for (std::size_t i = 0; i < m; ++i) {
            if (!constrained[i]) continue;
            member_row[i] = static_cast<int>(rows.size());
            Eigen::Vector3d gi(gv[i][0], gv[i][1], gv[i][2]);
            if (fixed_altitude) gi(2) = 0.0;
            rows.push_back(gi);
            rhs.push_back(caps[i] - fv[i]);
        }
        if (!fixed_altitude) {
            rows.emplace_back(0.0, 0.0, 1.0);
            rhs.push_back(opts.h_hi_m - v.h);
            rows.emplace_back(0.0, 0.0, -1.0);
            rhs.push_back(v.h - opts.h_lo_m);
        }
        const int free_dims = fixed_altitude ? 2 : 3;
        for (int c = 0; c < free_dims; ++c) {
            Eigen::Vector3d e = Eigen::Vector3d::Zero();
            e(c) = 1.0;
            rows.push_back(e);
            rhs.push_back(opts.max_step_m);
            rows.push_back(-e);
            rhs.push_back(opts.max_step_m);
        }

        // Normalize rows and drop constraints unreachable inside the trust
        // region; slack-by-miles rows only poison the subproblem scaling.
        const double reach = 2.0 * opts.max_step_m * std::sqrt(3.0);
        std::vector<int> kept;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            double nrm = rows[r].norm();
            if (nrm < 1e-14) continue;
            if (rhs[r] / nrm > reach) continue;
            kept.push_back(static_cast<int>(r));
        }
        Eigen::MatrixXd A(kept.size(), 3);
        Eigen::VectorXd b(kept.size());
        std::vector<double> row_norm(rows.size(), 1.0);
        std::vector<int> qp_row(rows.size(), -1);
        for (std::size_t k = 0; k < kept.size(); ++k) {
            const auto r = static_cast<std::size_t>(kept[k]);
            const double nrm = rows[r].norm();
            row_norm[r] = nrm;
            qp_row[r] = static_cast<int>(k);
            A.row(static_cast<Eigen::Index>(k)) = rows[r].transpose() / nrm;
            b(static_cast<Eigen::Index>(k)) = rhs[r] / nrm;
        }

        const QpSolution qp = solve_qp(H, grad_obj, A, b);
        if (!qp.ok || !qp.step.allFinite()) break;
        const Eigen::Vector3d delta = qp.step;
        if (delta.norm() < 1e-10 * (1.0 + std::fabs(v.x) + std::fabs(v.y) + v.h)) break;

        for (std::size_t i = 0; i < m; ++i) {
            lambda[i] = 0.0;
            if (member_row[i] < 0) continue;
            const int k = qp_row[static_cast<std::size_t>(member_row[i])];
            if (k >= 0) {
                lambda[i] = qp.duals(k) / row_norm[static_cast<std::size_t>(member_row[i])];
            }
        }
        double max_dual = 0.0;
        for (double l : lambda) max_dual = std::max(max_dual, l);
        merit_mu = std::max({merit_mu, 2.0 * max_dual, 1.0});

        const double merit0 = total_of(fv) + merit_mu * violation_of(fv);
        const double descent = grad_obj.dot(delta) - merit_mu * violation_of(fv);
        double alpha = 1.0;
        bool accepted = false;
        std::vector<double> ft;
        std::vector<std::array<double, 3>> gt;
        Vec3 vt;
        for (int ls = 0; ls < 40; ++ls) {
            vt = Vec3{v.x + alpha * delta(0), v.y + alpha * delta(1),
                      std::clamp(v.h + alpha * delta(2), opts.h_lo_m, opts.h_hi_m)};
            eval(vt, &ft, &gt);
            const double merit_t = total_of(ft) + merit_mu * violation_of(ft);
            if (merit_t <= merit0 + 1e-4 * alpha * std::min(descent, 0.0)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
        v = vt;
        fv = ft;
        gv = gt;
        made_step = true;
    }

    // Accept only genuine, feasible descent from the start point.
    std::vector<double> final_vals;
    detail::objective_terms(problem, v, env, gamma, &final_vals, nullptr);
    double final_total = 0.0;
    bool final_ok = true;
    for (std::size_t i = 0; i < m; ++i) {
        final_total += final_vals[i];
        if (problem.caps_w[i] > 0.0 &&
            final_vals[i] > problem.caps_w[i] * (1.0 + 1e-6) + 1e-18) {
            final_ok = false;
        }
    }
    if (!final_ok || final_total > start_total * (1.0 + 1e-12)) {
        result.status = PlaceStatus::no_progress;
        result.position = start;
        result.objective_w = start_total;
        result.iterations = iter;
        return result;
    }
    result.status = (made_step || kkt_met) ? PlaceStatus::ok : PlaceStatus::no_progress;
    if (!made_step) result.position = start;
    else result.position = v;
    result.objective_w = final_total;
    result.iterations = iter;
    result.dual_vars = lambda;
    return result;
}

double place_all(std::vector<Vec3>& uavs, const std::vector<Vec3>& devices,
                 const ChannelMap& map, PowerSolution& sol,
                 const std::vector<double>& caps_w, const Environment& env,
                 double gamma, double p_max_w, const PlaceAllOptions& opts) {
    const std::size_t n_dev = devices.size();
    if (caps_w.size() != n_dev) {
        throw std::invalid_argument("place_all: caps/device size mismatch");
    }
    auto total_power = [&]() {
        double t = 0.0;
        for (double p : sol.power_w) t += p;
        return t;
    };
    double prev_total = total_power();
    const bool interference_free = (map.n_clusters <= 1);

    std::vector<char> reseed_taken(n_dev, 0);
    for (std::size_t j = 0; j < uavs.size(); ++j) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n_dev; ++i) {
            if (sol.assoc[i] == static_cast<int>(j)) members.push_back(i);
        }
        if (members.empty()) {
            // Idle UAV: park it over the most expensive device so the next
            // association round can split that load. Serving sets and powers
            // are untouched, so the move cannot raise the total.
            std::size_t target = n_dev;
            for (std::size_t i = 0; i < n_dev; ++i) {
                if (reseed_taken[i]) continue;
                if (target == n_dev || sol.power_w[i] > sol.power_w[target]) target = i;
            }
            if (target < n_dev) {
                reseed_taken[target] = 1;
                uavs[j] = Vec3{devices[target].x, devices[target].y,
                               0.5 * (opts.h_lo_m + opts.h_hi_m)};
            }
            continue;
        }

        if (interference_free) {
            std::vector<Vec3> pos;
            std::vector<double> caps;
            double cx = 0.0, cy = 0.0;
            for (std::size_t i : members) {
                pos.push_back(devices[i]);
                caps.push_back(sol.served[i] ? caps_w[i] : 0.0);
                cx += devices[i].x;
                cy += devices[i].y;
            }
            cx /= static_cast<double>(members.size());
            cy /= static_cast<double>(members.size());

            double band_lo = opts.h_lo_m;
            double band_hi = std::min(opts.h_hi_m, altitude_upper_bound(env, gamma, p_max_w));
            for (std::size_t i : members) {
                const AltitudeBand ab = altitude_bounds(devices[i], cx, cy, env, gamma, p_max_w);
                if (ab.feasible) band_lo = std::max(band_lo, ab.h_min_m);
            }
            if (!(band_hi > band_lo)) {
                band_lo = opts.h_lo_m;
                band_hi = opts.h_hi_m;
            }
            std::vector<double> grid;
            const int pts = std::max(opts.h_grid_points, 1);
            for (int s = 0; s < pts; ++s) {
                grid.push_back(pts == 1 ? band_lo
                                        : band_lo + (band_hi - band_lo) * s / (pts - 1));
            }
            double fit_r = opts.fit_radius_m;
            for (std::size_t i : members) {
                fit_r = std::max(fit_r, std::hypot(devices[i].x - cx, devices[i].y - cy));
            }
            const AltitudeSearch search =
                optimal_altitude(pos, caps, env, gamma, grid, fit_r);
            if (search.feasible) {
                const Vec3 cand = search.placement.position;
                bool ok = true;
                double old_recorded = 0.0, new_recorded = 0.0;
                std::vector<double> new_power(members.size());
                for (std::size_t k = 0; k < members.size(); ++k) {
                    const std::size_t i = members[k];
                    const double need = gamma * env.noise_w * avg_path_loss(devices[i], cand, env);
                    new_power[k] = need;
                    if (sol.served[i] && need > caps_w[i] * (1.0 + 1e-9) + 1e-21) {
                        ok = false;
                        break;
                    }
                    old_recorded += sol.power_w[i];
                    new_recorded += std::min(need, p_max_w);
                }
                if (ok && new_recorded > old_recorded * (1.0 + 1e-12) + 1e-21) ok = false;
                if (ok) {
                    uavs[j] = cand;
                    for (std::size_t k = 0; k < members.size(); ++k) {
                        const std::size_t i = members[k];
                        if (new_power[k] <= p_max_w * (1.0 + 1e-9)) {
                            sol.power_w[i] = std::min(new_power[k], p_max_w);
                            sol.served[i] = 1;
                        } else {
                            sol.power_w[i] = p_max_w;
                            sol.served[i] = 0;
                        }
                    }
                }
            }
        } else {
            SqpProblem problem;
            for (std::size_t i : members) {
                problem.members.push_back(devices[i]);
                problem.caps_w.push_back(sol.served[i] ? caps_w[i] : 0.0);
                std::vector<Vec3> ipos;
                std::vector<double> ipw;
                for (std::size_t k : interference_set(i, map)) {
                    ipos.push_back(devices[k]);
                    ipw.push_back(sol.power_w[k]);
                }
                problem.interferer_pos.push_back(std::move(ipos));
                problem.interferer_pw.push_back(std::move(ipw));
            }
            SqpOptions sqp_opts = opts.sqp;
            sqp_opts.h_lo_m = opts.h_lo_m;
            sqp_opts.h_hi_m = opts.h_hi_m;
            const PlacementResult res = sqp_place(problem, uavs[j], env, gamma, sqp_opts);
            if (res.status == PlaceStatus::ok) {
                std::vector<double> needs;
                detail::objective_terms(problem, res.position, env, gamma, &needs, nullptr);
                bool ok = true;
                double old_recorded = 0.0, new_recorded = 0.0;
                for (std::size_t k = 0; k < members.size(); ++k) {
                    const std::size_t i = members[k];
                    if (sol.served[i] && needs[k] > caps_w[i] * (1.0 + 1e-6) + 1e-21) {
                        ok = false;
                        break;
                    }
                    old_recorded += sol.power_w[i];
                    new_recorded += std::min(needs[k], p_max_w);
                }
                // Per-member slack must never lift the recorded total.
                if (ok && new_recorded <= old_recorded * (1.0 + 1e-12) + 1e-21) {
                    uavs[j] = res.position;
                    for (std::size_t k = 0; k < members.size(); ++k) {
                        const std::size_t i = members[k];
                        if (needs[k] <= p_max_w * (1.0 + 1e-9)) {
                            sol.power_w[i] = std::min(needs[k], p_max_w);
                            sol.served[i] = 1;
                        } else {
                            sol.power_w[i] = p_max_w;
                            sol.served[i] = 0;
                        }
                    }
                }
            }
        }

        const double now = total_power();
        if (now > prev_total * (1.0 + 1e-9) + 1e-18) {
            throw std::logic_error("place_all: total power increased during sweep");
        }
        prev_total = now;
    }
    return prev_total;
}

}  // namespace uavnet
