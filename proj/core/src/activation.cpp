#include "uavnet/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavnet/rng.hpp"

namespace uavnet {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double x, double a, double b) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 10.0 * kEps) break;
    }
    return h;
}

double beta_pdf(double x, double a, double b) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double ln = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                      (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    return std::exp(ln);
}

// Lower tail computed entirely in its own scale: full relative accuracy even
// when the value is far below machine epsilon.
double lower_tail(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    const double ln_front = a * std::log(x) + b * std::log1p(-x) -
                            (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    return std::exp(ln_front) * beta_cf(x, a, b) / a;
}

double cf_switch(double a, double b) { return (a + 1.0) / (a + b + 2.0); }

}  // namespace

double reg_inc_beta(double x, double kappa, double omega) {
    if (!(kappa > 0.0) || !(omega > 0.0)) {
        throw std::domain_error("reg_inc_beta: shape parameters must be positive");
    }
    if (x < 0.0 || x > 1.0) {
        throw std::domain_error("reg_inc_beta: x outside [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    // Symmetry switch keeps the continued fraction in its fast-converging region.
    if (x < cf_switch(kappa, omega)) {
        return lower_tail(x, kappa, omega);
    }
    return 1.0 - lower_tail(1.0 - x, omega, kappa);
}

double inv_reg_inc_beta(double p, double kappa, double omega) {
    if (p < 0.0 || p > 1.0) {
        throw std::domain_error("inv_reg_inc_beta: p outside [0, 1]");
    }
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    // Evaluate the residual in whichever tail is small, so the solve keeps
    // full relative resolution where the CDF saturates in double precision.
    // 1 - p is exact for p >= 0.5.
    const double q = 1.0 - p;
    const double split = cf_switch(kappa, omega);
    auto residual = [&](double x) {
        if (x < split) return lower_tail(x, kappa, omega) - p;
        return q - lower_tail(1.0 - x, omega, kappa);
    };

    double lo = 0.0;
    double hi = 1.0;
    double x = 0.5;
    for (int it = 0; it < 300 && hi - lo > 1e-15; ++it) {
        const double f = residual(x);
        if (f == 0.0) break;
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        // Newton step when it stays inside the bracket, bisection otherwise.
        const double deriv = beta_pdf(x, kappa, omega);
        double next = (deriv > 0.0) ? x - f / deriv : 0.5 * (lo + hi);
        if (!(next > lo) || !(next < hi)) {
            next = 0.5 * (lo + hi);
        }
        x = next;
    }
    return x;
}

UpdateSchedule update_times(const std::vector<double>& targets,
                            std::size_t n_devices,
                            const BetaActivation& model,
                            double horizon_s) {
    if (targets.empty() || n_devices == 0 || !(horizon_s > 0.0)) {
        throw std::invalid_argument("update_times: empty targets or bad horizon");
    }
    double cumulative = 0.0;
    for (double a : targets) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("update_times: targets must be positive");
        }
        cumulative += a;
    }
    if (cumulative > static_cast<double>(n_devices) * (1.0 + 1e-12)) {
        throw InfeasibleScheduleError("update_times: cumulative target exceeds device count");
    }

    UpdateSchedule schedule;
    schedule.targets = targets;
    schedule.times_s.reserve(targets.size());
    double cum_fraction = 0.0;
    double prev = 0.0;
    for (double a : targets) {
        cum_fraction += a / static_cast<double>(n_devices);
        if (cum_fraction > 1.0 - 1e-12) cum_fraction = 1.0;  // full coverage ends at T
        const double t = horizon_s * inv_reg_inc_beta(cum_fraction, model.kappa, model.omega);
        if (!(t > prev)) {
            throw InfeasibleScheduleError("update_times: schedule not strictly increasing");
        }
        schedule.times_s.push_back(t);
        prev = t;
    }
    return schedule;
}

std::vector<std::size_t> exact_periodic_counts(const std::vector<double>& times_s,
                                               const std::vector<double>& periods_s) {
    std::vector<std::size_t> counts(times_s.size(), 0);
    double prev = 0.0;
    for (std::size_t n = 0; n < times_s.size(); ++n) {
        const double t_minus = std::nextafter(times_s[n], 0.0);  // left limit of t_n
        std::size_t b = 0;
        for (double tau : periods_s) {
            if (std::floor(t_minus / tau) > std::floor(prev / tau)) {
                ++b;
            }
        }
        counts[n] = b;
        prev = times_s[n];
    }
    return counts;
}

std::vector<std::vector<std::size_t>> sample_active_sets(const ActivationModel& model,
                                                         const UpdateSchedule& schedule,
                                                         std::size_t n_devices,
                                                         std::uint64_t seed) {
    const std::size_t n_updates = schedule.times_s.size();
    std::vector<std::vector<std::size_t>> sets(n_updates);

    auto bucket_of = [&](double t) -> long {
        // Index n such that t in [t_{n-1}, t_n); -1 when beyond the last update.
        double prev = 0.0;
        for (std::size_t n = 0; n < n_updates; ++n) {
            if (t >= prev && t < schedule.times_s[n]) return static_cast<long>(n);
            prev = schedule.times_s[n];
        }
        return -1;
    };

    if (const auto* beta = std::get_if<BetaActivation>(&model.variant)) {
        BetaSampler sampler(beta->kappa, beta->omega);
        std::mt19937_64 gen(seed);
        for (std::size_t i = 0; i < n_devices; ++i) {
            const double t = model.horizon_s * sampler.quantile(uniform01(gen));
            const long n = bucket_of(t);
            if (n >= 0) sets[static_cast<std::size_t>(n)].push_back(i);
        }
    } else {
        const auto& periodic = std::get<PeriodicActivation>(model.variant);
        double prev = 0.0;
        for (std::size_t n = 0; n < n_updates; ++n) {
            const double t_minus = std::nextafter(schedule.times_s[n], 0.0);
            for (std::size_t i = 0; i < periodic.periods_s.size() && i < n_devices; ++i) {
                const double tau = periodic.periods_s[i];
                if (std::floor(t_minus / tau) > std::floor(prev / tau)) {
                    sets[n].push_back(i);
                }
            }
            prev = schedule.times_s[n];
        }
    }
    return sets;
}

BetaSampler::BetaSampler(double kappa, double omega, std::size_t table_size) {
    table_.resize(table_size);
    for (std::size_t i = 0; i < table_size; ++i) {
        const double p = static_cast<double>(i) / static_cast<double>(table_size - 1);
        table_[i] = inv_reg_inc_beta(p, kappa, omega);
    }
}

double BetaSampler::quantile(double p) const {
    if (p <= 0.0) return table_.front();
    if (p >= 1.0) return table_.back();
    const double scaled = p * static_cast<double>(table_.size() - 1);
    const std::size_t idx = static_cast<std::size_t>(scaled);
    const double frac = scaled - static_cast<double>(idx);
    return table_[idx] + frac * (table_[idx + 1] - table_[idx]);
}

}  // namespace uavnet
