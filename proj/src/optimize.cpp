#include "pulseorigin/optimize.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pulseorigin/characterize.hpp"
#include "pulseorigin/dynamics.hpp"
#include "pulseorigin/errors.hpp"
#include "pulseorigin/lbfgs.hpp"
#include "pulseorigin/parallel.hpp"
#include "pulseorigin/sequence.hpp"

namespace pulseorigin {

namespace {

constexpr Complex kI{0.0, 1.0};

// <target| row for the fidelity: (  <g| + i e^{-i m delta} <e|  ) / sqrt(2).
// The i absorbs the resonant pi/2 phase so an ideal beamsplitter scores 1.
Eigen::RowVector2cd target_row(double delta, double m_target) {
    Eigen::RowVector2cd row;
    row(0) = 1.0 / std::numbers::sqrt2;
    row(1) = kI * std::exp(-kI * (m_target * delta)) / std::numbers::sqrt2;
    return row;
}

struct PointGrad {
    double f = 0.0;
    std::vector<double> grad;  // dF/damp per slice
};

// Fidelity and its exact amplitude gradient at one (delta, eps) point.
PointGrad point_fidelity_gradient(const std::vector<double>& amps, double dt, double delta,
                                  double eps, double m_target) {
    const std::size_t m = amps.size();
    std::vector<Vec2> fwd(m + 1);
    fwd[0] = Vec2(1.0, 0.0);
    std::vector<Mat2> props(m);
    for (std::size_t n = 0; n < m; ++n) {
        props[n] = slice_propagator({(1.0 + eps) * amps[n], 0.0, -delta}, dt);
        fwd[n + 1] = props[n] * fwd[n];
    }

    const Eigen::RowVector2cd chi = target_row(delta, m_target);
    std::vector<Eigen::RowVector2cd> bwd(m + 1);
    bwd[m] = chi;
    for (std::size_t n = m; n-- > 0;) bwd[n] = bwd[n + 1] * props[n];

    const Complex z = bwd[0] * fwd[0];
    PointGrad out;
    out.f = std::norm(z);
    out.grad.resize(m);
    for (std::size_t n = 0; n < m; ++n) {
        const Mat2 du =
            (1.0 + eps) * slice_propagator_damp((1.0 + eps) * amps[n], delta, dt);
        const Complex dz = bwd[n + 1] * (du * fwd[n]);
        out.grad[n] = 2.0 * std::real(std::conj(z) * dz);
    }
    return out;
}

double point_fidelity(const std::vector<double>& amps, double dt, double delta, double eps,
                      double m_target) {
    const std::size_t m = amps.size();
    Vec2 psi(1.0, 0.0);
    for (std::size_t n = 0; n < m; ++n)
        psi = slice_propagator({(1.0 + eps) * amps[n], 0.0, -delta}, dt) * psi;
    const Complex z = target_row(delta, m_target) * psi;
    return std::norm(z);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = 0.5 * (lo + hi);
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

// Normalized per-point ensemble weights over the (delta, eps) grid.
std::vector<double> ensemble_weights(const OptimizationConfig& cfg) {
    const auto deltas = cfg.delta_grid();
    const std::size_t n_eps = static_cast<std::size_t>(cfg.n_eps);
    std::vector<double> w(deltas.size() * n_eps, 1.0);
    if (cfg.delta_weight_sigma > 0.0) {
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            const double x = deltas[i] / cfg.delta_weight_sigma;
            const double wd = std::max(std::exp(-0.5 * x * x), cfg.delta_weight_floor);
            for (std::size_t j = 0; j < n_eps; ++j) w[i * n_eps + j] = wd;
        }
    }
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    return w;
}

}  // namespace

double OptimizationConfig::t_pi() const { return std::numbers::pi / omega0; }

int OptimizationConfig::n_slices() const {
    const double n = duration_tpi * slices_per_tpi;
    const int rounded = static_cast<int>(std::lround(n));
    if (std::abs(n - rounded) > 1e-9)
        throw InvalidInput("optimization: duration_tpi * slices_per_tpi must be integral");
    return rounded;
}

void OptimizationConfig::set_origin_fraction(double fraction) {
    m_target = (fraction - 1.0) * duration();
}

double OptimizationConfig::origin_fraction() const { return 1.0 + m_target / duration(); }

std::vector<double> OptimizationConfig::delta_grid() const {
    return linspace(-delta_range * omega0, delta_range * omega0, n_delta);
}

std::vector<double> OptimizationConfig::eps_grid() const {
    return linspace(-eps_range, eps_range, n_eps);
}

void OptimizationConfig::validate() const {
    if (!(omega0 > 0.0)) throw InvalidInput("optimization: omega0 must be positive");
    if (!(duration_tpi > 0.0)) throw InvalidInput("optimization: duration must be positive");
    if (slices_per_tpi < 1) throw InvalidInput("optimization: slices_per_tpi must be >= 1");
    if (n_delta < 1 || n_eps < 1) throw InvalidInput("optimization: empty ensemble");
    if (max_iterations < 0) throw InvalidInput("optimization: negative iteration cap");
    n_slices();
}

double fidelity(const Waveform& w, double delta, double eps, double m_target) {
    w.validate();
    return point_fidelity(w.slices, w.dt, delta, eps, m_target);
}

double ensemble_fidelity(const Waveform& w, const OptimizationConfig& cfg) {
    w.validate();
    const auto deltas = cfg.delta_grid();
    const auto epss = cfg.eps_grid();
    const auto weights = ensemble_weights(cfg);
    const std::size_t total = deltas.size() * epss.size();
    std::vector<double> values(total);
    parallel_for(total, [&](std::size_t i) {
        const double d = deltas[i / epss.size()];
        const double e = epss[i % epss.size()];
        values[i] = point_fidelity(w.slices, w.dt, d, e, cfg.m_target);
    });
    double sum = 0.0;
    for (std::size_t i = 0; i < total; ++i) sum += weights[i] * values[i];
    return sum;
}

std::vector<double> ensemble_fidelity_gradient(const Waveform& w,
                                               const OptimizationConfig& cfg) {
    w.validate();
    const auto deltas = cfg.delta_grid();
    const auto epss = cfg.eps_grid();
    const auto weights = ensemble_weights(cfg);
    const std::size_t total = deltas.size() * epss.size();
    std::vector<PointGrad> parts(total);
    parallel_for(total, [&](std::size_t i) {
        const double d = deltas[i / epss.size()];
        const double e = epss[i % epss.size()];
        parts[i] = point_fidelity_gradient(w.slices, w.dt, d, e, cfg.m_target);
    });
    std::vector<double> grad(w.size(), 0.0);
    for (std::size_t i = 0; i < total; ++i)
        for (std::size_t n = 0; n < grad.size(); ++n) grad[n] += weights[i] * parts[i].grad[n];
    return grad;
}

Waveform random_initial_waveform(const OptimizationConfig& cfg) {
    cfg.validate();
    const int m = cfg.n_slices();
    std::mt19937_64 rng(cfg.rng_seed);
    std::vector<double> raw(static_cast<std::size_t>(m));
    for (double& v : raw) {
        // uniform in [-0.5, 0.5) * omega0 from the top 53 bits
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v = (u - 0.5) * cfg.omega0;
    }
    // one pass of 3-slice moving average
    Waveform w;
    w.slices.resize(raw.size());
    for (std::size_t n = 0; n < raw.size(); ++n) {
        double sum = raw[n];
        int count = 1;
        if (n > 0) sum += raw[n - 1], ++count;
        if (n + 1 < raw.size()) sum += raw[n + 1], ++count;
        w.slices[n] = sum / count;
    }
    w.dt = cfg.dt();
    w.omega0 = cfg.omega0;
    w.label = "random-seed-" + std::to_string(cfg.rng_seed);
    return w;
}

OptimizationResult optimize_beamsplitter(const OptimizationConfig& cfg,
                                         const std::optional<Waveform>& initial) {
    cfg.validate();
    Waveform w = initial ? *initial : random_initial_waveform(cfg);
    if (static_cast<int>(w.size()) != cfg.n_slices())
        throw InvalidInput("optimize_beamsplitter: initial waveform slice count mismatch");
    const std::size_t m = w.size();
    const double omega0 = cfg.omega0;

    const auto deltas = cfg.delta_grid();
    const auto epss = cfg.eps_grid();
    const auto weights = ensemble_weights(cfg);
    const std::size_t total = deltas.size() * epss.size();

    // Variables are slice amplitudes in units of omega0.
    auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) -> double {
        std::vector<double> amps(m);
        for (std::size_t n = 0; n < m; ++n) amps[n] = x(n) * omega0;

        std::vector<PointGrad> parts(total);
        parallel_for(total, [&](std::size_t i) {
            const double d = deltas[i / epss.size()];
            const double e = epss[i % epss.size()];
            parts[i] = point_fidelity_gradient(amps, w.dt, d, e, cfg.m_target);
        });
        double f_mean = 0.0;
        std::vector<double> g_mean(m, 0.0);
        for (std::size_t i = 0; i < total; ++i) {
            f_mean += weights[i] * parts[i].f;
            for (std::size_t n = 0; n < m; ++n) g_mean[n] += weights[i] * parts[i].grad[n];
        }

        double value = 1.0 - f_mean;
        grad.resize(static_cast<Eigen::Index>(m));
        for (std::size_t n = 0; n < m; ++n) grad(n) = -g_mean[n] * omega0;

        // Smoothness penalty on neighbouring slice differences.
        const double ws = cfg.smoothness_weight;
        for (std::size_t n = 0; n + 1 < m; ++n) {
            const double d = x(n + 1) - x(n);
            value += ws * d * d;
            grad(n + 1) += 2.0 * ws * d;
            grad(n) -= 2.0 * ws * d;
        }
        // Peak penalty above |amp| = omega0.
        const double wp = cfg.peak_weight;
        for (std::size_t n = 0; n < m; ++n) {
            const double excess = std::abs(x(n)) - 1.0;
            if (excess > 0.0) {
                value += wp * excess * excess;
                grad(n) += 2.0 * wp * excess * (x(n) > 0.0 ? 1.0 : -1.0);
            }
        }
        return value;
    };

    Eigen::VectorXd x0(static_cast<Eigen::Index>(m));
    for (std::size_t n = 0; n < m; ++n) x0(n) = w.slices[n] / omega0;

    LbfgsOptions lopt;
    lopt.max_iterations = cfg.max_iterations;
    const LbfgsResult lres = lbfgs_minimize(objective, x0, lopt);

    OptimizationResult res;
    res.waveform = w;
    for (std::size_t n = 0; n < m; ++n) res.waveform.slices[n] = lres.x(n) * omega0;
    res.waveform.label = "optimized";
    res.iterations_used = lres.iterations;
    res.converged = lres.converged;
    res.deltas = deltas;
    res.epss = epss;
    res.fidelity_map.resize(total);
    parallel_for(total, [&](std::size_t i) {
        const double d = deltas[i / epss.size()];
        const double e = epss[i % epss.size()];
        res.fidelity_map[i] =
            point_fidelity(res.waveform.slices, w.dt, d, e, cfg.m_target);
    });
    double mean = 0.0;
    for (std::size_t i = 0; i < total; ++i) mean += weights[i] * res.fidelity_map[i];
    res.terminal_infidelity = 1.0 - mean;
    res.pulse_area = res.waveform.area();
    return res;
}

std::vector<SweepCell> batch_sweep(const std::vector<double>& durations_tpi,
                                   const std::vector<double>& origin_fractions,
                                   int seeds_per_cell, const OptimizationConfig& base) {
    std::vector<SweepCell> cells;
    for (double dur : durations_tpi) {
        for (double frac : origin_fractions) {
            for (int s = 0; s < seeds_per_cell; ++s) {
                SweepCell cell;
                cell.duration_tpi = dur;
                cell.origin_fraction = frac;
                cell.seed = base.rng_seed + static_cast<std::uint64_t>(cells.size());
                try {
                    OptimizationConfig cfg = base;
                    cfg.duration_tpi = dur;
                    cfg.rng_seed = cell.seed;
                    cfg.set_origin_fraction(frac);
                    const OptimizationResult r = optimize_beamsplitter(cfg);
                    cell.infidelity = r.terminal_infidelity;
                    cell.pulse_area = r.pulse_area;
                    cell.converged = r.converged;
                    cell.tau_origin =
                        temporal_origin(r.waveform, PulseRole::Beamsplitter1);

                    SequenceSpec seq;
                    seq.pulse1 = r.waveform;
                    seq.pulse2 = perfect_mirror(2.0 * defaults::tau_rect);
                    seq.pulse3 = flip_reverse(r.waveform);
                    seq.T = defaults::interrogation_time;
                    const auto dist = MomentumDistribution::from_momentum_width(0.4, base.omega0);
                    cell.contrast = fringe_contrast(seq, dist).first;
                } catch (const std::exception& e) {
                    cell.failed = true;
                    cell.error = e.what();
                }
                cells.push_back(cell);
            }
        }
    }
    return cells;
}

}  // namespace pulseorigin
