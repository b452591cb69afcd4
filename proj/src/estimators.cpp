#include "fastami/estimators.hpp"

#include "fastami/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fastami {

void EstimatorConfig::validate() const {
    if (!(precision > 0.0) || !std::isfinite(precision)) {
        throw std::invalid_argument("estimator: precision must be > 0");
    }
    if (min_samples < 2) {
        throw std::invalid_argument("estimator: min_samples must be >= 2");
    }
    if (max_samples < min_samples) {
        throw std::invalid_argument("estimator: max_samples must be >= min_samples");
    }
    if (time_limit_s && !(*time_limit_s >= 0.0)) {
        throw std::invalid_argument("estimator: time limit must be >= 0");
    }
}

void RunningMoments::merge(const RunningMoments& other) noexcept {
    if (other.count_ == 0) {
        return;
    }
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double n_a = static_cast<double>(count_);
    const double n_b = static_cast<double>(other.count_);
    const double n = n_a + n_b;
    const double delta = other.mean_ - mean_;
    mean_ += delta * n_b / n;
    m2_ += other.m2_ + delta * delta * n_a * n_b / n;
    count_ += other.count_;
}

namespace {

Deadline deadline_of(const EstimatorConfig& cfg) {
    return cfg.time_limit_s ? deadline_after(*cfg.time_limit_s) : Deadline{};
}

// Draws one term of the EMI sum for fast_emi.
class EmiSampler {
public:
    EmiSampler(const Marginals& a, const Marginals& b)
        : sizes_a_(AliasTable::cluster_sizes(a)),
          sizes_b_(AliasTable::cluster_sizes(b)),
          n_total_(a.n_points()),
          total_(static_cast<double>(a.n_points())),
          scale_(static_cast<double>(a.n_clusters()) * static_cast<double>(b.n_clusters()) / (total_ * total_)) {}

    double operator()(Rng& rng) const {
        const Count a = sizes_a_.draw(rng);
        const Count b = sizes_b_.draw(rng);
        const Count m = hypergeometric_draw(a - 1, b - 1, n_total_ - 1, rng);
        const double ab = static_cast<double>(a) * static_cast<double>(b);
        return scale_ * ab * std::log(static_cast<double>(m + 1) * total_ / ab);
    }

private:
    AliasTable sizes_a_;
    AliasTable sizes_b_;
    Count n_total_;
    double total_;
    double scale_;
};

bool emi_converged(const RunningMoments& acc, double precision) {
    const double i = static_cast<double>(acc.count());
    const double tol = precision * std::max(1.0, acc.mean());
    return acc.m2() <= tol * tol * i * (i - 1.0);
}

Estimate emi_estimate(const RunningMoments& acc) {
    Estimate e;
    e.value = acc.mean();
    e.std_error = acc.std_error();
    e.n_samples = acc.count();
    return e;
}

void check_emi_inputs(const Marginals& a, const Marginals& b, const EstimatorConfig& cfg) {
    cfg.validate();
    if (a.n_points() != b.n_points()) {
        throw std::invalid_argument("fast_emi: marginal totals differ");
    }
    if (a.n_points() < 2) {
        throw std::invalid_argument("fast_emi: needs at least two points");
    }
}

}  // namespace

Estimate fast_emi(const Marginals& a, const Marginals& b, const EstimatorConfig& cfg) {
    check_emi_inputs(a, b, cfg);
    const EmiSampler sample(a, b);
    const Deadline deadline = deadline_of(cfg);
    Rng rng(cfg.seed);
    RunningMoments acc;

    while (true) {
        acc.push(sample(rng));
        const std::uint64_t i = acc.count();
        if (i % kConvergenceCheckInterval == 0 && expired(deadline)) {
            Estimate e = emi_estimate(acc);
            e.timed_out = true;
            return e;
        }
        if (i >= cfg.min_samples && (i - cfg.min_samples) % kConvergenceCheckInterval == 0 &&
            emi_converged(acc, cfg.precision)) {
            Estimate e = emi_estimate(acc);
            e.converged = true;
            return e;
        }
        if (i >= cfg.max_samples) {
            return emi_estimate(acc);
        }
    }
}

Estimate fast_emi_parallel(const Marginals& a, const Marginals& b, const EstimatorConfig& cfg, unsigned streams) {
    check_emi_inputs(a, b, cfg);
    if (streams == 0) {
        throw std::invalid_argument("fast_emi_parallel: need at least one stream");
    }
    constexpr std::uint64_t round_size = 16 * kConvergenceCheckInterval;
    const EmiSampler sample(a, b);
    const Deadline deadline = deadline_of(cfg);

    std::vector<Rng> rngs;
    std::vector<RunningMoments> partial(streams);
    rngs.reserve(streams);
    for (unsigned s = 0; s < streams; ++s) {
        rngs.emplace_back(derive_seed(cfg.seed, s));
    }

    std::uint64_t per_stream = (cfg.min_samples + streams - 1) / streams;
    while (true) {
        {
            std::vector<std::jthread> workers;
            workers.reserve(streams);
            for (unsigned s = 0; s < streams; ++s) {
                workers.emplace_back([&, s] {
                    for (std::uint64_t k = 0; k < per_stream; ++k) {
                        partial[s].push(sample(rngs[s]));
                    }
                });
            }
        }
        RunningMoments total;
        for (const RunningMoments& p : partial) {
            total.merge(p);
        }
        if (emi_converged(total, cfg.precision)) {
            Estimate e = emi_estimate(total);
            e.converged = true;
            return e;
        }
        if (total.count() >= cfg.max_samples) {
            return emi_estimate(total);
        }
        if (expired(deadline)) {
            Estimate e = emi_estimate(total);
            e.timed_out = true;
            return e;
        }
        per_stream = std::min<std::uint64_t>(round_size, (cfg.max_samples - total.count() + streams - 1) / streams);
    }
}

Estimate ami_from_emi(double mi, double h_u, double h_v, const Estimate& emi, Normalizer norm) {
    const Adjusted adjusted = adjust_for_chance(mi, h_u, h_v, emi.value, norm);
    Estimate e;
    e.value = adjusted.value;
    e.degenerate = adjusted.degenerate;
    e.n_samples = emi.n_samples;
    e.converged = emi.converged;
    e.timed_out = emi.timed_out;
    if (!adjusted.degenerate) {
        const double denominator = normalizer_value(norm, h_u, h_v) - emi.value;
        e.std_error = std::abs(mi - normalizer_value(norm, h_u, h_v)) / (denominator * denominator) * emi.std_error;
    }
    return e;
}

Estimate fast_ami(const Clustering& u, const Clustering& v, const EstimatorConfig& cfg, Normalizer norm) {
    cfg.validate();
    const double mi = mutual_information(u, v);
    const Marginals mu = u.marginals();
    const Marginals mv = v.marginals();
    const double h_u = entropy(mu);
    const double h_v = entropy(mv);
    if (h_u == 0.0 && h_v == 0.0) {
        Estimate e;
        e.value = 1.0;
        e.converged = true;
        e.degenerate = true;
        return e;
    }
    return ami_from_emi(mi, h_u, h_v, fast_emi(mu, mv, cfg), norm);
}

double smi_std_error(double smi, std::uint64_t samples) noexcept {
    if (samples < 2) {
        return std::numeric_limits<double>::infinity();
    }
    const double i = static_cast<double>(samples);
    return std::sqrt(1.0 / i + smi * smi / (2.0 * (i - 1.0)));
}

Estimate fast_smi_direct(const Clustering& u, const Clustering& v, const EstimatorConfig& cfg) {
    cfg.validate();
    const double mi = mutual_information(u, v);
    if (u.n_points() < 2) {
        throw std::invalid_argument("fast_smi: needs at least two points");
    }
    const Marginals mu = u.marginals();
    const Marginals mv = v.marginals();
    const std::vector<Count> rows(mu.sizes().begin(), mu.sizes().end());
    const std::vector<Count> cols(mv.sizes().begin(), mv.sizes().end());
    const double total = static_cast<double>(u.n_points());

    PatefieldSampler tables(mu, mv);
    const Deadline deadline = deadline_of(cfg);
    Rng rng(cfg.seed);
    RunningMoments acc;

    const auto finish = [&](bool converged, bool timed_out) {
        Estimate e;
        e.n_samples = acc.count();
        e.converged = converged;
        e.timed_out = timed_out;
        const double tiny = 1e-12 * std::max(1.0, std::abs(acc.mean()));
        if (acc.variance() <= tiny * tiny) {
            e.degenerate = true;
            e.value = std::numeric_limits<double>::quiet_NaN();
            e.std_error = std::numeric_limits<double>::quiet_NaN();
            return e;
        }
        e.value = (mi - acc.mean()) / std::sqrt(acc.variance());
        e.std_error = smi_std_error(e.value, acc.count());
        return e;
    };

    while (true) {
        double sampled = 0.0;
        tables.sample(rng, [&](std::uint32_t r, std::uint32_t c, Count n) {
            sampled += cell_information(n, rows[r], cols[c], total);
        });
        acc.push(std::max(sampled, 0.0));
        const std::uint64_t i = acc.count();
        if (i % kConvergenceCheckInterval == 0 && expired(deadline)) {
            return finish(false, true);
        }
        if (i >= cfg.min_samples && (i - cfg.min_samples) % kConvergenceCheckInterval == 0) {
            const Estimate e = finish(false, false);
            if (e.degenerate) {
                return e;
            }
            if (e.std_error <= cfg.precision * std::max(1.0, std::abs(e.value))) {
                return finish(true, false);
            }
        }
        if (i >= cfg.max_samples) {
            return finish(false, false);
        }
    }
}

}  // namespace fastami
