#include "dvar/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dvar/errors.hpp"
#include "dvar/parallel.hpp"

namespace dvar {

double default_slack(std::size_t m) {
    return std::max(0.5 / std::sqrt(static_cast<double>(m)), 0.005);
}

void validate(const EstimatorConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw DomainError("alpha must lie in (0,1), got " + std::to_string(cfg.alpha));
    if (cfg.slack_h && !(*cfg.slack_h >= 0.0 && *cfg.slack_h <= 1.0))
        throw DomainError("slack h must lie in [0,1]");
    if (!(cfg.ray_tol > 0.0)) throw DomainError("ray_tol must be positive");
    if (!(cfg.lambda_bracket > 0.0)) throw DomainError("lambda_bracket must be positive");
    if (!(cfg.tol_geom >= 0.0)) throw DomainError("tol_geom must be nonnegative");
}

const char* to_string(Method m) { return m == Method::band ? "band" : "ray"; }

namespace {

std::size_t resolve_threads(std::size_t t) { return t == 0 ? default_thread_count() : t; }

// Fenwick tree over ranks 1..n.
class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
    void add(std::size_t rank) {
        for (; rank < tree_.size(); rank += rank & (~rank + 1)) ++tree_[rank];
    }
    std::size_t prefix(std::size_t rank) const {
        std::size_t s = 0;
        for (; rank > 0; rank -= rank & (~rank + 1)) s += tree_[rank];
        return s;
    }

private:
    std::vector<std::size_t> tree_;
};

}  // namespace

OrthantCounter::OrthantCounter(const Sample& sample, const RotationFrame& frame, double tol_geom)
    : frame_(frame), m_(sample.size()), n_(sample.dim()), tol_(tol_geom), rotated_(m_ * n_) {
    if (frame.dim() != n_) throw DimensionMismatch(n_, frame.dim());
    for (std::size_t i = 0; i < m_; ++i)
        frame.apply_into(sample.row(i), std::span<double>(rotated_.data() + i * n_, n_));
}

std::size_t OrthantCounter::count(std::span<const double> vertex) const {
    if (vertex.size() != n_) throw DimensionMismatch(n_, vertex.size());
    const auto rv = frame_.apply(vertex);
    std::size_t c = 0;
    for (std::size_t i = 0; i < m_; ++i) {
        const double* y = rotated_.data() + i * n_;
        bool inside = true;
        for (std::size_t k = 0; k < n_ && inside; ++k) inside = y[k] - rv[k] >= -tol_;
        c += inside ? 1 : 0;
    }
    return c;
}

std::vector<std::size_t> OrthantCounter::batch_counts(std::size_t threads) const {
    if (n_ == 2 && tol_ == 0.0) return batch_counts_sweep2();
    return batch_counts_naive(threads);
}

std::vector<std::size_t> OrthantCounter::batch_counts_naive(std::size_t threads) const {
    std::vector<std::size_t> counts(m_, 0);
    parallel_for(m_, resolve_threads(threads), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double* yi = rotated_.data() + i * n_;
            std::size_t c = 0;
            for (std::size_t j = 0; j < m_; ++j) {
                const double* yj = rotated_.data() + j * n_;
                bool inside = true;
                for (std::size_t k = 0; k < n_ && inside; ++k) inside = yj[k] - yi[k] >= -tol_;
                c += inside ? 1 : 0;
            }
            counts[i] = c;
        }
    });
    return counts;
}

// Dominance count in the plane: sweep the first rotated coordinate from the
// top, keeping a Fenwick tree over the ranks of the second. Points sharing a
// first coordinate are all inserted before any of them is queried so ties are
// counted as in the closed orthant.
std::vector<std::size_t> OrthantCounter::batch_counts_sweep2() const {
    std::vector<std::size_t> order(m_);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rotated_[a * 2] > rotated_[b * 2];
    });

    std::vector<double> ys(m_);
    for (std::size_t i = 0; i < m_; ++i) ys[i] = rotated_[i * 2 + 1];
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    auto rank_of = [&](std::size_t i) {
        const double y = rotated_[i * 2 + 1];
        return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin()) +
               1;
    };

    Fenwick tree(ys.size());
    std::vector<std::size_t> counts(m_, 0);
    std::size_t inserted = 0;
    std::size_t g = 0;
    while (g < m_) {
        std::size_t end = g;
        const double x = rotated_[order[g] * 2];
        while (end < m_ && rotated_[order[end] * 2] == x) ++end;
        for (std::size_t k = g; k < end; ++k) {
            tree.add(rank_of(order[k]));
            ++inserted;
        }
        for (std::size_t k = g; k < end; ++k) {
            const std::size_t i = order[k];
            counts[i] = inserted - tree.prefix(rank_of(i) - 1);
        }
        g = end;
    }
    return counts;
}

double empirical_orthant_prob(const Sample& sample, const RotationFrame& frame,
                              std::span<const double> vertex, double tol_geom) {
    return OrthantCounter(sample, frame, tol_geom).prob(vertex);
}

double distance_to_line(std::span<const double> x, std::span<const double> mean,
                        std::span<const double> u) {
    const std::size_t n = x.size();
    if (mean.size() != n) throw DimensionMismatch(n, mean.size());
    if (u.size() != n) throw DimensionMismatch(n, u.size());
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - mean[i];
    const double t = dot(d, u);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = d[i] - t * u[i];
        ss += r * r;
    }
    return std::sqrt(ss);
}

VaREstimate var_band(const Sample& sample, const RotationFrame& frame, const EstimatorConfig& cfg) {
    validate(cfg);
    const OrthantCounter counter(sample, frame, cfg.tol_geom);
    const auto counts = counter.batch_counts(resolve_threads(cfg.threads));
    const double h = cfg.slack_h.value_or(default_slack(sample.size()));
    const double m = static_cast<double>(sample.size());
    const auto u = frame.direction().coords();

    std::optional<std::size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double p = static_cast<double>(counts[i]) / m;
        if (std::abs(p - cfg.alpha) > h) continue;
        const double d = distance_to_line(sample.row(i), sample.mean(), u);
        if (!best || d < best_d) {
            best = i;
            best_d = d;
        }
    }
    if (!best)
        throw EmptyBand("no sample point has orthant probability within h=" + std::to_string(h) +
                        " of alpha=" + std::to_string(cfg.alpha) + "; try a larger h");

    VaREstimate out;
    const auto row = sample.row(*best);
    out.point.assign(row.begin(), row.end());
    out.achieved_prob = static_cast<double>(counts[*best]) / m;
    out.method = Method::band;
    out.direction.assign(u.begin(), u.end());
    out.alpha = cfg.alpha;
    out.sample_index = *best;
    return out;
}

VaREstimate var_band(const Sample& sample, const Direction& u, const EstimatorConfig& cfg) {
    return var_band(sample, rotation_frame(u), cfg);
}

VaREstimate var_ray(const Sample& sample, const RotationFrame& frame, const EstimatorConfig& cfg) {
    validate(cfg);
    const OrthantCounter counter(sample, frame, cfg.tol_geom);
    const std::size_t n = sample.dim();
    const auto mean = sample.mean();
    const auto u = frame.direction().coords();
    const double scale = sample.scale();

    std::vector<double> vertex(n);
    auto at = [&](double lambda) -> std::span<const double> {
        for (std::size_t i = 0; i < n; ++i) vertex[i] = mean[i] + lambda * u[i];
        return vertex;
    };
    auto g = [&](double lambda) { return counter.prob(at(lambda)); };

    double radius = cfg.lambda_bracket * scale;
    double g_lo = g(-radius);
    double g_hi = g(radius);
    for (int k = 0; k < 200 && !(g_lo >= cfg.alpha && g_hi <= cfg.alpha); ++k) {
        radius *= 2.0;
        if (!std::isfinite(radius)) break;
        g_lo = g(-radius);
        g_hi = g(radius);
    }
    if (!(g_lo >= cfg.alpha && g_hi <= cfg.alpha))
        throw NoSolution("alpha=" + std::to_string(cfg.alpha) + " is not attained on the ray",
                         g_hi, g_lo);

    auto finish = [&](double lambda, double p) {
        VaREstimate out;
        const auto v = at(lambda);
        out.point.assign(v.begin(), v.end());
        out.lambda = lambda;
        out.achieved_prob = p;
        out.method = Method::ray;
        out.direction.assign(u.begin(), u.end());
        out.alpha = cfg.alpha;
        return out;
    };

    double lo = -radius;
    double hi = radius;
    const double width_stop = 1e-9 * scale;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (std::abs(gm - cfg.alpha) <= cfg.ray_tol) return finish(mid, gm);
        const bool exhausted = mid <= lo || mid >= hi;
        if (gm > cfg.alpha)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < width_stop || exhausted) {
            const double last = 0.5 * (lo + hi);
            return finish(last, g(last));
        }
    }
}

VaREstimate var_ray(const Sample& sample, const Direction& u, const EstimatorConfig& cfg) {
    return var_ray(sample, rotation_frame(u), cfg);
}

VaREstimate estimate(const Sample& sample, const RotationFrame& frame, const EstimatorConfig& cfg,
                     Method method) {
    return method == Method::band ? var_band(sample, frame, cfg) : var_ray(sample, frame, cfg);
}

namespace {

std::size_t quantile_rank(std::size_t m, double p) {
    const double md = static_cast<double>(m);
    if (!(p > 0.0)) return 1;
    if (p >= 1.0) return m;
    auto k = static_cast<std::size_t>(std::ceil(p * md));
    k = std::clamp<std::size_t>(k, 1, m);
    while (k > 1 && static_cast<double>(k - 1) / md >= p) --k;
    while (k < m && static_cast<double>(k) / md < p) ++k;
    return k;
}

}  // namespace

double univariate_var(std::span<const double> values, double p) {
    if (values.empty()) throw DomainError("univariate_var needs at least one value");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t k = quantile_rank(v.size(), p);
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
    return v[k - 1];
}

double order_statistic_gap(std::span<const double> values, double p) {
    if (values.empty()) throw DomainError("order_statistic_gap needs at least one value");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t k = quantile_rank(v.size(), p) - 1;
    double gap = 0.0;
    if (k > 0) gap = std::max(gap, v[k] - v[k - 1]);
    if (k + 1 < v.size()) gap = std::max(gap, v[k + 1] - v[k]);
    return gap;
}

UpperLower upper_lower_var(const Sample& sample, const RotationFrame& frame,
                           const EstimatorConfig& cfg) {
    EstimatorConfig lower_cfg = cfg;
    lower_cfg.alpha = 1.0 - cfg.alpha;
    return {var_ray(sample, frame, cfg), var_ray(sample, opposite_frame(frame), lower_cfg)};
}

UpperLower upper_lower_var(const Sample& sample, const Direction& u, const EstimatorConfig& cfg) {
    return upper_lower_var(sample, rotation_frame(u), cfg);
}

std::vector<double> bernardino_empirical(const Sample& sample, double alpha, double slack_h,
                                         Side side, std::size_t threads) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    if (!(slack_h >= 0.0)) throw DomainError("slack h must be nonnegative");
    const std::size_t n = sample.dim();
    // Survival function: the orthant in direction e, whose canonical frame is
    // the identity. Distribution function: the opposite orthant.
    const RotationFrame up = rotation_frame(Direction::diagonal(n));
    const RotationFrame frame = side == Side::upper ? up : opposite_frame(up);
    const auto counts = OrthantCounter(sample, frame).batch_counts(resolve_threads(threads));

    const double m = static_cast<double>(sample.size());
    std::vector<double> sum(n, 0.0);
    std::size_t used = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (std::abs(static_cast<double>(counts[i]) / m - alpha) > slack_h) continue;
        const auto r = sample.row(i);
        for (std::size_t k = 0; k < n; ++k) sum[k] += r[k];
        ++used;
    }
    if (used == 0)
        throw EmptyBand("no sample point has distribution level within h=" +
                        std::to_string(slack_h) + " of alpha=" + std::to_string(alpha));
    for (double& s : sum) s /= static_cast<double>(used);
    return sum;
}

PortfolioBound portfolio_bound(const Sample& sample, std::span<const double> w, double alpha,
                               EstimatorConfig cfg) {
    if (w.size() != sample.dim()) throw DimensionMismatch(sample.dim(), w.size());
    std::vector<double> neg(w.begin(), w.end());
    for (double& c : neg) c = -c;
    const Direction u = Direction::normalized(std::move(neg));
    cfg.alpha = alpha;

    PortfolioBound out;
    out.estimate = var_ray(sample, u, cfg);
    out.bound = dot(w, out.estimate.point);
    const auto z = sample.project(w);
    out.var_z = univariate_var(z, alpha);
    out.gap = order_statistic_gap(z, alpha);
    return out;
}

}  // namespace dvar
