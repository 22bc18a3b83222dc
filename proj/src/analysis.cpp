#include "cftlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cftlab/errors.hpp"

namespace cftlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Series {
    int n;
    std::vector<double> p;   // ascending
    std::vector<double> ic;
    std::vector<double> err;
};

std::vector<Series> group_by_size(const CIDataset& data) {
    std::map<int, std::vector<const CIPoint*>> groups;
    for (const auto& row : data.rows) groups[row.n].push_back(&row);
    std::vector<Series> series;
    for (auto& [n, rows] : groups) {
        std::sort(rows.begin(), rows.end(),
                  [](const CIPoint* a, const CIPoint* b) { return a->p < b->p; });
        Series s;
        s.n = n;
        for (const auto* row : rows) {
            s.p.push_back(row->p);
            s.ic.push_back(row->ic);
            s.err.push_back(row->std_error);
        }
        series.push_back(std::move(s));
    }
    return series;
}

// piecewise-linear master curve over sorted x
struct MasterCurve {
    std::vector<double> x;
    std::vector<double> y;

    bool covers(double xq) const { return xq >= x.front() && xq <= x.back(); }

    double eval(double xq) const {
        const auto it = std::upper_bound(x.begin(), x.end(), xq);
        if (it == x.begin()) return y.front();
        if (it == x.end()) return y.back();
        const std::size_t hi = static_cast<std::size_t>(it - x.begin());
        const std::size_t lo = hi - 1;
        const double span = x[hi] - x[lo];
        if (span <= 0.0) return y[lo];
        const double t = (xq - x[lo]) / span;
        return (1.0 - t) * y[lo] + t * y[hi];
    }
};

CollapseResult collapse_engine(const CIDataset& data, double nu_min, double nu_max, int grid,
                               bool near_one, int min_sizes) {
    data.validate();
    if (grid < 3) throw ArgumentError("collapse grid needs at least 3 points");
    if (!(nu_max > nu_min)) throw ArgumentError("empty exponent range");

    const std::vector<Series> series = group_by_size(data);
    if (static_cast<int>(series.size()) < min_sizes)
        throw FitError("collapse needs at least " + std::to_string(min_sizes) + " distinct sizes");
    if (!near_one)
        for (const auto& s : series)
            if (s.p.size() < 4) throw ArgumentError("collapse needs >= 4 points per size");
    if (near_one)
        for (const auto& s : series)
            for (double p : s.p)
                if (p < 0.8) throw ArgumentError("near-one collapse expects data at p >= 0.8");

    const Series& master_series = series.back();  // largest n
    auto x_of = [&](double p, int n, double nu) {
        const double base = near_one ? 1.0 - p : p;
        return base * std::pow(static_cast<double>(n), nu);
    };

    CollapseResult result;
    result.cost_curve.reserve(grid);
    double best_cost = kInf;
    int best_index = -1;
    for (int gi = 0; gi < grid; ++gi) {
        const double nu = nu_min + (nu_max - nu_min) * gi / (grid - 1);

        MasterCurve master;
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < master_series.p.size(); ++i)
            pts.emplace_back(x_of(master_series.p[i], master_series.n, nu), master_series.ic[i]);
        std::sort(pts.begin(), pts.end());
        for (const auto& [x, y] : pts) {
            master.x.push_back(x);
            master.y.push_back(y);
        }

        double cost = 0.0;
        long overlapping = 0;
        for (const auto& s : series) {
            if (s.n == master_series.n) continue;
            for (std::size_t i = 0; i < s.p.size(); ++i) {
                const double x = x_of(s.p[i], s.n, nu);
                if (!master.covers(x)) continue;
                const double dev = s.ic[i] - master.eval(x);
                const double w = s.err[i] > 0.0 ? 1.0 / (s.err[i] * s.err[i]) : 1.0;
                cost += w * dev * dev;
                ++overlapping;
            }
        }
        if (overlapping == 0) cost = kInf;
        result.cost_curve.emplace_back(nu, cost);
        if (cost < best_cost) {
            best_cost = cost;
            best_index = gi;
        }
    }
    if (best_index < 0) throw FitError("no exponent produced overlapping rescaled data");

    result.nu_best = result.cost_curve[best_index].first;

    // 1-sigma width from the local curvature, chi-square style
    result.nu_sigma = kInf;
    if (best_index > 0 && best_index + 1 < grid) {
        const double h = result.cost_curve[1].first - result.cost_curve[0].first;
        const double c0 = result.cost_curve[best_index - 1].second;
        const double c1 = result.cost_curve[best_index].second;
        const double c2 = result.cost_curve[best_index + 1].second;
        if (std::isfinite(c0) && std::isfinite(c2)) {
            const double curvature = (c0 - 2.0 * c1 + c2) / (h * h);
            if (curvature > 0.0) result.nu_sigma = std::sqrt(2.0 / curvature);
        }
    }
    result.nu_positive_2sigma =
        std::isfinite(result.nu_sigma) && result.nu_best - 2.0 * result.nu_sigma > 0.0;
    return result;
}

}  // namespace

void CIDataset::validate() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].std_error < 0.0) throw ArgumentError("negative stderr in dataset");
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (rows[i].n == rows[j].n && rows[i].p == rows[j].p && rows[i].method == rows[j].method)
                throw ArgumentError("duplicate (n, p, method) row in dataset");
    }
}

CollapseResult collapse_fit(const CIDataset& data, double nu_min, double nu_max, int grid) {
    return collapse_engine(data, nu_min, nu_max, grid, false, 3);
}

CollapseResult near_one_collapse(const CIDataset& data, double nu_min, double nu_max, int grid) {
    return collapse_engine(data, nu_min, nu_max, grid, true, 2);
}

CrossingReport threshold_crossing(const CIDataset& data) {
    data.validate();
    const std::vector<Series> series = group_by_size(data);
    if (series.size() < 2) throw ArgumentError("threshold scan needs at least 2 sizes");

    CrossingReport report;
    report.curves_coincide = true;

    for (std::size_t k = 0; k + 1 < series.size(); ++k) {
        const Series& lo = series[k];
        const Series& hi = series[k + 1];

        // common p grid
        std::vector<double> p_common;
        std::vector<double> diff, sigma;
        for (std::size_t i = 0; i < lo.p.size(); ++i)
            for (std::size_t j = 0; j < hi.p.size(); ++j)
                if (std::abs(lo.p[i] - hi.p[j]) < 1e-12) {
                    p_common.push_back(lo.p[i]);
                    diff.push_back(hi.ic[j] - lo.ic[i]);
                    sigma.push_back(std::hypot(lo.err[i], hi.err[j]));
                }
        if (p_common.size() < 2)
            throw ArgumentError("sizes " + std::to_string(lo.n) + " and " + std::to_string(hi.n) +
                                " share no common p grid");

        for (std::size_t i = 0; i < diff.size(); ++i)
            if (std::abs(diff[i]) > std::max(1e-12, 3.0 * sigma[i])) report.curves_coincide = false;

        for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
            if (diff[i] == 0.0 || diff[i] * diff[i + 1] >= 0.0) continue;
            const double denom = diff[i] - diff[i + 1];
            const double t = diff[i] / denom;
            const double dp = p_common[i + 1] - p_common[i];
            CrossingReport::Crossing crossing;
            crossing.n_low = lo.n;
            crossing.n_high = hi.n;
            crossing.p = p_common[i] + t * dp;
            crossing.uncertainty = dp * std::hypot(sigma[i], sigma[i + 1]) / std::abs(denom);
            crossing.significant =
                std::abs(diff[i]) > sigma[i] && std::abs(diff[i + 1]) > sigma[i + 1];
            report.crossings.push_back(crossing);
        }
    }
    return report;
}

}  // namespace cftlab
