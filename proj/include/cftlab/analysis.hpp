#pragma once

#include <string>
#include <vector>

namespace cftlab {

struct CIPoint {
    int n;
    double p;
    double ic;
    double std_error;
    std::string method;
};

struct CIDataset {
    std::vector<CIPoint> rows;
    std::string provenance;  // config hash of the producing run

    void validate() const;  // no duplicate (n, p, method); std_error >= 0
};

struct CollapseResult {
    double nu_best;
    double nu_sigma;  // from the cost-curve curvature at the minimum
    bool nu_positive_2sigma;
    std::vector<std::pair<double, double>> cost_curve;  // (nu, cost)
};

/// Scaling collapse against x = p n^nu. The largest-n series is the master
/// curve; other series are scored by squared deviation from its piecewise
/// linear interpolant over overlapping x ranges, weighted by 1/stderr^2
/// (unit weight for exact points). Trial exponents with no overlap get
/// infinite cost.
CollapseResult collapse_fit(const CIDataset& data, double nu_min = -2.0, double nu_max = 2.0,
                            int grid = 161);

/// Same machinery with x = (1 - p) n^nu for data concentrated at p >= 0.8.
CollapseResult near_one_collapse(const CIDataset& data, double nu_min = -2.0, double nu_max = 2.0,
                                 int grid = 161);

struct CrossingReport {
    struct Crossing {
        int n_low;
        int n_high;
        double p;
        double uncertainty;
        bool significant;  // sign change resolved outside propagated stderr
    };
    std::vector<Crossing> crossings;
    bool curves_coincide;
};

/// Sign changes of I_c differences between consecutive sizes on their common
/// p grid. An empty significant-crossing list supports a boundary threshold.
CrossingReport threshold_crossing(const CIDataset& data);

}  // namespace cftlab
