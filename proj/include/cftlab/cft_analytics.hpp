#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace cftlab {

/// Declarative scaling data: operator labels with dimensions, a fusion table,
/// and the operator content of each lattice jump operator.
struct OperatorContent {
    struct Entry {
        std::string label;
        double delta;
    };
    std::vector<Entry> primaries;
    /// unordered pair -> fusion products; keys stored with a <= b
    std::map<std::pair<std::string, std::string>, std::set<std::string>> fusion;
    std::map<std::string, std::vector<Entry>> jumps;

    bool declared(const std::string& label) const;
    double dimension_of(const std::string& label) const;
    void validate() const;
};

OperatorContent load_operator_content(const std::string& path);
OperatorContent parse_operator_content(const std::string& json_text);

/// Built-in content for the critical Ising chain: labels I, sigma, epsilon,
/// dsigma with jumps x -> {sigma}, y -> {dsigma}, z -> {I, epsilon}. The
/// dsigma self-fusion table excludes sigma (time-reversal selection rule).
OperatorContent ising_content();

struct ClosureStep {
    int order;
    std::vector<std::string> new_labels;  // labels first appearing at this order
};

/// Repeatedly fuses the jump components with themselves, recording at each
/// order the labels seen for the first time. Terminates once an order adds
/// nothing new.
std::vector<ClosureStep> fusion_closure(const OperatorContent& content, const std::string& jump);

struct NuPrediction {
    double delta_min;      // dimension controlling the dominant order
    int fusion_order_r;
    double nu;             // (1 - 2 delta_min) / r
    bool correctable;      // delta_min > 1/2
    std::vector<ClosureStep> closure_trace;
};

/// Scaling exponent of the coherent-information collapse predicted from the
/// fusion closure: nu = max over orders r of (1 - 2 Delta^(r)) / r, with
/// Delta^(r) the smallest nonzero dimension first appearing at order r.
NuPrediction predict_nu(const OperatorContent& content, const std::string& jump);

/// Finite-size amplitude (2 pi / n)^Delta of a code-subspace matrix element
/// of a local scaling operator; the OPE constant is caller-supplied.
double ope_matrix_element_scale(int n, double delta);

/// Norm of the level-p holomorphic descendant: p! Gamma(p + 2h) / Gamma(2h).
double descendant_norm(int p, double h);

/// Holomorphic overlap factor between level-p and level-q descendants through
/// an operator of weight h0, evaluated in log-Gamma arithmetic.
double descendant_overlap_f(int p, int q, double h, double h0);

struct DescendantBudget {
    double sum;    // sum_{p,q < M} f(p,q)^2
    double bound;  // n^(2 delta0 - 1)
    double ratio;
};

/// Compares the descendant-code matrix-element budget against the decay scale
/// of a jump with dimension delta0 > 1/2.
DescendantBudget descendant_code_budget(double n, int cutoff_m, double delta0, double h, double h0);

}  // namespace cftlab
