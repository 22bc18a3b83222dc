#include "cftlab/cft_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cftlab/errors.hpp"

namespace cftlab {

namespace {

std::pair<std::string, std::string> pair_key(const std::string& a, const std::string& b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

// log(sum exp(terms)) without overflow; terms all finite
double log_sum_exp(const std::vector<double>& terms) {
    const double peak = *std::max_element(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - peak);
    return peak + std::log(acc);
}

}  // namespace

bool OperatorContent::declared(const std::string& label) const {
    for (const auto& e : primaries)
        if (e.label == label) return true;
    return false;
}

double OperatorContent::dimension_of(const std::string& label) const {
    for (const auto& e : primaries)
        if (e.label == label) return e.delta;
    throw ContentError("undeclared operator label: " + label);
}

void OperatorContent::validate() const {
    bool has_identity = false;
    for (const auto& e : primaries) {
        if (!(e.delta >= 0.0) || !std::isfinite(e.delta))
            throw ContentError("operator dimension must be finite and >= 0: " + e.label);
        if (e.delta == 0.0) has_identity = true;
    }
    if (!has_identity) throw ContentError("content must declare an identity label with dimension 0");
    for (const auto& [key, products] : fusion) {
        if (!declared(key.first) || !declared(key.second))
            throw ContentError("fusion pair references undeclared label");
        for (const auto& label : products)
            if (!declared(label)) throw ContentError("fusion product references undeclared label: " + label);
    }
    for (const auto& [name, components] : jumps) {
        if (components.empty()) throw ContentError("jump " + name + " has no components");
        for (const auto& component : components) {
            if (!declared(component.label))
                throw ContentError("jump component references undeclared label: " + component.label);
            if (std::abs(component.delta - dimension_of(component.label)) > 1e-9)
                throw ContentError("jump component dimension disagrees with declared dimension for " +
                                   component.label);
        }
    }
}

OperatorContent parse_operator_content(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ContentError(std::string("content file is not valid JSON: ") + e.what());
    }
    OperatorContent content;
    try {
        for (const auto& p : j.at("primaries"))
            content.primaries.push_back({p.at("label").get<std::string>(), p.at("delta").get<double>()});
        for (const auto& f : j.at("fusion")) {
            const auto key = pair_key(f.at("a").get<std::string>(), f.at("b").get<std::string>());
            std::set<std::string> products;
            for (const auto& label : f.at("into")) products.insert(label.get<std::string>());
            content.fusion[key] = products;
        }
        for (const auto& [name, components] : j.at("jumps").items())
            for (const auto& c : components)
                content.jumps[name].push_back({c.at("label").get<std::string>(), c.at("delta").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw ContentError(std::string("content schema violation: ") + e.what());
    }
    content.validate();
    return content;
}

OperatorContent load_operator_content(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open content file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_operator_content(buffer.str());
}

OperatorContent ising_content() {
    OperatorContent c;
    c.primaries = {{"I", 0.0}, {"sigma", 0.125}, {"epsilon", 1.0}, {"dsigma", 1.125}};
    auto add = [&](const std::string& a, const std::string& b, std::set<std::string> into) {
        c.fusion[pair_key(a, b)] = std::move(into);
    };
    add("I", "I", {"I"});
    add("I", "sigma", {"sigma"});
    add("I", "epsilon", {"epsilon"});
    add("I", "dsigma", {"dsigma"});
    add("sigma", "sigma", {"I", "epsilon"});
    add("sigma", "epsilon", {"sigma"});
    add("epsilon", "epsilon", {"I"});
    add("dsigma", "dsigma", {"I", "epsilon"});  // sigma excluded by time reversal
    add("dsigma", "epsilon", {"dsigma"});
    c.jumps["x"] = {{"sigma", 0.125}};
    c.jumps["y"] = {{"dsigma", 1.125}};
    c.jumps["z"] = {{"I", 0.0}, {"epsilon", 1.0}};
    c.validate();
    return c;
}

std::vector<ClosureStep> fusion_closure(const OperatorContent& content, const std::string& jump) {
    const auto it = content.jumps.find(jump);
    if (it == content.jumps.end()) throw ContentError("jump not declared: " + jump);

    std::set<std::string> generator;
    for (const auto& c : it->second) generator.insert(c.label);

    std::vector<ClosureStep> trace;
    std::set<std::string> seen;
    std::set<std::string> current = generator;
    for (int order = 1;; ++order) {
        std::vector<std::string> fresh;
        for (const auto& label : current)
            if (seen.insert(label).second) fresh.push_back(label);
        if (!fresh.empty()) {
            trace.push_back({order, fresh});
        } else if (order > 1) {
            break;  // nothing new can appear from here on
        }
        std::set<std::string> next;
        for (const auto& a : current)
            for (const auto& b : generator) {
                const auto f = content.fusion.find(pair_key(a, b));
                if (f == content.fusion.end())
                    throw ContentError("fusion table is missing the pair (" + a + ", " + b + ")");
                next.insert(f->second.begin(), f->second.end());
            }
        current = std::move(next);
    }
    return trace;
}

NuPrediction predict_nu(const OperatorContent& content, const std::string& jump) {
    const std::vector<ClosureStep> trace = fusion_closure(content, jump);

    NuPrediction best;
    best.closure_trace = trace;
    best.nu = -std::numeric_limits<double>::infinity();
    best.fusion_order_r = 0;
    bool found = false;
    for (const auto& step : trace) {
        double delta_r = std::numeric_limits<double>::infinity();
        for (const auto& label : step.new_labels) {
            const double d = content.dimension_of(label);
            if (d > 0.0) delta_r = std::min(delta_r, d);
        }
        if (!std::isfinite(delta_r)) continue;  // only identity appeared here
        const double nu = (1.0 - 2.0 * delta_r) / step.order;
        if (nu > best.nu) {
            best.nu = nu;
            best.delta_min = delta_r;
            best.fusion_order_r = step.order;
            found = true;
        }
    }
    if (!found)
        throw ContentError("closure of jump '" + jump + "' contains only the identity; exponent undefined");
    best.correctable = best.delta_min > 0.5;
    return best;
}

double ope_matrix_element_scale(int n, double delta) {
    if (n < 2) throw ArgumentError("system size must be >= 2");
    if (delta < 0.0) throw ArgumentError("scaling dimension must be >= 0");
    return std::pow(2.0 * std::numbers::pi / n, delta);
}

double descendant_norm(int p, double h) {
    if (p < 0) throw ArgumentError("descendant level must be >= 0");
    if (!(h > 0.0)) throw ArgumentError("conformal weight must be positive");
    return std::exp(std::lgamma(p + 1.0) + std::lgamma(p + 2.0 * h) - std::lgamma(2.0 * h));
}

double descendant_overlap_f(int p, int q, double h, double h0) {
    if (p < 0 || q < 0) throw ArgumentError("descendant levels must be >= 0");
    if (!(h > 0.0)) throw ArgumentError("conformal weight must be positive");
    if (!(h0 > 0.0 && h0 < 2.0 * h))
        throw ArgumentError("operator weight h0 must satisfy 0 < h0 < 2h to avoid Gamma poles");

    std::vector<double> log_terms;
    log_terms.reserve(std::min(p, q) + 1);
    const double log_common = -2.0 * std::lgamma(h0) - std::lgamma(2.0 * h - h0);
    for (int k = 0; k <= std::min(p, q); ++k) {
        const double log_t = std::lgamma(q + 1.0) - std::lgamma(q - k + 1.0) +
                             std::lgamma(h0 + q - k) + std::lgamma(2.0 * h - h0 + k) +
                             std::lgamma(h0 + p - k) + log_common;
        log_terms.push_back(log_t);
    }
    const double log_sum = log_sum_exp(log_terms);
    const double log_prefactor =
        std::lgamma(2.0 * h) - 0.5 * (std::lgamma(p + 1.0) + std::lgamma(q + 1.0) +
                                      std::lgamma(p + 2.0 * h) + std::lgamma(q + 2.0 * h));
    return std::exp(log_prefactor + log_sum);
}

DescendantBudget descendant_code_budget(double n, int cutoff_m, double delta0, double h, double h0) {
    if (!(delta0 > 0.5)) throw ArgumentError("budget comparison requires delta0 > 1/2");
    if (cutoff_m < 1) throw ArgumentError("cutoff M must be >= 1");
    if (!(n > 1.0)) throw ArgumentError("system size must exceed 1");

    DescendantBudget budget;
    budget.sum = 0.0;
    for (int p = 0; p < cutoff_m; ++p)
        for (int q = 0; q < cutoff_m; ++q) {
            const double f = descendant_overlap_f(p, q, h, h0);
            budget.sum += f * f;
        }
    budget.bound = std::pow(n, 2.0 * delta0 - 1.0);
    budget.ratio = budget.sum / budget.bound;
    return budget;
}

}  // namespace cftlab
