#pragma once

#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace widthlab {

/// One width estimate: which estimator produced it, at which latent/subspace
/// dimension and Lipschitz budget, and what the number means. No value leaves
/// the tool without its semantics tag.
struct WidthReport {
    std::string method;  // kolmogorov_svd | entropy_grid | entropy_greedy |
                         // decoder_bound_chain | decoder_empirical
    int n = 0;
    double l = 0.0;  // NaN when not applicable
    double value = 0.0;
    std::map<std::string, double> constants_used;
    std::string semantics;  // upper_bound | lower_estimate | heuristic
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// CSV with the fixed header `method,n,l,value,semantics`.
inline void write_width_csv(const std::vector<WidthReport>& rows, std::ostream& os) {
    os << "method,n,l,value,semantics\n";
    for (const auto& r : rows) {
        os << r.method << "," << r.n << "," << format_double(r.l) << "," << format_double(r.value)
           << "," << r.semantics << "\n";
    }
}

/// JSON sidecar carrying each row's constants_used (row order matches the CSV).
inline void write_width_constants_json(const std::vector<WidthReport>& rows, std::ostream& os) {
    os << "{\n  \"rows\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        os << "    {\"method\": \"" << rows[i].method << "\", \"n\": " << rows[i].n
           << ", \"constants_used\": {";
        bool first = true;
        for (const auto& [k, v] : rows[i].constants_used) {
            if (!first) os << ", ";
            first = false;
            os << "\"" << k << "\": " << format_double(v);
        }
        os << "}}" << (i + 1 < rows.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
}

}  // namespace widthlab
