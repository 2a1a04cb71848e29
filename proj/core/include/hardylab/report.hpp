#pragma once

#include <cstdint>
#include <string>

namespace hardylab {

/// How a numeric value was obtained, in decreasing order of trust.
enum class Method { exact, quadrature, monte_carlo };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::quadrature: return "quadrature";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "?";
}

/// Uniform return type for norm computations: the value together with an
/// honest account of how it was produced.  For monte_carlo results `error`
/// is one standard error and `samples`/`seed` identify the run; for
/// quadrature it is an a-priori bound on the discretization error.
struct NormReport {
    double value = 0.0;
    Method method = Method::exact;
    double error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    static NormReport exact(double v) { return {v, Method::exact, 0.0, 0, 0}; }
    static NormReport quad(double v, double err) { return {v, Method::quadrature, err, 0, 0}; }
    static NormReport mc(double v, double se, std::uint64_t n, std::uint64_t seed) {
        return {v, Method::monte_carlo, se, n, seed};
    }

    std::string to_json() const;
};

}  // namespace hardylab
