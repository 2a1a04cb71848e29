#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hardylab/report.hpp"

namespace hardylab::norms {

/// Scalar function on a finite measure space (atoms with positive weights).
/// Probability normalization is required by the independent-sum operations
/// and deliberately not enforced here: disjoint sums carry total mass n.
struct DiscreteFunction {
    std::vector<double> weights;
    std::vector<double> values;

    DiscreteFunction() = default;
    DiscreteFunction(std::vector<double> w, std::vector<double> v);

    std::size_t atom_count() const { return values.size(); }
    double total_mass() const;
    bool is_probability(double tol = 1e-12) const;

    double integral_abs() const;      // int |f| dmu
    double integral_sq() const;       // int f^2 dmu
};

/// Sequence (f_1,...,f_n) with every component on its own finite probability
/// space; the carrier of the independent-sum norm.
struct DiscreteVectorFunction {
    std::vector<DiscreteFunction> components;

    DiscreteVectorFunction() = default;
    explicit DiscreteVectorFunction(std::vector<DiscreteFunction> comps) : components(std::move(comps)) {}

    std::size_t component_count() const { return components.size(); }
    bool common_space(double tol = 1e-12) const;
    /// product of component atom counts, saturating
    std::uint64_t product_size() const;
};

/// int (sum_k f_k(x)^2)^(1/2) dmu on one common space.
NormReport l1_l2_norm(const DiscreteVectorFunction& fs);

/// The independent-sum norm by exact summation over the product space.
/// Refuses products above 2^24 atoms (use ind_norm_mc there).
NormReport ind_norm_exact(const DiscreteVectorFunction& fs);

/// Unbiased Monte Carlo estimator of the independent-sum norm; the report
/// carries one standard error, the sample count and the seed.
NormReport ind_norm_mc(const DiscreteVectorFunction& fs, std::uint64_t samples, std::uint64_t seed);

/// Luxemburg norm for Phi_1(x) = x^2 on [0,1], 2x-1 beyond; bisection on the
/// level k to |int Phi_1(|f|/k) = 1| within 1e-10.
NormReport orlicz_norm(const DiscreteFunction& f);

/// Phi_1 norm of the coproduct function on the disjoint sum of the component
/// spaces (component measures carried over unnormalized, total mass n).
NormReport disjoint_sum_orlicz(const DiscreteVectorFunction& fs);

/// Coproduct of the components as one function on the disjoint sum.
DiscreteFunction disjoint_coproduct(const DiscreteVectorFunction& fs);

/// inf { ||g||_1 + t ||h||_2 : g + h = f }, exact.  Only the pointwise
/// modulus of f matters, so f is passed as its (nonnegative) modulus; the
/// optimum is a radial truncation h = f min(1, c/|f|) and c is scanned over
/// the sorted-|f| breakpoints plus the per-segment stationary points.
NormReport l1_plus_l2_inf(const DiscreteFunction& f, double t);

/// K_t(f; L^1, L^2) — same quantity, standard name.
inline NormReport k_functional(const DiscreteFunction& f, double t) { return l1_plus_l2_inf(f, t); }

/// weak-L^1 quasinorm sup_l l mu{|g| > l}, exact by sorting atom values.
NormReport weak_l1(const DiscreteFunction& g);

// ---- constrained K-functional ----------------------------------------------

/// Vector-valued field on a common weighted atom space: field[c][i] is the
/// c-th l^2 component at atom i.
using Field = std::vector<std::vector<double>>;

/// Subspace V of vector fields given through an orthonormal coefficient map
/// (orthonormal with respect to the weighted inner product
/// <u,v> = sum_i w_i sum_c u v): apply builds B a, adjoint computes B^T.
struct SubspaceMap {
    std::size_t dim = 0;
    std::function<void(std::span<const double>, Field&)> apply;
    std::function<void(const Field&, std::span<double>)> adjoint;
};

struct ConstrainedKReport {
    NormReport value;      // best found (method monte_carlo is never used here)
    double lower_bound;    // unconstrained K_t, certified
};

/// K_t of f within the subspace couple: minimize ||f - h||_{L1(l2)} + t ||h||_{L2(l2)}
/// over h in V (f must lie in V).  Smoothed first-order descent with
/// eps-continuation {1e-2,1e-3,1e-4}, 200 iterations each, 8 random restarts.
ConstrainedKReport l1_plus_l2_inf_constrained(const std::vector<double>& weights, const Field& f,
                                              const SubspaceMap& subspace, double t,
                                              std::uint64_t seed);

}  // namespace hardylab::norms
