#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hardylab/norms.hpp"
#include "hardylab/report.hpp"

namespace hardylab::extremal {

/// Partition of the atoms of a finite probability space; block_of[i] is the
/// block index of atom i.
struct Partition {
    std::vector<int> block_of;
    int block_count = 0;

    static Partition singletons(std::size_t atoms);
    static Partition trivial(std::size_t atoms);
};

/// Decreasing filtration F*_1 >= F*_2 >= ... >= F*_n on a finite probability
/// space: each partition is a coarsening of the previous one.  F*_0 is the
/// full sigma-algebra (singletons) by convention; levels above n fall back
/// to F*_n, which leaves every expectation E lambda_n unchanged.
class FiniteFiltration {
public:
    FiniteFiltration(std::vector<double> weights, std::vector<Partition> partitions);

    std::size_t atom_count() const { return weights_.size(); }
    int depth() const { return static_cast<int>(partitions_.size()); }
    const std::vector<double>& weights() const { return weights_; }
    const Partition& partition(int k) const;  // 1-based, clamped to [1, depth]

    /// E*_k f; k = 0 is the identity, k > depth falls back to depth.
    std::vector<double> cond_exp(const std::vector<double>& f, int k) const;
    double expectation(const std::vector<double>& f) const;

    /// whether f is constant on the blocks of F*_k
    bool measurable(const std::vector<double>& f, int k, double tol = 1e-12) const;

    std::string to_json() const;
    static FiniteFiltration from_json(const std::string& text);

private:
    std::vector<double> weights_;
    std::vector<Partition> partitions_;
};

/// Blockwise weighted mean of f for an arbitrary partition; the building
/// block behind every E*_k here.
std::vector<double> cond_exp_partition(const std::vector<double>& f, const Partition& P,
                                       const std::vector<double>& weights);

/// Sequence (phi_1,...,phi_n) adapted to the filtration: phi_k is
/// F*_k-measurable.
struct AdaptedSequence {
    std::vector<std::vector<double>> phi;

    /// throws unless each phi_k is F*_k-measurable
    void validate(const FiniteFiltration& filt, double tol = 1e-9) const;
};

struct LambdaRecursion {
    std::vector<std::vector<double>> lambda;  // lambda_1 ... lambda_n as functions
    double e_lambda_n = 0.0;                  // the infimum of Lemma "inf"
};

/// lambda_0 = 0, lambda_k = E*_{k+1} (phi_k^2 + lambda_{k-1}^2)^(1/2);
/// E lambda_n is the infimum of E (sum |f_k|^2)^(1/2) over E*_k f_k = phi_k.
LambdaRecursion lambda_recursion(const AdaptedSequence& phi, const FiniteFiltration& filt);

/// Near-extremal feasible sequence built from the clipped phi^(M):
/// f_k = phi_k^(M) prod_{j<k} Lambda_j / lambda_j + (phi_k - phi_k^(M)).
/// E*_k f_k = phi_k holds exactly; the objective tends to E lambda_n as M
/// grows.  Blocks where lambda_j vanishes contribute factor 1 (both Lambda_j
/// and lambda_j vanish together there).
std::vector<std::vector<double>> extremal_sequence(const AdaptedSequence& phi,
                                                   const FiniteFiltration& filt, double M);

double sum_sq_objective(const std::vector<std::vector<double>>& f, const FiniteFiltration& filt);

// ---- telescoping -------------------------------------------------------------

enum class TelescopingVariant { i, ii };

struct TelescopingReport {
    bool hypothesis_ok = false;
    double l1_l2 = 0.0;
    double ind = 0.0;           // exact when the product space is small, MC otherwise
    double bound = 0.0;         // 2 lambda_n or (1+sqrt 2) sqrt(E lambda_n) sqrt(max sup lambda_k)
    bool satisfied = false;
    std::string detail;
};

/// Nonnegative phi_k with scalars lambda_k = E sqrt(phi_k^2 + lambda_{k-1}^2)
/// (variant i) or random variables with E lambda_k >= E sqrt(...) (variant ii);
/// checks the max(L1(l2), ind) bound of the non-linear telescoping lemma.
TelescopingReport telescoping_bound(const std::vector<std::vector<double>>& phi,
                                    const std::vector<std::vector<double>>& lambda,
                                    TelescopingVariant variant, const FiniteFiltration& filt,
                                    std::uint64_t seed = 0);

/// Convenience: variant (i) with the scalar recursion computed internally.
TelescopingReport telescoping_bound_i(const std::vector<std::vector<double>>& phi,
                                      const FiniteFiltration& filt, std::uint64_t seed = 0);

// ---- Stein-type inequalities ---------------------------------------------------

enum class SteinVariant { lepingle, duallep, classical_p };

struct SteinReport {
    bool hypothesis_ok = false;
    double lhs = 0.0;    // E (sum |f_k|^2)^(p/2)
    double rhs = 0.0;    // E (sum |E*_k f_k|^2)^(p/2)
    double ratio = 0.0;  // lhs / rhs
    std::string detail;
};

/// lepingle: f_k must be F*_{k-1}-measurable; duallep: the partition generated
/// by f_k must be independent of F*_{k+1}; classical_p uses the exponent p.
/// The paper constant 1/2 applies to the first two; classical_p only logs.
SteinReport check_stein_variants(const std::vector<std::vector<double>>& f,
                                 const FiniteFiltration& filt, SteinVariant variant,
                                 double p = 2.0);

/// independence of the level-set partition of f from F*_k (product rule on
/// all pairs of blocks)
bool sigma_independent(const std::vector<double>& f, const Partition& P,
                       const std::vector<double>& weights, double tol = 1e-9);

}  // namespace hardylab::extremal
