#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hardylab/report.hpp"

namespace hardylab::dyadic {

// Conventions for the truncated Cantor group {0,1}^m:
//  * array position i encodes the point x with x_k = bit k-1 of i;
//  * the measure is uniform, every atom has weight 2^-m;
//  * characters w_A are indexed by bitmasks the same way (element k <-> bit k-1);
//  * inner product <f,g> = 2^-m sum f*g, so the w_A are orthonormal.

/// Hard cap on the resolution of scalar transforms (memory ~ 2^m doubles).
inline constexpr int kMaxResolution = 24;

/// A finite subset of {1,...,m} as a bitmask.  max of the empty set is 0 and
/// min of the empty set is the sentinel m+1 (standing in for +infinity).
struct WalshIndex {
    std::uint32_t mask = 0;

    int max() const;             // largest element, 0 if empty
    int min(int m) const;        // smallest element, m+1 if empty
    bool empty() const { return mask == 0; }
    bool subset_of(std::uint32_t other) const { return (mask & ~other) == 0; }
};

int mask_max(std::uint32_t mask);
int mask_min(std::uint32_t mask, int m);

/// Scalar function on the 2^m-point Cantor group.
class DyadicFunction {
public:
    DyadicFunction() = default;
    explicit DyadicFunction(int m);
    DyadicFunction(int m, std::vector<double> values);

    int resolution() const { return m_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double mean() const;
    double l1_norm() const;       // E|f|
    double l2_norm() const;       // (E f^2)^(1/2)
    double max_abs() const;

    DyadicFunction& operator+=(const DyadicFunction& g);
    DyadicFunction& operator-=(const DyadicFunction& g);
    DyadicFunction& operator*=(double c);

    /// character w_A at resolution m
    static DyadicFunction walsh(int m, WalshIndex A);
    /// k-th Rademacher r_k = w_{{k}}
    static DyadicFunction rademacher(int m, int k);
    static DyadicFunction constant(int m, double c);

    std::string to_csv() const;
    static DyadicFunction from_csv(const std::string& text);

private:
    int m_ = 0;
    std::vector<double> values_;
};

DyadicFunction operator+(DyadicFunction f, const DyadicFunction& g);
DyadicFunction operator-(DyadicFunction f, const DyadicFunction& g);
DyadicFunction operator*(double c, DyadicFunction f);
double max_abs_diff(const DyadicFunction& f, const DyadicFunction& g);

/// Element of L^1(l^2) at finite resolution: a finite list of components on
/// one Cantor group.
struct VectorDyadicFunction {
    std::vector<DyadicFunction> components;

    VectorDyadicFunction() = default;
    explicit VectorDyadicFunction(std::vector<DyadicFunction> comps);

    int resolution() const;
    std::size_t component_count() const { return components.size(); }

    /// pointwise l^2 modulus x -> (sum_n f_n(x)^2)^(1/2)
    DyadicFunction modulus() const;
    /// E |f|_{l2}
    double l1_l2_norm() const;
    double l2_l2_norm() const;
};

// ---- Walsh analysis -------------------------------------------------------

/// In-place unnormalized Walsh-Hadamard butterfly: v <- H v with
/// (H v)_A = sum_x (-1)^{|A & x|} v_x.  Self-inverse up to the factor 2^m.
void fwht(std::span<double> v);

/// Analysis: the full coefficient table <f, w_A>, indexed by mask.
/// With the probability normalization, synthesis of the result recovers f.
std::vector<double> walsh_transform(const DyadicFunction& f);

/// Synthesis: f = sum_A c_A w_A.
DyadicFunction walsh_synthesis(int m, std::span<const double> coefficients);

/// Conditional expectations.  `dyadic` is E_n (averages coordinates n+1..m,
/// i.e. keeps w_A with A within {1..n}); `periodic` is E*_n (averages
/// coordinates 1..n, keeps w_A with min A > n).
enum class Algebra { dyadic, periodic };
DyadicFunction cond_exp(const DyadicFunction& f, int n, Algebra kind);

/// Martingale difference Delta_k = E_k - E_{k-1} (Delta_0 = E_0).
DyadicFunction martingale_diff(const DyadicFunction& f, int k);

/// S(f)(x) = (sum_k |Delta_k f(x)|^2)^(1/2)
DyadicFunction square_function(const DyadicFunction& f);

/// ||f||_{H^1(delta)} = E S(f); exact at finite resolution.
NormReport h1_norm(const DyadicFunction& f);

/// The kernel kappa_n = sum_{max A = n} w_A via its closed form:
/// 1 at n=0, 2^{n-1} for n < min x, -2^{n-1} at n = min x, 0 past min x.
DyadicFunction kappa(int n, int m);

/// Group convolution (f*g)(x) = integral f(x+y) g(y) dmu(y); computed through
/// pointwise products of Walsh coefficients.  kappa_n * f = Delta_n f.
DyadicFunction walsh_convolve(const DyadicFunction& f, const DyadicFunction& g);

/// Dilation T f(x) = f(2x mod 1); raises the resolution by one and shifts
/// every Walsh index up: T w_A = w_{A+1}.
DyadicFunction dilation(const DyadicFunction& f);
DyadicFunction dilation_power(const DyadicFunction& f, int a);

/// iota: f -> (Delta_0 f, ..., Delta_m f), the canonical isometric embedding
/// of H^1(delta) into L^1(l^2).
VectorDyadicFunction iota(const DyadicFunction& f);

// ---- block projections ----------------------------------------------------

/// Strictly increasing disjoint integer intervals [a_n, b_n] in {1,...}.
struct BlockSpec {
    std::vector<std::pair<int, int>> intervals;

    explicit BlockSpec(std::vector<std::pair<int, int>> iv);
    int max_level() const;
    /// 1-based block index containing k, or 0
    int block_of(int k) const;
};

/// Orthogonal projection onto span{w_A : A nonempty, A within some block}.
/// Satisfies Delta_k P f = E*_{a_n - 1} Delta_k f for k in I_n and
/// Delta_k P f = 0 off the blocks (so the mean is annihilated).
DyadicFunction block_projection(const DyadicFunction& f, const BlockSpec& spec);

/// sum_n T^{a_n - 1} f_n, where f_n has resolution |I_n|; the result lives at
/// resolution max b_n.  For mean-zero components its H^1(delta) norm is the
/// independent-sum norm of (iota f_n).
DyadicFunction embed_ind_blocks(std::span<const DyadicFunction> fs, const BlockSpec& spec);

// ---- truncated principal values -------------------------------------------

/// K_{m_cut} * f = (Delta_0 f_0, ..., Delta_{m_cut} f_{m_cut}, 0, ...).
VectorDyadicFunction truncated_pv_vector(const VectorDyadicFunction& f, int m_cut);

/// k_{m_cut} * f = sum_{n <= m_cut} Delta_n f_n.
DyadicFunction truncated_pv_scalar(const VectorDyadicFunction& f, int m_cut);

/// Remainder of the scalar truncated convolution over the ball B(0, 2^-m_cut),
/// i.e. integral of k_{m_cut}(y) f(x-y) over {y : min y > m_cut}.
DyadicFunction truncation_remainder(const VectorDyadicFunction& f, int m_cut);

/// Pointwise majorant (1/2) <u_m, E_m |f|(x)> for the remainder, with weights
/// u_m(n) = 2^{n-m} for n >= 1.  The n = 0 weight is 2^{1-m}: kappa_0 = 1 on
/// the ball, so the 0-th component enters at twice the paper's display weight
/// (equality is attained by nonnegative f concentrated there).
DyadicFunction truncation_remainder_bound(const VectorDyadicFunction& f, int m_cut);

}  // namespace hardylab::dyadic
