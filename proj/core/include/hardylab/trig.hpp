#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hardylab/report.hpp"

namespace hardylab::trig {

using Complex = std::complex<double>;

/// Finitely supported Fourier coefficient table on Z; the function is
/// f(t) = sum_j c_j e^{ijt} for t in [0, 2pi).  Zero coefficients are pruned.
class TrigPoly {
public:
    TrigPoly() = default;

    Complex coeff(long long j) const;
    void set(long long j, Complex a);
    void add(long long j, Complex a);
    const std::map<long long, Complex>& coefficients() const { return coeffs_; }

    bool zero() const { return coeffs_.empty(); }
    long long degree() const;   // max |j| over the support, 0 for the zero poly
    long long max_freq() const; // largest j in the support (0 if empty)
    bool analytic() const;      // support in {0,1,2,...}

    Complex eval(double t) const;

    TrigPoly& operator+=(const TrigPoly& g);
    TrigPoly& operator-=(const TrigPoly& g);
    TrigPoly& operator*=(Complex c);

    static TrigPoly exponential(long long j, Complex a = Complex(1.0, 0.0));
    static TrigPoly constant(Complex c);

    std::string to_csv() const;  // rows j,re,im
    static TrigPoly from_csv(const std::string& text);

private:
    std::map<long long, Complex> coeffs_;
};

TrigPoly operator+(TrigPoly f, const TrigPoly& g);
TrigPoly operator-(TrigPoly f, const TrigPoly& g);
TrigPoly operator*(Complex c, TrigPoly f);
double max_coeff_diff(const TrigPoly& f, const TrigPoly& g);

/// Uniform M-point grid t_k = 2 pi k / M.  Oversampling of at least 8x the
/// degree is enforced by the evaluation routines; moduli that the grid must
/// resolve exactly have to divide M.
struct QuadratureGrid {
    std::size_t M = 1024;

    /// max(1024, 16 (deg+1)), rounded up to a power of two
    static QuadratureGrid for_degree(long long deg);
    /// same, then inflated to a multiple of every given modulus
    static QuadratureGrid for_degree_and_moduli(long long deg, std::span<const long long> moduli);

    void require(long long deg) const;          // M >= 8 (deg+1)
    void require_modulus(long long N) const;    // N | M
};

/// f on the grid (FFT when M is a power of two, direct otherwise).
std::vector<Complex> eval_grid(const TrigPoly& f, const QuadratureGrid& grid);

/// (mean |f|^p)^(1/p) by the rectangle rule.  Exact (error 0) for even
/// integer p with p*deg < M; otherwise the error field carries a two-grid
/// Richardson estimate of the O(M^-2) quadrature error.
NormReport lp_norm(const TrigPoly& f, double p, const QuadratureGrid& grid);

/// Parseval: (sum |c_j|^2)^(1/2), exact.
double l2_norm_exact(const TrigPoly& f);

// ---- kernels -----------------------------------------------------------------

/// Fejer kernel in the order-d convention: F_d = sum_{|j|<d} (1-|j|/d) e^{ijt}.
/// Nonnegative, mean 1, F_d(0) = d, degree d-1.  Fixed this way so that
/// periodize(F_{CN}, N) = F_C(Nt) exactly in coefficient space.
TrigPoly fejer(long long d);

/// de la Vallee-Poussin kernel V_d = 2 F_{2d} - F_d; V_d * f = f for deg f <= d.
TrigPoly vallee_poussin(long long d);

/// closed form (1/d) (sin(dt/2)/sin(t/2))^2
double fejer_value(long long d, double t);

/// F_d(2 pi k / M) with the phase reduced in integer arithmetic; stays exact
/// for d far beyond any representable grid.
double fejer_on_grid(long long d, long long k, long long M);

// ---- periodization and interval means ------------------------------------------

/// f * omega_N: keeps the coefficients with N | j.  Equals the translate
/// average (1/N) sum_k f(t + 2 pi k/N) and the conditional expectation E*_N
/// onto 2 pi/N-periodic functions.
TrigPoly periodize(const TrigPoly& f, long long N);

/// E_N f: exact means over the N uniform arcs [2 pi k/N, 2 pi (k+1)/N).
std::vector<Complex> step_average(const TrigPoly& f, long long N);

/// ||(id - E_N) f||_p by quadrature on a grid subordinate to the arcs.
NormReport step_residual_norm(const TrigPoly& f, long long N, double p);

/// The majorant of the step lemma, (1/N) ||f'||_p with the derivative taken
/// in the unit-interval parameterization (i.e. (2 pi / N) || df/dt ||_p).
NormReport step_residual_bound(const TrigPoly& f, long long N, double p);

// ---- derivative machinery --------------------------------------------------------

TrigPoly derivative(const TrigPoly& f);  // d/dt, t in [0, 2pi)

/// Ber f = E|f'| / E|f|; bounded by deg f (Bernstein).
double bernstein_ratio(const TrigPoly& f, const QuadratureGrid& grid);

/// f' * psi_N where psi_N is the 2 pi/N-periodic sawtooth: psi-hat(j) = i/j
/// at N | j, j != 0, else 0.  Equals E f - E*_N f.
TrigPoly sawtooth_conv(const TrigPoly& f, long long N);

/// P_{(n_k),(eps_k)}: keeps only the listed frequencies, with signs applied.
TrigPoly lacunary_sign_projection(const TrigPoly& f, std::span<const long long> freqs,
                                  std::span<const int> signs);

// ---- the bidisc ----------------------------------------------------------------

class TrigPoly2D {
public:
    using Key = std::pair<long long, long long>;

    Complex coeff(long long n1, long long n2) const;
    void set(long long n1, long long n2, Complex a);
    void add(long long n1, long long n2, Complex a);
    const std::map<Key, Complex>& coefficients() const { return coeffs_; }

    bool zero() const { return coeffs_.empty(); }
    bool first_quadrant() const;  // support in N x N
    long long degree() const;     // max(|n1|, |n2|)

    Complex eval(double t1, double t2) const;

    static TrigPoly2D exponential(long long n1, long long n2, Complex a = Complex(1.0, 0.0));

    std::string to_csv() const;  // rows j,k,re,im
    static TrigPoly2D from_csv(const std::string& text);

private:
    std::map<Key, Complex> coeffs_;
};

double max_coeff_diff(const TrigPoly2D& f, const TrigPoly2D& g);

/// S_M: coefficient remap n -> M n for integer M with |det M| = 1;
/// an L^p isometry, because (S_M f)(t) = f(M* t).
TrigPoly2D shear(const TrigPoly2D& f, const std::array<std::array<long long, 2>, 2>& M);

/// The multiplier of the bidisc theorem: keeps (n1, n2) iff n1 + n2 = d_k and
/// N_k | n1 for some k.  Requires a first-quadrant input, strictly increasing
/// (d_k) and a divisibility chain N_k | N_{k+1}.
TrigPoly2D multiplier_B(const TrigPoly2D& f, std::span<const long long> d,
                        std::span<const long long> N);

/// For f supported on the anti-diagonal n1 + n2 = d_k: the analytic polynomial
/// with f~(j) = f-hat(j, d_k - j); |f(t1,t2)| = |f~(t1 - t2)| pointwise.
TrigPoly anti_diagonal_extract(const TrigPoly2D& f, long long d_k);

/// T((f_k)) = sum_k sum_{N_k | j, 0 <= j <= d_k} f_k-hat(j / N_k) e^{i <(j, d_k - j), t>};
/// requires deg f_k <= d_k / N_k.
TrigPoly2D embed_ind_trig(std::span<const TrigPoly> fs, std::span<const long long> d,
                          std::span<const long long> N);

/// values on the M x M grid (M a power of two)
std::vector<std::vector<Complex>> eval_grid2(const TrigPoly2D& f, std::size_t M);

/// mean of |f| over the 2-D grid, with a two-grid error estimate
NormReport l1_norm2(const TrigPoly2D& f, std::size_t M);

// ---- Khintchine --------------------------------------------------------------

enum class KhintchineMode { exhaustive, sampled };

struct KhintchineReport {
    double sign_average = 0.0;  // E_eps || sum eps_k f_k ||_1
    double sq_function = 0.0;   // || (sum |f_k|^2)^(1/2) ||_1
    double ratio = 0.0;
    std::uint64_t sign_draws = 0;
};

/// exhaustive mode enumerates all 2^n sign vectors (n <= 16)
KhintchineReport khintchine_average(std::span<const TrigPoly> fs, KhintchineMode mode,
                                    const QuadratureGrid& grid, std::uint64_t samples = 4096,
                                    std::uint64_t seed = 1);

}  // namespace hardylab::trig
