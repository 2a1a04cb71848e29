#include "hardylab/trig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hardylab/fft.hpp"
#include "hardylab/rng.hpp"

namespace hardylab::trig {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool negligible(Complex a) { return a.real() == 0.0 && a.imag() == 0.0; }
}  // namespace

Complex TrigPoly::coeff(long long j) const {
    auto it = coeffs_.find(j);
    return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

void TrigPoly::set(long long j, Complex a) {
    if (negligible(a))
        coeffs_.erase(j);
    else
        coeffs_[j] = a;
}

void TrigPoly::add(long long j, Complex a) { set(j, coeff(j) + a); }

long long TrigPoly::degree() const {
    long long d = 0;
    for (const auto& [j, c] : coeffs_) d = std::max(d, std::llabs(j));
    return d;
}

long long TrigPoly::max_freq() const {
    return coeffs_.empty() ? 0 : coeffs_.rbegin()->first;
}

bool TrigPoly::analytic() const {
    return coeffs_.empty() || coeffs_.begin()->first >= 0;
}

Complex TrigPoly::eval(double t) const {
    Complex s(0.0, 0.0);
    for (const auto& [j, c] : coeffs_)
        s += c * std::polar(1.0, static_cast<double>(j) * t);
    return s;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& g) {
    for (const auto& [j, c] : g.coeffs_) add(j, c);
    return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& g) {
    for (const auto& [j, c] : g.coeffs_) add(j, -c);
    return *this;
}

TrigPoly& TrigPoly::operator*=(Complex c) {
    if (negligible(c)) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [j, a] : coeffs_) a *= c;
    return *this;
}

TrigPoly TrigPoly::exponential(long long j, Complex a) {
    TrigPoly f;
    f.set(j, a);
    return f;
}

TrigPoly TrigPoly::constant(Complex c) { return exponential(0, c); }

TrigPoly operator+(TrigPoly f, const TrigPoly& g) { return f += g; }
TrigPoly operator-(TrigPoly f, const TrigPoly& g) { return f -= g; }
TrigPoly operator*(Complex c, TrigPoly f) { return f *= c; }

double max_coeff_diff(const TrigPoly& f, const TrigPoly& g) {
    double d = 0.0;
    for (const auto& [j, c] : f.coefficients()) d = std::max(d, std::abs(c - g.coeff(j)));
    for (const auto& [j, c] : g.coefficients()) d = std::max(d, std::abs(c - f.coeff(j)));
    return d;
}

std::string TrigPoly::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "j,re,im\n";
    for (const auto& [j, c] : coeffs_) os << j << "," << c.real() << "," << c.imag() << "\n";
    return os.str();
}

TrigPoly TrigPoly::from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);  // header
    TrigPoly f;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string item;
        std::getline(row, item, ',');
        long long j = std::stoll(item);
        std::getline(row, item, ',');
        double re = std::stod(item);
        std::getline(row, item, ',');
        double im = std::stod(item);
        f.add(j, Complex(re, im));
    }
    return f;
}

// ---- grids -----------------------------------------------------------------------

QuadratureGrid QuadratureGrid::for_degree(long long deg) {
    std::size_t want = std::max<std::size_t>(1024, 16 * static_cast<std::size_t>(deg + 1));
    return {next_pow2(want)};
}

QuadratureGrid QuadratureGrid::for_degree_and_moduli(long long deg,
                                                     std::span<const long long> moduli) {
    std::size_t base = for_degree(deg).M;
    long long l = 1;
    for (long long N : moduli) {
        if (N < 1) throw std::invalid_argument("trig: modulus must be positive");
        l = std::lcm(l, N);
    }
    std::size_t M = static_cast<std::size_t>(l) * ((base + l - 1) / l);
    return {M};
}

void QuadratureGrid::require(long long deg) const {
    if (static_cast<long long>(M) < 8 * (deg + 1))
        throw std::invalid_argument("trig: undersized grid (need M >= 8 (deg+1))");
}

void QuadratureGrid::require_modulus(long long N) const {
    if (N < 1 || M % static_cast<std::size_t>(N) != 0)
        throw std::invalid_argument("trig: grid must be a multiple of the modulus");
}

std::vector<Complex> eval_grid(const TrigPoly& f, const QuadratureGrid& grid) {
    grid.require(f.degree());
    const std::size_t M = grid.M;
    if (is_pow2(M)) {
        std::vector<Complex> buf(M, Complex(0.0, 0.0));
        for (const auto& [j, c] : f.coefficients()) {
            long long r = j % static_cast<long long>(M);
            if (r < 0) r += static_cast<long long>(M);
            buf[static_cast<std::size_t>(r)] += c;
        }
        fft(buf, +1);
        return buf;
    }
    // direct evaluation with incremental rotations; fine for sparse tables
    std::vector<Complex> out(M, Complex(0.0, 0.0));
    for (const auto& [j, c] : f.coefficients()) {
        const Complex step = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(M));
        Complex w(1.0, 0.0);
        for (std::size_t k = 0; k < M; ++k) {
            out[k] += c * w;
            w *= step;
        }
    }
    return out;
}

namespace {

double mean_abs_pow(const std::vector<Complex>& v, double p, std::size_t stride) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < v.size(); k += stride, ++n) s += std::pow(std::abs(v[k]), p);
    return s / static_cast<double>(n);
}

}  // namespace

NormReport lp_norm(const TrigPoly& f, double p, const QuadratureGrid& grid) {
    if (!(p >= 1.0)) throw std::invalid_argument("trig: need p >= 1");
    const auto v = eval_grid(f, grid);
    const double full = std::pow(mean_abs_pow(v, p, 1), 1.0 / p);
    const bool even_int = std::abs(p - std::round(p)) < 1e-12 && (llround(p) % 2 == 0);
    if (even_int && static_cast<long long>(grid.M) > static_cast<long long>(p) * f.degree())
        return NormReport::quad(full, 0.0);  // the rectangle rule is exact here
    const double half = std::pow(mean_abs_pow(v, p, 2), 1.0 / p);
    return NormReport::quad(full, (4.0 / 3.0) * std::abs(full - half) + 1e-15);
}

double l2_norm_exact(const TrigPoly& f) {
    double s = 0.0;
    for (const auto& [j, c] : f.coefficients()) s += std::norm(c);
    return std::sqrt(s);
}

// ---- kernels -----------------------------------------------------------------------

TrigPoly fejer(long long d) {
    if (d < 1) throw std::invalid_argument("trig: Fejer order must be >= 1");
    TrigPoly f;
    for (long long j = -(d - 1); j <= d - 1; ++j)
        f.set(j, Complex(1.0 - static_cast<double>(std::llabs(j)) / static_cast<double>(d), 0.0));
    return f;
}

TrigPoly vallee_poussin(long long d) {
    if (d < 1) throw std::invalid_argument("trig: de la Vallee-Poussin order must be >= 1");
    TrigPoly f = fejer(2 * d);
    f *= Complex(2.0, 0.0);
    f -= fejer(d);
    return f;
}

double fejer_value(long long d, double t) {
    double s = std::sin(0.5 * t);
    if (std::abs(s) < 1e-12) return static_cast<double>(d);
    double num = std::sin(0.5 * static_cast<double>(d) * t);
    return num * num / (static_cast<double>(d) * s * s);
}

double fejer_on_grid(long long d, long long k, long long M) {
    // t = 2 pi k / M; the phases d t / 2 and t / 2 are reduced mod 2 pi in
    // integer arithmetic so that d of astronomic size stays exact
    k %= M;
    if (k < 0) k += M;
    if (k == 0) return static_cast<double>(d);
    const long long twoM = 2 * M;
    long long r = static_cast<long long>((static_cast<__int128>(d) * k) % twoM);
    double num = std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(M));
    double den = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(M));
    return num * num / (static_cast<double>(d) * den * den);
}

// ---- periodization -----------------------------------------------------------------

TrigPoly periodize(const TrigPoly& f, long long N) {
    if (N < 1) throw std::invalid_argument("trig: periodization modulus must be >= 1");
    TrigPoly out;
    for (const auto& [j, c] : f.coefficients())
        if (j % N == 0) out.set(j, c);
    return out;
}

std::vector<Complex> step_average(const TrigPoly& f, long long N) {
    if (N < 1) throw std::invalid_argument("trig: step count must be >= 1");
    std::vector<Complex> out(static_cast<std::size_t>(N), Complex(0.0, 0.0));
    for (const auto& [j, c] : f.coefficients()) {
        if (j == 0) {
            for (auto& v : out) v += c;
            continue;
        }
        // mean of e^{ijt} over [2 pi k/N, 2 pi (k+1)/N): N/(2 pi i j) (e^{ijb} - e^{ija})
        const Complex scale = static_cast<double>(N) / (Complex(0.0, 1.0) * kTwoPi * static_cast<double>(j));
        for (long long k = 0; k < N; ++k) {
            double a = kTwoPi * static_cast<double>(k) / static_cast<double>(N);
            double b = kTwoPi * static_cast<double>(k + 1) / static_cast<double>(N);
            out[static_cast<std::size_t>(k)] +=
                c * scale * (std::polar(1.0, static_cast<double>(j) * b) - std::polar(1.0, static_cast<double>(j) * a));
        }
    }
    return out;
}

namespace {

// midpoint rule subordinate to the N arcs: the integrand is smooth within
// each arc, so this converges at O(M^-2) despite the step discontinuities
double step_residual_on_grid(const TrigPoly& f, long long N, double p, std::size_t M) {
    TrigPoly shifted;
    const double half = std::numbers::pi / static_cast<double>(M);
    for (const auto& [j, c] : f.coefficients())
        shifted.set(j, c * std::polar(1.0, static_cast<double>(j) * half));
    const auto v = eval_grid(shifted, QuadratureGrid{M});
    const auto steps = step_average(f, N);
    const std::size_t per = M / static_cast<std::size_t>(N);
    double s = 0.0;
    for (std::size_t k = 0; k < M; ++k) s += std::pow(std::abs(v[k] - steps[k / per]), p);
    return std::pow(s / static_cast<double>(M), 1.0 / p);
}

}  // namespace

NormReport step_residual_norm(const TrigPoly& f, long long N, double p) {
    auto grid = QuadratureGrid::for_degree_and_moduli(f.degree(), std::array<long long, 1>{N});
    double full = step_residual_on_grid(f, N, p, grid.M);
    double coarse = step_residual_on_grid(f, N, p, grid.M / 2 % N == 0 ? grid.M / 2 : grid.M * 2);
    return NormReport::quad(full, (4.0 / 3.0) * std::abs(full - coarse) + 1e-15);
}

NormReport step_residual_bound(const TrigPoly& f, long long N, double p) {
    // Lemma constant for the unit-interval parameterization: the arc has
    // length 1/N there and f' picks up the chain-rule factor 2 pi.
    auto grid = QuadratureGrid::for_degree(f.degree());
    NormReport d = lp_norm(derivative(f), p, grid);
    return NormReport::quad(kTwoPi * d.value / static_cast<double>(N),
                            kTwoPi * d.error / static_cast<double>(N));
}

// ---- derivative machinery ------------------------------------------------------------

TrigPoly derivative(const TrigPoly& f) {
    TrigPoly out;
    for (const auto& [j, c] : f.coefficients())
        if (j != 0) out.set(j, Complex(0.0, static_cast<double>(j)) * c);
    return out;
}

double bernstein_ratio(const TrigPoly& f, const QuadratureGrid& grid) {
    if (f.zero()) throw std::invalid_argument("trig: Ber of the zero polynomial");
    double num = lp_norm(derivative(f), 1.0, grid).value;
    double den = lp_norm(f, 1.0, grid).value;
    return num / den;
}

TrigPoly sawtooth_conv(const TrigPoly& f, long long N) {
    if (N < 1) throw std::invalid_argument("trig: sawtooth modulus must be >= 1");
    // (f' * psi_N)-hat(j) = (i j) c_j * (i / j) = -c_j at N | j, j != 0
    TrigPoly out;
    for (const auto& [j, c] : f.coefficients())
        if (j != 0 && j % N == 0) out.set(j, -c);
    return out;
}

TrigPoly lacunary_sign_projection(const TrigPoly& f, std::span<const long long> freqs,
                                  std::span<const int> signs) {
    if (!f.analytic())
        throw std::invalid_argument("trig: sign projections act on analytic polynomials");
    if (freqs.size() != signs.size())
        throw std::invalid_argument("trig: frequency/sign count mismatch");
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        if (k > 0 && freqs[k] <= freqs[k - 1])
            throw std::invalid_argument("trig: frequencies must be strictly increasing");
        if (signs[k] != 1 && signs[k] != -1)
            throw std::invalid_argument("trig: signs must be +-1");
    }
    TrigPoly out;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        Complex c = f.coeff(freqs[k]);
        if (!negligible(c)) out.set(freqs[k], static_cast<double>(signs[k]) * c);
    }
    return out;
}

// ---- the bidisc -----------------------------------------------------------------------

Complex TrigPoly2D::coeff(long long n1, long long n2) const {
    auto it = coeffs_.find({n1, n2});
    return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

void TrigPoly2D::set(long long n1, long long n2, Complex a) {
    if (negligible(a))
        coeffs_.erase({n1, n2});
    else
        coeffs_[{n1, n2}] = a;
}

void TrigPoly2D::add(long long n1, long long n2, Complex a) { set(n1, n2, coeff(n1, n2) + a); }

bool TrigPoly2D::first_quadrant() const {
    for (const auto& [k, c] : coeffs_)
        if (k.first < 0 || k.second < 0) return false;
    return true;
}

long long TrigPoly2D::degree() const {
    long long d = 0;
    for (const auto& [k, c] : coeffs_) d = std::max({d, std::llabs(k.first), std::llabs(k.second)});
    return d;
}

Complex TrigPoly2D::eval(double t1, double t2) const {
    Complex s(0.0, 0.0);
    for (const auto& [k, c] : coeffs_)
        s += c * std::polar(1.0, static_cast<double>(k.first) * t1 + static_cast<double>(k.second) * t2);
    return s;
}

TrigPoly2D TrigPoly2D::exponential(long long n1, long long n2, Complex a) {
    TrigPoly2D f;
    f.set(n1, n2, a);
    return f;
}

double max_coeff_diff(const TrigPoly2D& f, const TrigPoly2D& g) {
    double d = 0.0;
    for (const auto& [k, c] : f.coefficients()) d = std::max(d, std::abs(c - g.coeff(k.first, k.second)));
    for (const auto& [k, c] : g.coefficients()) d = std::max(d, std::abs(c - f.coeff(k.first, k.second)));
    return d;
}

std::string TrigPoly2D::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "j,k,re,im\n";
    for (const auto& [k, c] : coeffs_)
        os << k.first << "," << k.second << "," << c.real() << "," << c.imag() << "\n";
    return os.str();
}

TrigPoly2D TrigPoly2D::from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    TrigPoly2D f;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string item;
        std::getline(row, item, ',');
        long long n1 = std::stoll(item);
        std::getline(row, item, ',');
        long long n2 = std::stoll(item);
        std::getline(row, item, ',');
        double re = std::stod(item);
        std::getline(row, item, ',');
        double im = std::stod(item);
        f.add(n1, n2, Complex(re, im));
    }
    return f;
}

TrigPoly2D shear(const TrigPoly2D& f, const std::array<std::array<long long, 2>, 2>& M) {
    long long det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    if (det != 1 && det != -1)
        throw std::invalid_argument("trig: shear matrix must have determinant +-1");
    TrigPoly2D out;
    for (const auto& [k, c] : f.coefficients()) {
        long long m1 = M[0][0] * k.first + M[0][1] * k.second;
        long long m2 = M[1][0] * k.first + M[1][1] * k.second;
        out.set(m1, m2, c);
    }
    return out;
}

static void validate_pair(std::span<const long long> d, std::span<const long long> N) {
    if (d.size() != N.size() || d.empty())
        throw std::invalid_argument("trig: (d_k), (N_k) must be nonempty and equally long");
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (d[k] < 1 || N[k] < 1)
            throw std::invalid_argument("trig: sequences must be positive");
        if (k > 0 && d[k] <= d[k - 1])
            throw std::invalid_argument("trig: (d_k) must be strictly increasing");
        if (k > 0 && N[k] % N[k - 1] != 0)
            throw std::invalid_argument("trig: need the divisibility chain N_k | N_{k+1}");
    }
}

TrigPoly2D multiplier_B(const TrigPoly2D& f, std::span<const long long> d,
                        std::span<const long long> N) {
    if (!f.first_quadrant())
        throw std::invalid_argument("trig: the multiplier acts on first-quadrant polynomials");
    validate_pair(d, N);
    TrigPoly2D out;
    for (const auto& [key, c] : f.coefficients()) {
        for (std::size_t k = 0; k < d.size(); ++k) {
            if (key.first + key.second == d[k] && key.first % N[k] == 0) {
                out.set(key.first, key.second, c);
                break;
            }
        }
    }
    return out;
}

TrigPoly anti_diagonal_extract(const TrigPoly2D& f, long long d_k) {
    TrigPoly out;
    for (const auto& [key, c] : f.coefficients()) {
        if (key.first < 0 || key.second < 0 || key.first + key.second != d_k)
            throw std::invalid_argument("trig: support must lie on the anti-diagonal n1 + n2 = d_k");
        out.set(key.first, c);
    }
    return out;
}

TrigPoly2D embed_ind_trig(std::span<const TrigPoly> fs, std::span<const long long> d,
                          std::span<const long long> N) {
    validate_pair(d, N);
    if (fs.size() != d.size())
        throw std::invalid_argument("trig: one component per (d_k, N_k) required");
    TrigPoly2D out;
    for (std::size_t k = 0; k < fs.size(); ++k) {
        if (!fs[k].analytic())
            throw std::invalid_argument("trig: components must be analytic");
        if (fs[k].max_freq() * N[k] > d[k])
            throw std::invalid_argument("trig: component degree exceeds d_k / N_k");
        for (const auto& [s, c] : fs[k].coefficients()) {
            long long j = s * N[k];
            out.add(j, d[k] - j, c);
        }
    }
    return out;
}

std::vector<std::vector<Complex>> eval_grid2(const TrigPoly2D& f, std::size_t M) {
    if (!is_pow2(M)) throw std::invalid_argument("trig: 2-D grids must be powers of two");
    if (M > 4096) throw std::invalid_argument("trig: 2-D grids are capped at 4096 x 4096");
    if (static_cast<long long>(M) < 8 * (f.degree() + 1))
        throw std::invalid_argument("trig: undersized 2-D grid");
    std::vector<std::vector<Complex>> buf(M, std::vector<Complex>(M, Complex(0.0, 0.0)));
    for (const auto& [k, c] : f.coefficients()) {
        long long r1 = k.first % static_cast<long long>(M);
        if (r1 < 0) r1 += static_cast<long long>(M);
        long long r2 = k.second % static_cast<long long>(M);
        if (r2 < 0) r2 += static_cast<long long>(M);
        buf[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)] += c;
    }
    for (std::size_t i = 0; i < M; ++i) fft(buf[i], +1);
    std::vector<Complex> col(M);
    for (std::size_t j = 0; j < M; ++j) {
        for (std::size_t i = 0; i < M; ++i) col[i] = buf[i][j];
        fft(col, +1);
        for (std::size_t i = 0; i < M; ++i) buf[i][j] = col[i];
    }
    return buf;  // buf[a][b] = f(2 pi a / M, 2 pi b / M)
}

NormReport l1_norm2(const TrigPoly2D& f, std::size_t M) {
    const auto v = eval_grid2(f, M);
    double full = 0.0, half = 0.0;
    for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = 0; b < M; ++b) {
            double x = std::abs(v[a][b]);
            full += x;
            if ((a % 2 == 0) && (b % 2 == 0)) half += x;
        }
    full /= static_cast<double>(M * M);
    half /= static_cast<double>((M / 2) * (M / 2));
    return NormReport::quad(full, (4.0 / 3.0) * std::abs(full - half) + 1e-15);
}

KhintchineReport khintchine_average(std::span<const TrigPoly> fs, KhintchineMode mode,
                                    const QuadratureGrid& grid, std::uint64_t samples,
                                    std::uint64_t seed) {
    const std::size_t n = fs.size();
    if (n == 0) throw std::invalid_argument("trig: empty Khintchine family");
    if (mode == KhintchineMode::exhaustive && n > 16)
        throw std::invalid_argument("trig: exhaustive sign enumeration is capped at n = 16");
    long long deg = 0;
    for (const auto& f : fs) deg = std::max(deg, f.degree());
    grid.require(deg);
    std::vector<std::vector<Complex>> vals;
    vals.reserve(n);
    for (const auto& f : fs) vals.push_back(eval_grid(f, grid));

    KhintchineReport rep;
    double sq = 0.0;
    for (std::size_t k = 0; k < grid.M; ++k) {
        double q = 0.0;
        for (std::size_t c = 0; c < n; ++c) q += std::norm(vals[c][k]);
        sq += std::sqrt(q);
    }
    rep.sq_function = sq / static_cast<double>(grid.M);

    auto l1_of_signed_sum = [&](std::uint64_t signs) {
        double s = 0.0;
        for (std::size_t k = 0; k < grid.M; ++k) {
            Complex acc(0.0, 0.0);
            for (std::size_t c = 0; c < n; ++c)
                acc += ((signs >> c) & 1) ? -vals[c][k] : vals[c][k];
            s += std::abs(acc);
        }
        return s / static_cast<double>(grid.M);
    };

    double total = 0.0;
    if (mode == KhintchineMode::exhaustive) {
        const std::uint64_t count = std::uint64_t{1} << n;
        for (std::uint64_t s = 0; s < count; ++s) total += l1_of_signed_sum(s);
        rep.sign_draws = count;
        rep.sign_average = total / static_cast<double>(count);
    } else {
        Rng rng = derive_rng(seed, "khintchine");
        for (std::uint64_t s = 0; s < samples; ++s) total += l1_of_signed_sum(rng.bits());
        rep.sign_draws = samples;
        rep.sign_average = total / static_cast<double>(samples);
    }
    rep.ratio = rep.sq_function > 0.0 ? rep.sign_average / rep.sq_function : 1.0;
    return rep;
}

}  // namespace hardylab::trig
