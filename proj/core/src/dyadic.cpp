#include "hardylab/dyadic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hardylab::dyadic {

int mask_max(std::uint32_t mask) {
    return mask == 0 ? 0 : std::bit_width(mask);
}

int mask_min(std::uint32_t mask, int m) {
    return mask == 0 ? m + 1 : std::countr_zero(mask) + 1;
}

int WalshIndex::max() const { return mask_max(mask); }
int WalshIndex::min(int m) const { return mask_min(mask, m); }

static void check_resolution(int m) {
    if (m < 0 || m > kMaxResolution)
        throw std::invalid_argument("dyadic: resolution must lie in [0, " +
                                    std::to_string(kMaxResolution) + "], got " + std::to_string(m));
}

DyadicFunction::DyadicFunction(int m) : m_(m) {
    check_resolution(m);
    values_.assign(std::size_t{1} << m, 0.0);
}

DyadicFunction::DyadicFunction(int m, std::vector<double> values) : m_(m), values_(std::move(values)) {
    check_resolution(m);
    if (values_.size() != (std::size_t{1} << m))
        throw std::invalid_argument("dyadic: value table must have exactly 2^m entries");
}

double DyadicFunction::mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
}

double DyadicFunction::l1_norm() const {
    double s = 0.0;
    for (double v : values_) s += std::abs(v);
    return s / static_cast<double>(values_.size());
}

double DyadicFunction::l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s / static_cast<double>(values_.size()));
}

double DyadicFunction::max_abs() const {
    double s = 0.0;
    for (double v : values_) s = std::max(s, std::abs(v));
    return s;
}

static void check_same_resolution(const DyadicFunction& f, const DyadicFunction& g) {
    if (f.resolution() != g.resolution())
        throw std::invalid_argument("dyadic: resolution mismatch");
}

DyadicFunction& DyadicFunction::operator+=(const DyadicFunction& g) {
    check_same_resolution(*this, g);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += g[i];
    return *this;
}

DyadicFunction& DyadicFunction::operator-=(const DyadicFunction& g) {
    check_same_resolution(*this, g);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= g[i];
    return *this;
}

DyadicFunction& DyadicFunction::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

DyadicFunction operator+(DyadicFunction f, const DyadicFunction& g) { return f += g; }
DyadicFunction operator-(DyadicFunction f, const DyadicFunction& g) { return f -= g; }
DyadicFunction operator*(double c, DyadicFunction f) { return f *= c; }

double max_abs_diff(const DyadicFunction& f, const DyadicFunction& g) {
    check_same_resolution(f, g);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s = std::max(s, std::abs(f[i] - g[i]));
    return s;
}

DyadicFunction DyadicFunction::walsh(int m, WalshIndex A) {
    check_resolution(m);
    if (A.mask >> m)
        throw std::invalid_argument("dyadic: Walsh index has bits above the resolution");
    DyadicFunction f(m);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = (std::popcount(static_cast<std::uint32_t>(i) & A.mask) & 1) ? -1.0 : 1.0;
    return f;
}

DyadicFunction DyadicFunction::rademacher(int m, int k) {
    if (k < 1 || k > m) throw std::invalid_argument("dyadic: Rademacher index out of range");
    return walsh(m, WalshIndex{std::uint32_t{1} << (k - 1)});
}

DyadicFunction DyadicFunction::constant(int m, double c) {
    DyadicFunction f(m);
    std::fill(f.values().begin(), f.values().end(), c);
    return f;
}

std::string DyadicFunction::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "# m=" << m_ << "\nindex,value\n";
    for (std::size_t i = 0; i < values_.size(); ++i) os << i << "," << values_[i] << "\n";
    return os.str();
}

DyadicFunction DyadicFunction::from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# m=", 0) != 0)
        throw std::invalid_argument("dyadic: missing resolution header");
    int m = std::stoi(line.substr(4));
    DyadicFunction f(m);
    std::getline(is, line);  // column header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        std::size_t idx = std::stoull(line.substr(0, comma));
        if (idx >= f.size()) throw std::invalid_argument("dyadic: index out of range in CSV");
        f[idx] = std::stod(line.substr(comma + 1));
    }
    return f;
}

VectorDyadicFunction::VectorDyadicFunction(std::vector<DyadicFunction> comps)
    : components(std::move(comps)) {
    for (std::size_t n = 1; n < components.size(); ++n)
        if (components[n].resolution() != components[0].resolution())
            throw std::invalid_argument("dyadic: vector components must share one resolution");
}

int VectorDyadicFunction::resolution() const {
    if (components.empty()) throw std::logic_error("dyadic: empty vector function");
    return components[0].resolution();
}

DyadicFunction VectorDyadicFunction::modulus() const {
    DyadicFunction out(resolution());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (const auto& c : components) s += c[i] * c[i];
        out[i] = std::sqrt(s);
    }
    return out;
}

double VectorDyadicFunction::l1_l2_norm() const { return modulus().l1_norm(); }
double VectorDyadicFunction::l2_l2_norm() const { return modulus().l2_norm(); }

// ---- transforms ------------------------------------------------------------

void fwht(std::span<double> v) {
    const std::size_t n = v.size();
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                double x = v[j], y = v[j + h];
                v[j] = x + y;
                v[j + h] = x - y;
            }
        }
    }
}

std::vector<double> walsh_transform(const DyadicFunction& f) {
    std::vector<double> c(f.values().begin(), f.values().end());
    fwht(c);
    const double scale = 1.0 / static_cast<double>(f.size());
    for (double& x : c) x *= scale;
    return c;
}

DyadicFunction walsh_synthesis(int m, std::span<const double> coefficients) {
    check_resolution(m);
    if (coefficients.size() != (std::size_t{1} << m))
        throw std::invalid_argument("dyadic: coefficient table must have 2^m entries");
    std::vector<double> v(coefficients.begin(), coefficients.end());
    fwht(v);
    return DyadicFunction(m, std::move(v));
}

DyadicFunction cond_exp(const DyadicFunction& f, int n, Algebra kind) {
    const int m = f.resolution();
    if (n < 0 || n > m) throw std::invalid_argument("dyadic: conditional expectation level out of range");
    DyadicFunction out(m);
    if (kind == Algebra::dyadic) {
        // E_n: average over the high coordinates, value depends on i mod 2^n
        const std::size_t low = std::size_t{1} << n;
        const std::size_t reps = std::size_t{1} << (m - n);
        for (std::size_t i = 0; i < low; ++i) {
            double s = 0.0;
            for (std::size_t h = 0; h < reps; ++h) s += f[i + (h << n)];
            s /= static_cast<double>(reps);
            for (std::size_t h = 0; h < reps; ++h) out[i + (h << n)] = s;
        }
    } else {
        // E*_n: average over the first n coordinates (the low bits)
        const std::size_t low = std::size_t{1} << n;
        for (std::size_t base = 0; base < f.size(); base += low) {
            double s = 0.0;
            for (std::size_t l = 0; l < low; ++l) s += f[base + l];
            s /= static_cast<double>(low);
            for (std::size_t l = 0; l < low; ++l) out[base + l] = s;
        }
    }
    return out;
}

DyadicFunction martingale_diff(const DyadicFunction& f, int k) {
    const int m = f.resolution();
    if (k < 0 || k > m) throw std::invalid_argument("dyadic: martingale level out of range");
    if (k == 0) return cond_exp(f, 0, Algebra::dyadic);
    return cond_exp(f, k, Algebra::dyadic) - cond_exp(f, k - 1, Algebra::dyadic);
}

DyadicFunction square_function(const DyadicFunction& f) {
    const int m = f.resolution();
    DyadicFunction out(m);
    // walk E_m = f down to E_0, accumulating |E_k - E_{k-1}|^2
    DyadicFunction ek = f;
    for (int k = m; k >= 1; --k) {
        DyadicFunction prev = cond_exp(ek, k - 1, Algebra::dyadic);
        for (std::size_t i = 0; i < out.size(); ++i) {
            double d = ek[i] - prev[i];
            out[i] += d * d;
        }
        ek = std::move(prev);
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += ek[i] * ek[i];  // Delta_0 = E_0
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(out[i]);
    return out;
}

NormReport h1_norm(const DyadicFunction& f) {
    return NormReport::exact(square_function(f).mean());
}

DyadicFunction kappa(int n, int m) {
    check_resolution(m);
    if (n < 0 || n > m) throw std::invalid_argument("dyadic: kappa level out of range");
    DyadicFunction out(m);
    if (n == 0) return DyadicFunction::constant(m, 1.0);
    const double h = std::ldexp(1.0, n - 1);  // 2^{n-1}
    for (std::size_t i = 0; i < out.size(); ++i) {
        int minx = mask_min(static_cast<std::uint32_t>(i), m);
        if (n < minx)
            out[i] = h;
        else if (n == minx)
            out[i] = -h;
        else
            out[i] = 0.0;
    }
    return out;
}

DyadicFunction walsh_convolve(const DyadicFunction& f, const DyadicFunction& g) {
    check_same_resolution(f, g);
    std::vector<double> a = walsh_transform(f);
    std::vector<double> b = walsh_transform(g);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return walsh_synthesis(f.resolution(), a);
}

DyadicFunction dilation(const DyadicFunction& f) {
    const int m = f.resolution();
    check_resolution(m + 1);
    DyadicFunction out(m + 1);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f[j >> 1];
    return out;
}

DyadicFunction dilation_power(const DyadicFunction& f, int a) {
    if (a < 0) throw std::invalid_argument("dyadic: dilation power must be nonnegative");
    check_resolution(f.resolution() + a);
    DyadicFunction out(f.resolution() + a);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f[j >> a];
    return out;
}

VectorDyadicFunction iota(const DyadicFunction& f) {
    const int m = f.resolution();
    std::vector<DyadicFunction> comps;
    comps.reserve(m + 1);
    DyadicFunction ek = f;
    std::vector<DyadicFunction> chain;  // E_m, ..., E_0
    chain.push_back(ek);
    for (int k = m; k >= 1; --k) {
        ek = cond_exp(ek, k - 1, Algebra::dyadic);
        chain.push_back(ek);
    }
    comps.push_back(chain.back());  // Delta_0 = E_0
    for (int k = 1; k <= m; ++k) comps.push_back(chain[m - k] - chain[m - k + 1]);
    return VectorDyadicFunction(std::move(comps));
}

// ---- block projections ------------------------------------------------------

BlockSpec::BlockSpec(std::vector<std::pair<int, int>> iv) : intervals(std::move(iv)) {
    int prev_end = 0;
    for (const auto& [a, b] : intervals) {
        if (a < 1 || b < a)
            throw std::invalid_argument("dyadic: block intervals must satisfy 1 <= a <= b");
        if (a <= prev_end)
            throw std::invalid_argument("dyadic: block intervals must be disjoint and increasing");
        prev_end = b;
    }
}

int BlockSpec::max_level() const {
    return intervals.empty() ? 0 : intervals.back().second;
}

int BlockSpec::block_of(int k) const {
    for (std::size_t n = 0; n < intervals.size(); ++n)
        if (intervals[n].first <= k && k <= intervals[n].second) return static_cast<int>(n + 1);
    return 0;
}

DyadicFunction block_projection(const DyadicFunction& f, const BlockSpec& spec) {
    const int m = f.resolution();
    if (spec.max_level() > m)
        throw std::invalid_argument("dyadic: block interval exceeds the resolution");
    std::vector<std::uint32_t> block_masks;
    block_masks.reserve(spec.intervals.size());
    for (const auto& [a, b] : spec.intervals) {
        std::uint32_t mask = 0;
        for (int k = a; k <= b; ++k) mask |= std::uint32_t{1} << (k - 1);
        block_masks.push_back(mask);
    }
    std::vector<double> c = walsh_transform(f);
    for (std::size_t A = 0; A < c.size(); ++A) {
        bool keep = false;
        if (A != 0)
            for (std::uint32_t bm : block_masks)
                if ((A & ~static_cast<std::size_t>(bm)) == 0) { keep = true; break; }
        if (!keep) c[A] = 0.0;
    }
    return walsh_synthesis(m, c);
}

DyadicFunction embed_ind_blocks(std::span<const DyadicFunction> fs, const BlockSpec& spec) {
    if (fs.size() != spec.intervals.size())
        throw std::invalid_argument("dyadic: one block per component required");
    for (std::size_t n = 0; n < fs.size(); ++n) {
        const auto& [a, b] = spec.intervals[n];
        if (fs[n].resolution() != b - a + 1)
            throw std::invalid_argument("dyadic: component resolution must equal its block length");
    }
    const int m = spec.max_level();
    check_resolution(m);
    DyadicFunction out(m);
    for (std::size_t n = 0; n < fs.size(); ++n) {
        const int a = spec.intervals[n].first;
        const int c = fs[n].resolution();
        const std::size_t sub_mask = (std::size_t{1} << c) - 1;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += fs[n][(i >> (a - 1)) & sub_mask];
    }
    return out;
}

// ---- truncated principal values ---------------------------------------------

VectorDyadicFunction truncated_pv_vector(const VectorDyadicFunction& f, int m_cut) {
    const int m = f.resolution();
    if (m_cut < 0 || m_cut > m) throw std::invalid_argument("dyadic: cut level out of range");
    std::vector<DyadicFunction> comps;
    comps.reserve(f.component_count());
    for (std::size_t n = 0; n < f.component_count(); ++n) {
        if (static_cast<int>(n) <= m_cut && static_cast<int>(n) <= m)
            comps.push_back(martingale_diff(f.components[n], static_cast<int>(n)));
        else
            comps.emplace_back(m);
    }
    return VectorDyadicFunction(std::move(comps));
}

DyadicFunction truncated_pv_scalar(const VectorDyadicFunction& f, int m_cut) {
    const int m = f.resolution();
    if (m_cut < 0 || m_cut > m) throw std::invalid_argument("dyadic: cut level out of range");
    DyadicFunction out(m);
    for (std::size_t n = 0; n < f.component_count() && static_cast<int>(n) <= m_cut; ++n)
        out += martingale_diff(f.components[n], static_cast<int>(n));
    return out;
}

DyadicFunction truncation_remainder(const VectorDyadicFunction& f, int m_cut) {
    const int m = f.resolution();
    if (m_cut < 0 || m_cut > m) throw std::invalid_argument("dyadic: cut level out of range");
    // kappa_n is constant on the ball {min y > m_cut}: 1 at n = 0, 2^{n-1} else,
    // and the ball average of f_n(x-.) is 2^{-m_cut} E_{m_cut} f_n(x).
    DyadicFunction out(m);
    const double ball = std::ldexp(1.0, -m_cut);
    for (std::size_t n = 0; n < f.component_count() && static_cast<int>(n) <= m_cut; ++n) {
        const double c = (n == 0) ? 1.0 : std::ldexp(1.0, static_cast<int>(n) - 1);
        DyadicFunction e = cond_exp(f.components[n], m_cut, Algebra::dyadic);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * ball * e[i];
    }
    return out;
}

DyadicFunction truncation_remainder_bound(const VectorDyadicFunction& f, int m_cut) {
    const int m = f.resolution();
    if (m_cut < 0 || m_cut > m) throw std::invalid_argument("dyadic: cut level out of range");
    DyadicFunction out(m);
    for (std::size_t n = 0; n < f.component_count() && static_cast<int>(n) <= m_cut; ++n) {
        const double u = (n == 0) ? std::ldexp(1.0, 1 - m_cut)
                                  : std::ldexp(1.0, static_cast<int>(n) - m_cut);
        DyadicFunction abs_fn = f.components[n];
        for (std::size_t i = 0; i < abs_fn.size(); ++i) abs_fn[i] = std::abs(abs_fn[i]);
        DyadicFunction e = cond_exp(abs_fn, m_cut, Algebra::dyadic);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += 0.5 * u * e[i];
    }
    return out;
}

}  // namespace hardylab::dyadic
