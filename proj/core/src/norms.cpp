#include "hardylab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hardylab/rng.hpp"

namespace hardylab {

std::string NormReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"value\":" << value << ",\"method\":\"" << hardylab::to_string(method)
       << "\",\"error\":" << error << ",\"samples\":" << samples << ",\"seed\":" << seed << "}";
    return os.str();
}

}  // namespace hardylab

namespace hardylab::norms {

DiscreteFunction::DiscreteFunction(std::vector<double> w, std::vector<double> v)
    : weights(std::move(w)), values(std::move(v)) {
    if (weights.size() != values.size())
        throw std::invalid_argument("norms: weights/values size mismatch");
    for (double x : weights)
        if (!(x > 0.0)) throw std::invalid_argument("norms: atom weights must be positive");
}

double DiscreteFunction::total_mass() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

bool DiscreteFunction::is_probability(double tol) const {
    return std::abs(total_mass() - 1.0) <= tol;
}

double DiscreteFunction::integral_abs() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * std::abs(values[i]);
    return s;
}

double DiscreteFunction::integral_sq() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i] * values[i];
    return s;
}

bool DiscreteVectorFunction::common_space(double tol) const {
    for (std::size_t n = 1; n < components.size(); ++n) {
        if (components[n].atom_count() != components[0].atom_count()) return false;
        for (std::size_t i = 0; i < components[0].atom_count(); ++i)
            if (std::abs(components[n].weights[i] - components[0].weights[i]) > tol) return false;
    }
    return true;
}

std::uint64_t DiscreteVectorFunction::product_size() const {
    std::uint64_t p = 1;
    for (const auto& c : components) {
        if (c.atom_count() == 0) return 0;
        if (p > (std::uint64_t{1} << 52) / c.atom_count()) return std::numeric_limits<std::uint64_t>::max();
        p *= c.atom_count();
    }
    return p;
}

NormReport l1_l2_norm(const DiscreteVectorFunction& fs) {
    if (fs.components.empty()) return NormReport::exact(0.0);
    if (!fs.common_space())
        throw std::invalid_argument("norms: l1_l2_norm needs all components on one common space");
    const auto& w = fs.components[0].weights;
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double q = 0.0;
        for (const auto& c : fs.components) q += c.values[i] * c.values[i];
        s += w[i] * std::sqrt(q);
    }
    return NormReport::exact(s);
}

NormReport ind_norm_exact(const DiscreteVectorFunction& fs) {
    if (fs.components.empty()) return NormReport::exact(0.0);
    for (const auto& c : fs.components)
        if (!c.is_probability(1e-9))
            throw std::invalid_argument("norms: independent-sum components must carry probability measures");
    const std::uint64_t prod = fs.product_size();
    if (prod > (std::uint64_t{1} << 24))
        throw std::invalid_argument(
            "norms: product space above 2^24 atoms; use ind_norm_mc for this instance");
    const std::size_t n = fs.component_count();
    std::vector<std::size_t> idx(n, 0);
    double total = 0.0;
    // mixed-radix enumeration of the product space
    for (std::uint64_t step = 0; step < prod; ++step) {
        double q = 0.0, w = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            double v = fs.components[k].values[idx[k]];
            q += v * v;
            w *= fs.components[k].weights[idx[k]];
        }
        total += w * std::sqrt(q);
        for (std::size_t k = 0; k < n; ++k) {
            if (++idx[k] < fs.components[k].atom_count()) break;
            idx[k] = 0;
        }
    }
    return NormReport::exact(total);
}

NormReport ind_norm_mc(const DiscreteVectorFunction& fs, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 1000)
        throw std::invalid_argument("norms: ind_norm_mc needs at least 10^3 samples");
    const std::size_t n = fs.component_count();
    // per-component cumulative weights for inverse-CDF draws
    std::vector<std::vector<double>> cdf(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!fs.components[k].is_probability(1e-9))
            throw std::invalid_argument("norms: independent-sum components must carry probability measures");
        double acc = 0.0;
        cdf[k].reserve(fs.components[k].atom_count());
        for (double w : fs.components[k].weights) {
            acc += w;
            cdf[k].push_back(acc);
        }
        cdf[k].back() = 1.0;
    }
    Rng rng = derive_rng(seed, "ind_norm_mc");
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        double q = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double u = rng.uniform();
            std::size_t a = std::lower_bound(cdf[k].begin(), cdf[k].end(), u) - cdf[k].begin();
            if (a >= cdf[k].size()) a = cdf[k].size() - 1;
            double v = fs.components[k].values[a];
            q += v * v;
        }
        double x = std::sqrt(q);
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / static_cast<double>(samples);
    double var = (sum_sq - sum * sum / static_cast<double>(samples)) / static_cast<double>(samples - 1);
    if (var < 0.0) var = 0.0;
    const double se = std::sqrt(var / static_cast<double>(samples));
    return NormReport::mc(mean, se, samples, seed);
}

// Phi_1(x) = x^2 up to 1, 2x - 1 beyond.
static double phi1(double x) { return x <= 1.0 ? x * x : 2.0 * x - 1.0; }

// int Phi_1(|f|/k) over possibly several components, weights unnormalized
static double phi1_level(const std::vector<const DiscreteFunction*>& parts, double k) {
    double s = 0.0;
    for (const auto* f : parts)
        for (std::size_t i = 0; i < f->values.size(); ++i)
            s += f->weights[i] * phi1(std::abs(f->values[i]) / k);
    return s;
}

static NormReport orlicz_bisect(const std::vector<const DiscreteFunction*>& parts) {
    double sup = 0.0, mass = 0.0;
    for (const auto* f : parts) {
        for (double v : f->values) sup = std::max(sup, std::abs(v));
        mass += f->total_mass();
    }
    if (sup == 0.0) return NormReport::exact(0.0);  // zero function, by convention
    // Phi_1(x) <= 2x, so k = 2 * sup * mass always reaches level <= 1
    double hi = std::max(sup, 2.0 * sup * mass);
    while (phi1_level(parts, hi) > 1.0) hi *= 2.0;
    double lo = hi;
    while (lo > 1e-300 && phi1_level(parts, lo * 0.5) <= 1.0) lo *= 0.5;
    lo *= 0.5;
    for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (phi1_level(parts, mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return NormReport::quad(hi, hi - lo);
}

NormReport orlicz_norm(const DiscreteFunction& f) {
    return orlicz_bisect({&f});
}

NormReport disjoint_sum_orlicz(const DiscreteVectorFunction& fs) {
    std::vector<const DiscreteFunction*> parts;
    parts.reserve(fs.components.size());
    for (const auto& c : fs.components) parts.push_back(&c);
    return orlicz_bisect(parts);
}

DiscreteFunction disjoint_coproduct(const DiscreteVectorFunction& fs) {
    std::vector<double> w, v;
    for (const auto& c : fs.components) {
        w.insert(w.end(), c.weights.begin(), c.weights.end());
        v.insert(v.end(), c.values.begin(), c.values.end());
    }
    return DiscreteFunction(std::move(w), std::move(v));
}

// objective of the radial truncation at level c:
//   F(c) = int (|f|-c)_+ + t (int min(|f|,c)^2)^(1/2)
static double truncation_objective(const std::vector<std::pair<double, double>>& sorted_fw,
                                   double t, double c) {
    double lin = 0.0, sq = 0.0;
    for (const auto& [v, w] : sorted_fw) {
        if (v > c) {
            lin += w * (v - c);
            sq += w * c * c;
        } else {
            sq += w * v * v;
        }
    }
    return lin + t * std::sqrt(sq);
}

NormReport l1_plus_l2_inf(const DiscreteFunction& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("norms: K-functional weight t must be positive");
    std::vector<std::pair<double, double>> fw(f.atom_count());
    for (std::size_t i = 0; i < f.atom_count(); ++i) fw[i] = {std::abs(f.values[i]), f.weights[i]};
    std::sort(fw.begin(), fw.end());
    double best = std::min(truncation_objective(fw, t, 0.0),
                           truncation_objective(fw, t, fw.empty() ? 0.0 : fw.back().first));
    // breakpoints at the sorted |f| values
    for (const auto& [v, w] : fw) best = std::min(best, truncation_objective(fw, t, v));
    // per-segment stationary points: on {|f| > c} fixed with mass W and tail
    // l^2 mass Q below, F' = 0 at c^2 = Q / (t^2 - W) when t^2 > W
    double suffix_mass = 0.0;
    for (const auto& [v, w] : fw) suffix_mass += w;
    double prefix_q = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i <= fw.size(); ++i) {
        const double lo = prev;
        const double hi = (i < fw.size()) ? fw[i].first : std::numeric_limits<double>::infinity();
        if (t * t > suffix_mass && suffix_mass > 0.0) {
            double c = std::sqrt(prefix_q / (t * t - suffix_mass));
            if (c > lo && c < hi) best = std::min(best, truncation_objective(fw, t, c));
        }
        if (i < fw.size()) {
            prefix_q += fw[i].second * fw[i].first * fw[i].first;
            suffix_mass -= fw[i].second;
            prev = fw[i].first;
        }
    }
    return NormReport::exact(best);
}

NormReport weak_l1(const DiscreteFunction& g) {
    // sup_l l mu{|g| > l}: approached from below at each atom value, so the
    // candidate at value v is v * mu{|g| >= v}
    std::vector<std::pair<double, double>> fw(g.atom_count());
    for (std::size_t i = 0; i < g.atom_count(); ++i) fw[i] = {std::abs(g.values[i]), g.weights[i]};
    std::sort(fw.begin(), fw.end(), std::greater<>());
    double mass = 0.0, best = 0.0;
    for (std::size_t i = 0; i < fw.size(); ++i) {
        mass += fw[i].second;
        if (i + 1 < fw.size() && fw[i + 1].first == fw[i].first) continue;  // ties: take full mass at the level
        best = std::max(best, fw[i].first * mass);
    }
    return NormReport::exact(best);
}

// ---- constrained K-functional ------------------------------------------------

namespace {

struct SmoothedObjective {
    const std::vector<double>& w;
    const Field& f;
    const SubspaceMap& sub;
    double t;
    double eps;
    mutable Field h, resid;

    double eval(std::span<const double> a, std::vector<double>* grad) const {
        sub.apply(a, h);
        const std::size_t comps = f.size(), atoms = w.size();
        resid.assign(comps, std::vector<double>(atoms, 0.0));
        double l1 = 0.0, l2sq = 0.0;
        for (std::size_t i = 0; i < atoms; ++i) {
            double rq = 0.0, hq = 0.0;
            for (std::size_t c = 0; c < comps; ++c) {
                double r = f[c][i] - h[c][i];
                rq += r * r;
                hq += h[c][i] * h[c][i];
            }
            l1 += w[i] * std::sqrt(rq + eps * eps);
            l2sq += w[i] * hq;
        }
        double l2 = std::sqrt(l2sq + eps * eps);
        if (grad) {
            // d/dh of the smoothed objective, then pull back through the adjoint
            for (std::size_t i = 0; i < atoms; ++i) {
                double rq = eps * eps;
                for (std::size_t c = 0; c < comps; ++c) {
                    double r = f[c][i] - h[c][i];
                    rq += r * r;
                }
                double inv = 1.0 / std::sqrt(rq);
                for (std::size_t c = 0; c < comps; ++c)
                    resid[c][i] = -(f[c][i] - h[c][i]) * inv + t * h[c][i] / l2;
            }
            grad->assign(sub.dim, 0.0);
            sub.adjoint(resid, *grad);
        }
        return l1 + t * l2;
    }

    double exact(std::span<const double> a) const {
        sub.apply(a, h);
        const std::size_t comps = f.size(), atoms = w.size();
        double l1 = 0.0, l2sq = 0.0;
        for (std::size_t i = 0; i < atoms; ++i) {
            double rq = 0.0, hq = 0.0;
            for (std::size_t c = 0; c < comps; ++c) {
                double r = f[c][i] - h[c][i];
                rq += r * r;
                hq += h[c][i] * h[c][i];
            }
            l1 += w[i] * std::sqrt(rq);
            l2sq += w[i] * hq;
        }
        return l1 + t * std::sqrt(l2sq);
    }
};

}  // namespace

ConstrainedKReport l1_plus_l2_inf_constrained(const std::vector<double>& weights, const Field& f,
                                              const SubspaceMap& subspace, double t,
                                              std::uint64_t seed) {
    if (!(t > 0.0)) throw std::invalid_argument("norms: K-functional weight t must be positive");
    if (f.empty() || f[0].size() != weights.size())
        throw std::invalid_argument("norms: field/weights shape mismatch");

    // membership check: the basis is orthonormal, so adjoint-then-apply must reproduce f
    std::vector<double> a_f(subspace.dim, 0.0);
    subspace.adjoint(f, a_f);
    Field back;
    subspace.apply(a_f, back);
    double num = 0.0, den = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c)
        for (std::size_t i = 0; i < weights.size(); ++i) {
            double d = f[c][i] - back[c][i];
            num += weights[i] * d * d;
            den += weights[i] * f[c][i] * f[c][i];
        }
    if (num > 1e-16 * std::max(1.0, den))
        throw std::invalid_argument("norms: f does not lie in the given subspace");

    // certified lower bound: the unconstrained K_t of the pointwise modulus
    std::vector<double> mod(weights.size(), 0.0);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double q = 0.0;
        for (std::size_t c = 0; c < f.size(); ++c) q += f[c][i] * f[c][i];
        mod[i] = std::sqrt(q);
    }
    const double lower = l1_plus_l2_inf(DiscreteFunction(weights, mod), t).value;

    SmoothedObjective obj{weights, f, subspace, t, 1e-2, {}, {}};

    double best = std::numeric_limits<double>::infinity();
    Rng rng = derive_rng(seed, "constrained_k");
    const int restarts = 10;  // zero start, full start, 8 random
    std::vector<double> a(subspace.dim), grad(subspace.dim), trial(subspace.dim);
    for (int r = 0; r < restarts; ++r) {
        if (r == 0) {
            std::fill(a.begin(), a.end(), 0.0);  // h = 0: pure L^1 endpoint
        } else if (r == 1) {
            a = a_f;  // h = f: pure L^2 endpoint
        } else {
            for (std::size_t j = 0; j < a.size(); ++j)
                a[j] = a_f[j] * rng.uniform() + 0.1 * rng.normal();
        }
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            obj.eps = eps;
            double step = 0.5;
            double cur = obj.eval(a, &grad);
            for (int it = 0; it < 200; ++it) {
                double gn = 0.0;
                for (double g : grad) gn += g * g;
                if (gn < 1e-18) break;
                bool moved = false;
                while (step > 1e-14) {
                    for (std::size_t j = 0; j < a.size(); ++j) trial[j] = a[j] - step * grad[j];
                    double cand = obj.eval(trial, nullptr);
                    if (cand < cur - 1e-15) {
                        a.swap(trial);
                        cur = cand;
                        moved = true;
                        step *= 1.5;
                        break;
                    }
                    step *= 0.5;
                }
                if (!moved) break;
                cur = obj.eval(a, &grad);
            }
        }
        best = std::min(best, obj.exact(a));
    }
    if (best < lower) best = lower;  // the certified bound wins over solver noise
    return {NormReport::quad(best, 1e-6 * std::max(1.0, best)), lower};
}

}  // namespace hardylab::norms
