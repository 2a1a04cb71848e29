#include "hardylab/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hardylab::extremal {

Partition Partition::singletons(std::size_t atoms) {
    Partition p;
    p.block_of.resize(atoms);
    for (std::size_t i = 0; i < atoms; ++i) p.block_of[i] = static_cast<int>(i);
    p.block_count = static_cast<int>(atoms);
    return p;
}

Partition Partition::trivial(std::size_t atoms) {
    Partition p;
    p.block_of.assign(atoms, 0);
    p.block_count = 1;
    return p;
}

FiniteFiltration::FiniteFiltration(std::vector<double> weights, std::vector<Partition> partitions)
    : weights_(std::move(weights)), partitions_(std::move(partitions)) {
    double total = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw std::invalid_argument("extremal: atom weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("extremal: atom weights must sum to 1");
    for (std::size_t k = 0; k < partitions_.size(); ++k) {
        const Partition& P = partitions_[k];
        if (P.block_of.size() != weights_.size())
            throw std::invalid_argument("extremal: partition size mismatch");
        for (int b : P.block_of)
            if (b < 0 || b >= P.block_count)
                throw std::invalid_argument("extremal: malformed partition block index");
        if (k > 0) {
            // coarsening: the block of P_k must be a function of the block of P_{k-1}
            std::map<int, int> image;
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                int fine = partitions_[k - 1].block_of[i];
                int coarse = P.block_of[i];
                auto [it, inserted] = image.emplace(fine, coarse);
                if (!inserted && it->second != coarse)
                    throw std::invalid_argument(
                        "extremal: partitions must be decreasing (each a coarsening of the last)");
            }
        }
    }
}

const Partition& FiniteFiltration::partition(int k) const {
    if (k < 1) throw std::invalid_argument("extremal: partition index must be >= 1");
    if (k > depth()) k = depth();
    return partitions_[static_cast<std::size_t>(k - 1)];
}

std::vector<double> cond_exp_partition(const std::vector<double>& f, const Partition& P,
                                       const std::vector<double>& weights) {
    if (f.size() != P.block_of.size() || f.size() != weights.size())
        throw std::invalid_argument("extremal: malformed partition");
    std::vector<double> sum(P.block_count, 0.0), mass(P.block_count, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        sum[P.block_of[i]] += weights[i] * f[i];
        mass[P.block_of[i]] += weights[i];
    }
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        int b = P.block_of[i];
        out[i] = mass[b] > 0.0 ? sum[b] / mass[b] : 0.0;
    }
    return out;
}

std::vector<double> FiniteFiltration::cond_exp(const std::vector<double>& f, int k) const {
    if (k <= 0) return f;
    return cond_exp_partition(f, partition(k), weights_);
}

double FiniteFiltration::expectation(const std::vector<double>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += weights_[i] * f[i];
    return s;
}

bool FiniteFiltration::measurable(const std::vector<double>& f, int k, double tol) const {
    if (k <= 0) return true;
    const Partition& P = partition(k);
    std::vector<double> rep(P.block_count, 0.0);
    std::vector<bool> seen(P.block_count, false);
    for (std::size_t i = 0; i < f.size(); ++i) {
        int b = P.block_of[i];
        if (!seen[b]) {
            rep[b] = f[i];
            seen[b] = true;
        } else if (std::abs(rep[b] - f[i]) > tol) {
            return false;
        }
    }
    return true;
}

std::string FiniteFiltration::to_json() const {
    nlohmann::json j;
    j["weights"] = weights_;
    j["partitions"] = nlohmann::json::array();
    for (const auto& P : partitions_) j["partitions"].push_back(P.block_of);
    return j.dump();
}

FiniteFiltration FiniteFiltration::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<double> weights = j.at("weights").get<std::vector<double>>();
    std::vector<Partition> parts;
    for (const auto& arr : j.at("partitions")) {
        Partition P;
        P.block_of = arr.get<std::vector<int>>();
        P.block_count = P.block_of.empty() ? 0 : *std::max_element(P.block_of.begin(), P.block_of.end()) + 1;
        parts.push_back(std::move(P));
    }
    return FiniteFiltration(std::move(weights), std::move(parts));
}

void AdaptedSequence::validate(const FiniteFiltration& filt, double tol) const {
    for (std::size_t k = 0; k < phi.size(); ++k) {
        if (phi[k].size() != filt.atom_count())
            throw std::invalid_argument("extremal: phi size mismatch");
        if (!filt.measurable(phi[k], static_cast<int>(k + 1), tol))
            throw std::invalid_argument("extremal: sequence is not adapted (phi_" +
                                        std::to_string(k + 1) + " not F*-measurable)");
    }
}

LambdaRecursion lambda_recursion(const AdaptedSequence& phi, const FiniteFiltration& filt) {
    phi.validate(filt);
    const std::size_t n = phi.phi.size();
    LambdaRecursion out;
    std::vector<double> prev(filt.atom_count(), 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<double> root(filt.atom_count());
        for (std::size_t i = 0; i < root.size(); ++i) {
            double p = phi.phi[k - 1][i];
            root[i] = std::sqrt(p * p + prev[i] * prev[i]);
        }
        prev = filt.cond_exp(root, static_cast<int>(k + 1));
        out.lambda.push_back(prev);
    }
    out.e_lambda_n = n == 0 ? 0.0 : filt.expectation(out.lambda.back());
    return out;
}

static std::vector<double> clip(const std::vector<double>& phi, double M) {
    std::vector<double> out(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        double v = phi[i];
        double s = (v > 0.0) - (v < 0.0);
        double a = std::abs(v);
        if (a > M)
            out[i] = M * s;
        else if (a < 1.0 / M)
            out[i] = s / M;
        else
            out[i] = v;
    }
    return out;
}

std::vector<std::vector<double>> extremal_sequence(const AdaptedSequence& phi,
                                                   const FiniteFiltration& filt, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("extremal: clip level must be positive");
    phi.validate(filt);
    const std::size_t n = phi.phi.size();
    const std::size_t atoms = filt.atom_count();

    std::vector<std::vector<double>> clipped(n);
    for (std::size_t k = 0; k < n; ++k) clipped[k] = clip(phi.phi[k], M);

    // Lambda_k = (|phi_k^(M)|^2 + (E*_k Lambda_{k-1})^2)^(1/2), lambda_k = E*_{k+1} Lambda_k
    std::vector<std::vector<double>> Lambda(n), lambda(n);
    std::vector<double> prev(atoms, 0.0);  // E*_k Lambda_{k-1} of the previous step
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<double> L(atoms);
        const std::vector<double>& ephi = clipped[k - 1];
        const std::vector<double>& prevL = (k == 1) ? prev : Lambda[k - 2];
        std::vector<double> estar =
            (k == 1) ? std::vector<double>(atoms, 0.0) : filt.cond_exp(prevL, static_cast<int>(k));
        for (std::size_t i = 0; i < atoms; ++i)
            L[i] = std::sqrt(ephi[i] * ephi[i] + estar[i] * estar[i]);
        Lambda[k - 1] = L;
        lambda[k - 1] = filt.cond_exp(L, static_cast<int>(k + 1));
    }

    // f_k = phi_k^(M) prod_{j<k} Lambda_j/lambda_j + (phi_k - phi_k^(M));
    // on blocks where lambda_j = 0 the factor is 1 (Lambda_j vanishes there too)
    std::vector<double> product(atoms, 1.0);
    std::vector<std::vector<double>> f(n);
    for (std::size_t k = 1; k <= n; ++k) {
        f[k - 1].resize(atoms);
        for (std::size_t i = 0; i < atoms; ++i)
            f[k - 1][i] = clipped[k - 1][i] * product[i] + (phi.phi[k - 1][i] - clipped[k - 1][i]);
        if (k < n) {
            for (std::size_t i = 0; i < atoms; ++i) {
                double lam = lambda[k - 1][i];
                product[i] *= (lam > 0.0) ? Lambda[k - 1][i] / lam : 1.0;
            }
        }
    }
    return f;
}

double sum_sq_objective(const std::vector<std::vector<double>>& f, const FiniteFiltration& filt) {
    std::vector<double> root(filt.atom_count(), 0.0);
    for (const auto& fk : f)
        for (std::size_t i = 0; i < root.size(); ++i) root[i] += fk[i] * fk[i];
    for (double& v : root) v = std::sqrt(v);
    return filt.expectation(root);
}

// ---- telescoping ---------------------------------------------------------------

static norms::DiscreteVectorFunction as_components(const std::vector<std::vector<double>>& phi,
                                                   const FiniteFiltration& filt) {
    std::vector<norms::DiscreteFunction> comps;
    comps.reserve(phi.size());
    for (const auto& p : phi) comps.emplace_back(filt.weights(), p);
    return norms::DiscreteVectorFunction(std::move(comps));
}

TelescopingReport telescoping_bound(const std::vector<std::vector<double>>& phi,
                                    const std::vector<std::vector<double>>& lambda,
                                    TelescopingVariant variant, const FiniteFiltration& filt,
                                    std::uint64_t seed) {
    TelescopingReport rep;
    const std::size_t n = phi.size();
    if (lambda.size() != n) {
        rep.detail = "lambda sequence length mismatch";
        return rep;
    }
    for (const auto& p : phi)
        for (double v : p)
            if (v < 0.0) {
                rep.detail = "phi must be nonnegative";
                return rep;
            }

    // hypothesis check
    const double tol = 1e-9;
    bool ok = true;
    std::vector<double> prev(filt.atom_count(), 0.0);
    for (std::size_t k = 0; k < n && ok; ++k) {
        std::vector<double> root(filt.atom_count());
        for (std::size_t i = 0; i < root.size(); ++i)
            root[i] = std::sqrt(phi[k][i] * phi[k][i] + prev[i] * prev[i]);
        double e_root = filt.expectation(root);
        if (variant == TelescopingVariant::i) {
            // lambda_k must equal the scalar recursion E sqrt(phi_k^2 + lambda_{k-1}^2)
            for (double v : lambda[k])
                if (std::abs(v - e_root) > tol) ok = false;
        } else {
            if (filt.expectation(lambda[k]) < e_root - tol) ok = false;
            for (double v : lambda[k])
                if (v < -tol) ok = false;
        }
        prev = lambda[k];
    }
    rep.hypothesis_ok = ok;
    if (!ok) {
        rep.detail = "hypothesis violated; no assertion made";
        return rep;
    }

    auto fs = as_components(phi, filt);
    rep.l1_l2 = norms::l1_l2_norm(fs).value;
    rep.ind = fs.product_size() <= (std::uint64_t{1} << 22)
                  ? norms::ind_norm_exact(fs).value
                  : norms::ind_norm_mc(fs, 200000, seed == 0 ? 1 : seed).value;

    if (variant == TelescopingVariant::i) {
        rep.bound = 2.0 * filt.expectation(lambda.back());
    } else {
        double sup = 0.0;
        for (const auto& l : lambda)
            for (double v : l) sup = std::max(sup, v);
        rep.bound = (1.0 + std::sqrt(2.0)) * std::sqrt(filt.expectation(lambda.back())) * std::sqrt(sup);
    }
    rep.satisfied = std::max(rep.l1_l2, rep.ind) <= rep.bound + 1e-9;
    return rep;
}

TelescopingReport telescoping_bound_i(const std::vector<std::vector<double>>& phi,
                                      const FiniteFiltration& filt, std::uint64_t seed) {
    std::vector<std::vector<double>> lambda;
    double prev = 0.0;
    for (const auto& p : phi) {
        std::vector<double> root(filt.atom_count());
        for (std::size_t i = 0; i < root.size(); ++i)
            root[i] = std::sqrt(p[i] * p[i] + prev * prev);
        prev = filt.expectation(root);
        lambda.emplace_back(filt.atom_count(), prev);
    }
    return telescoping_bound(phi, lambda, TelescopingVariant::i, filt, seed);
}

// ---- Stein variants --------------------------------------------------------------

bool sigma_independent(const std::vector<double>& f, const Partition& P,
                       const std::vector<double>& weights, double tol) {
    // level sets of f
    std::map<double, int> level_of;
    std::vector<int> lev(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto [it, inserted] = level_of.emplace(f[i], static_cast<int>(level_of.size()));
        lev[i] = it->second;
    }
    const int L = static_cast<int>(level_of.size());
    std::vector<double> pl(L, 0.0), pb(P.block_count, 0.0);
    std::vector<std::vector<double>> joint(L, std::vector<double>(P.block_count, 0.0));
    for (std::size_t i = 0; i < f.size(); ++i) {
        pl[lev[i]] += weights[i];
        pb[P.block_of[i]] += weights[i];
        joint[lev[i]][P.block_of[i]] += weights[i];
    }
    for (int l = 0; l < L; ++l)
        for (int b = 0; b < P.block_count; ++b)
            if (std::abs(joint[l][b] - pl[l] * pb[b]) > tol) return false;
    return true;
}

SteinReport check_stein_variants(const std::vector<std::vector<double>>& f,
                                 const FiniteFiltration& filt, SteinVariant variant, double p) {
    SteinReport rep;
    const std::size_t n = f.size();
    bool ok = true;
    if (variant == SteinVariant::lepingle) {
        // f_k must be F*_{k-1}-measurable (F*_0 = everything)
        for (std::size_t k = 1; k <= n && ok; ++k)
            if (!filt.measurable(f[k - 1], static_cast<int>(k - 1))) ok = false;
    } else if (variant == SteinVariant::duallep) {
        for (std::size_t k = 1; k <= n && ok; ++k) {
            int next = static_cast<int>(k + 1);
            if (next <= filt.depth() &&
                !sigma_independent(f[k - 1], filt.partition(next), filt.weights()))
                ok = false;
        }
    } else {
        if (!(p > 1.0)) ok = false;
    }
    rep.hypothesis_ok = ok;
    if (!ok) rep.detail = "hypothesis violated; reporting only";

    const double power = (variant == SteinVariant::classical_p) ? p : 1.0;
    std::vector<double> lhs_q(filt.atom_count(), 0.0), rhs_q(filt.atom_count(), 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const auto& fk = f[k - 1];
        std::vector<double> ek = filt.cond_exp(fk, static_cast<int>(k));
        for (std::size_t i = 0; i < fk.size(); ++i) {
            lhs_q[i] += fk[i] * fk[i];
            rhs_q[i] += ek[i] * ek[i];
        }
    }
    for (std::size_t i = 0; i < lhs_q.size(); ++i) {
        lhs_q[i] = std::pow(lhs_q[i], power / 2.0);
        rhs_q[i] = std::pow(rhs_q[i], power / 2.0);
    }
    rep.lhs = filt.expectation(lhs_q);
    rep.rhs = filt.expectation(rhs_q);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 1.0;
    return rep;
}

}  // namespace hardylab::extremal
