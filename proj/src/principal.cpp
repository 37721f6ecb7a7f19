#include "leelab/principal.hpp"
#include "leelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace leelab {

namespace {
constexpr double pi = std::numbers::pi;
} // namespace

void model_params::validate() const
{
    if (m <= 0.0) throw config_error("model_params: m must be > 0");
    if (!(m > mu)) throw config_error("model_params: requires m > mu");
    if (n < 0) throw config_error("model_params: n must be >= 0");
    if (!std::isfinite(lambda)) throw config_error("model_params: lambda must be finite");
}

std::vector<double> pool_values_at(const manifold_spec& spec,
                                   const std::vector<mode>& pool, const point& a)
{
    std::vector<double> f(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
        f[i] = eigenfunction_at(spec, pool[i], a);
    return f;
}

double k0_diagonal(const occupation_state& state, const model_params& p, double E)
{
    return h0_eigenvalue(state, p.m) - E + p.mu;
}

namespace {

void require_operating_domain(const model_params& p, double E)
{
    // All closed-form t-integrals need h0 + m - E > 0; the weakest state has
    // h0 = nm.
    if (E >= (p.n + 1) * p.m)
        throw numeric_error("principal operator: E >= (n+1)m, t-integrals diverge");
}

} // namespace

double k1_diagonal(double h0, const model_params& p, double E,
                   const diag_spectrum& table)
{
    if (E >= h0 + p.m)
        throw numeric_error("k1_diagonal: E >= h0 + m, t-integral diverges");
    if (p.lambda == 0.0) return 0.0;
    const double a = p.m - p.mu;
    const double b = h0 + p.m - E;
    const double inv2m = 1.0 / (2.0 * p.m);
    double sum = 0.0;
    for (std::size_t i = 0; i < table.sigma.size(); ++i) {
        const double x = table.sigma[i] * inv2m;
        sum += table.weight[i] * (1.0 / (a + x) - 1.0 / (b + x));
    }
    return p.lambda * p.lambda * sum;
}

double k1_tail_estimate(double h0, const model_params& p, double E,
                        const diag_spectrum& table)
{
    const double a = p.m - p.mu;
    const double b = h0 + p.m - E;
    const double x0 = table.sigma_cap / (2.0 * p.m);
    const double lam2 = p.lambda * p.lambda;
    if (p.spec.dimension() == 2)
        return lam2 * (2.0 * p.m / (4.0 * pi)) * std::log((x0 + b) / (x0 + a));
    const double i3 = pi * (std::sqrt(b) - std::sqrt(a)) +
                      2.0 * std::sqrt(a) * std::atan(std::sqrt(x0 / a)) -
                      2.0 * std::sqrt(b) * std::atan(std::sqrt(x0 / b));
    return lam2 * std::pow(2.0 * p.m, 1.5) / (4.0 * pi * pi) * i3;
}

double u_matrix_element(const occupation_state& row, const occupation_state& col,
                        const model_params& p, double E,
                        const std::vector<mode>& pool,
                        const std::vector<double>& f_a)
{
    if (p.lambda == 0.0 || col.n == 0) return 0.0;
    require_operating_domain(p, E);
    const double lam2 = p.lambda * p.lambda;
    const double inv2m = 1.0 / (2.0 * p.m);
    const double gap = (col.n + 1) * p.m - E;
    const double s_col = col.laplacian_sum;

    if (row == col) {
        double sum = 0.0;
        for (const auto& [idx, cnt] : col.occ) {
            const double denom = (s_col + pool[idx].sigma) * inv2m + gap;
            sum += cnt * f_a[idx] * f_a[idx] / denom;
        }
        return -lam2 * sum;
    }

    // must differ by moving exactly one boson from sigma (in col) to tau
    int sigma_idx = -1, tau_idx = -1;
    std::size_t ir = 0, ic = 0;
    while (ir < row.occ.size() || ic < col.occ.size()) {
        const int ri = ir < row.occ.size() ? row.occ[ir].first : INT32_MAX;
        const int ci = ic < col.occ.size() ? col.occ[ic].first : INT32_MAX;
        int idx, diff;
        if (ri < ci) {
            idx = ri;
            diff = row.occ[ir].second;
            ++ir;
        } else if (ci < ri) {
            idx = ci;
            diff = -col.occ[ic].second;
            ++ic;
        } else {
            idx = ri;
            diff = row.occ[ir].second - col.occ[ic].second;
            ++ir;
            ++ic;
        }
        if (diff == 0) continue;
        if (diff == 1 && tau_idx < 0) {
            tau_idx = idx;
        } else if (diff == -1 && sigma_idx < 0) {
            sigma_idx = idx;
        } else {
            return 0.0; // differ in two or more moves
        }
    }
    if (sigma_idx < 0 || tau_idx < 0) return 0.0;

    const double n_sigma = col.count_of(sigma_idx);
    const double n_tau = col.count_of(tau_idx);
    const double denom = (s_col + pool[tau_idx].sigma) * inv2m + gap;
    return -lam2 * std::sqrt(n_sigma * (n_tau + 1.0)) * f_a[sigma_idx] *
           f_a[tau_idx] / denom;
}

namespace {

// Per-entry weight for the one-boson-move part. mode_kind:
//   0: Phi       -> 1/denom
//   1: dPhi/dE   -> 1/denom^2
//   2: Phi_eps   -> e^{-eps (sigma+tau)/4m} / denom
struct u_entry_map {
    int kind = 0;
    double eps = 0.0;
    double inv4m = 0.0;

    double operator()(double denom, double sigma_sum) const
    {
        switch (kind) {
        case 0: return 1.0 / denom;
        case 1: return 1.0 / (denom * denom);
        default: return std::exp(-eps * sigma_sum * inv4m) / denom;
        }
    }
};

Eigen::MatrixXd assemble_u_part(const sector_basis& basis, const model_params& p,
                                double E, const std::vector<double>& f_a,
                                const u_entry_map& map, bool parallel)
{
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(dim, dim);
    if (p.lambda == 0.0 || basis.n == 0) return u;
    require_operating_domain(p, E);

    const double lam2 = p.lambda * p.lambda;
    const double inv2m = 1.0 / (2.0 * p.m);
    const double gap = (basis.n + 1) * p.m - E;
    const auto& pool = basis.mode_pool;

#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (Eigen::Index c = 0; c < dim; ++c) {
        const occupation_state& col = basis.states[c];
        const double s_col = col.laplacian_sum;
        double diag = 0.0;
        for (const auto& [sidx, scnt] : col.occ) {
            const double sig = pool[sidx].sigma;
            // sigma -> sigma: diagonal
            diag += scnt * f_a[sidx] * f_a[sidx] *
                    map((s_col + sig) * inv2m + gap, 2.0 * sig);
            // sigma -> tau moves
            occupation_state moved = col;
            {
                auto it = std::find_if(moved.occ.begin(), moved.occ.end(),
                                       [&](const auto& q) { return q.first == sidx; });
                if (--it->second == 0) moved.occ.erase(it);
            }
            for (std::size_t tidx = 0; tidx < pool.size(); ++tidx) {
                if (static_cast<int>(tidx) == sidx) continue;
                const double tau = pool[tidx].sigma;
                occupation_state target = moved;
                auto it = std::find_if(target.occ.begin(), target.occ.end(),
                                       [&](const auto& q) {
                                           return q.first >= static_cast<int>(tidx);
                                       });
                if (it != target.occ.end() && it->first == static_cast<int>(tidx))
                    ++it->second;
                else
                    target.occ.insert(it, {static_cast<int>(tidx), 1});
                const long r = basis.index_of(target);
                if (r < 0 || r > c) continue; // pair handled from the larger column
                const double n_tau = col.count_of(static_cast<int>(tidx));
                const double amp = std::sqrt(scnt * (n_tau + 1.0));
                u(r, c) = -lam2 * amp * f_a[sidx] * f_a[tidx] *
                          map((s_col + tau) * inv2m + gap, sig + tau);
            }
        }
        u(c, c) = -lam2 * diag;
    }
    // mirror the strictly-upper entries written above
    for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index r = 0; r < c; ++r) u(c, r) = u(r, c);
    return u;
}

// K1-like diagonal, grouped by distinct laplacian_sum values.
Eigen::VectorXd diagonal_by_h0(const sector_basis& basis,
                               const std::function<double(double)>& per_h0,
                               bool parallel)
{
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    std::vector<double> s_values(basis.dim());
    for (std::size_t i = 0; i < basis.dim(); ++i)
        s_values[i] = basis.states[i].laplacian_sum;
    std::vector<double> uniq = s_values;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    std::vector<double> per_value(uniq.size());
    const auto nu = static_cast<Eigen::Index>(uniq.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (Eigen::Index i = 0; i < nu; ++i)
        per_value[i] = per_h0(uniq[i] / (2.0 * basis.mass) + basis.n * basis.mass);

    Eigen::VectorXd out(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto it = std::lower_bound(uniq.begin(), uniq.end(), s_values[i]);
        out(i) = per_value[it - uniq.begin()];
    }
    return out;
}

} // namespace

principal_matrix assemble_phi(const sector_basis& basis, const model_params& p,
                              double E, const diag_spectrum& k1_table,
                              const std::vector<double>& f_a,
                              const assembly_options& opt)
{
    p.validate();
    require_operating_domain(p, E);
    principal_matrix pm;
    pm.energy = E;
    const auto dim = static_cast<Eigen::Index>(basis.dim());

    pm.k0.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        pm.k0(i) = k0_diagonal(basis.states[i], p, E);

    pm.k1 = diagonal_by_h0(
        basis, [&](double h0) { return k1_diagonal(h0, p, E, k1_table); },
        opt.parallel);
    pm.k1_tail =
        basis.dim() ? k1_tail_estimate(h0_eigenvalue(basis.states[0], p.m), p, E, k1_table)
                    : 0.0;
    if (opt.add_k1_tail)
        pm.k1 += diagonal_by_h0(
            basis, [&](double h0) { return k1_tail_estimate(h0, p, E, k1_table); },
            opt.parallel);

    pm.u = assemble_u_part(basis, p, E, f_a, u_entry_map{0, 0.0, 0.0}, opt.parallel);
    pm.phi = pm.u;
    pm.phi.diagonal() += pm.k0 + pm.k1;
    return pm;
}

principal_matrix assemble_dphi_de(const sector_basis& basis, const model_params& p,
                                  double E, const diag_spectrum& k1_table,
                                  const std::vector<double>& f_a,
                                  const assembly_options& opt)
{
    p.validate();
    require_operating_domain(p, E);
    principal_matrix pm;
    pm.energy = E;
    const auto dim = static_cast<Eigen::Index>(basis.dim());

    pm.k0 = Eigen::VectorXd::Constant(dim, -1.0);

    const double lam2 = p.lambda * p.lambda;
    const double inv2m = 1.0 / (2.0 * p.m);
    pm.k1 = diagonal_by_h0(
        basis,
        [&](double h0) {
            if (lam2 == 0.0) return 0.0;
            const double b = h0 + p.m - E;
            double sum = 0.0;
            for (std::size_t i = 0; i < k1_table.sigma.size(); ++i) {
                const double d = b + k1_table.sigma[i] * inv2m;
                sum += k1_table.weight[i] / (d * d);
            }
            return -lam2 * sum;
        },
        opt.parallel);

    pm.u = assemble_u_part(basis, p, E, f_a, u_entry_map{1, 0.0, 0.0}, opt.parallel);
    pm.phi = pm.u;
    pm.phi.diagonal() += pm.k0 + pm.k1;
    return pm;
}

principal_matrix assemble_phi_serial(const sector_basis& basis,
                                     const model_params& p, double E,
                                     const diag_spectrum& k1_table,
                                     const std::vector<double>& f_a)
{
    // Straightforward reference path: every U entry through u_matrix_element.
    p.validate();
    require_operating_domain(p, E);
    principal_matrix pm;
    pm.energy = E;
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    pm.k0.resize(dim);
    pm.k1.resize(dim);
    pm.u = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        pm.k0(i) = k0_diagonal(basis.states[i], p, E);
        pm.k1(i) = k1_diagonal(h0_eigenvalue(basis.states[i], p.m), p, E, k1_table);
    }
    for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index r = 0; r <= c; ++r) {
            const double val = u_matrix_element(basis.states[r], basis.states[c], p, E,
                                                basis.mode_pool, f_a);
            pm.u(r, c) = val;
            pm.u(c, r) = val;
        }
    pm.k1_tail =
        basis.dim() ? k1_tail_estimate(h0_eigenvalue(basis.states[0], p.m), p, E, k1_table)
                    : 0.0;
    pm.phi = pm.u;
    pm.phi.diagonal() += pm.k0 + pm.k1;
    return pm;
}

double mu_epsilon(const model_params& p, double eps, const diag_spectrum& table)
{
    if (eps <= 0.0) throw numeric_error("mu_epsilon: eps must be > 0");
    const double a = p.m - p.mu;
    const double inv2m = 1.0 / (2.0 * p.m);
    double sum = 0.0;
    for (std::size_t i = 0; i < table.sigma.size(); ++i) {
        const double x = table.sigma[i] * inv2m;
        sum += table.weight[i] * std::exp(-eps * (x + a)) / (x + a);
    }
    return p.mu + p.lambda * p.lambda * sum;
}

principal_matrix assemble_phi_regularized(const sector_basis& basis,
                                          const model_params& p, double E,
                                          double eps, const diag_spectrum& k1_table,
                                          const std::vector<double>& f_a)
{
    if (eps <= 0.0) throw numeric_error("assemble_phi_regularized: eps must be > 0");
    p.validate();
    require_operating_domain(p, E);
    principal_matrix pm;
    pm.energy = E;
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    const double mu_e = mu_epsilon(p, eps, k1_table);

    // k0 carries mu(eps); k1 is the uncancelled (still eps-damped) bare piece.
    pm.k0.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        pm.k0(i) = h0_eigenvalue(basis.states[i], p.m) - E + mu_e;

    const double lam2 = p.lambda * p.lambda;
    const double inv2m = 1.0 / (2.0 * p.m);
    pm.k1 = diagonal_by_h0(
        basis,
        [&](double h0) {
            if (lam2 == 0.0) return 0.0;
            const double b = h0 + p.m - E;
            double sum = 0.0;
            for (std::size_t i = 0; i < k1_table.sigma.size(); ++i) {
                const double x = k1_table.sigma[i] * inv2m;
                sum += k1_table.weight[i] * std::exp(-eps * x) / (b + x);
            }
            return -lam2 * sum;
        },
        true);

    pm.u = assemble_u_part(basis, p, E, f_a,
                           u_entry_map{2, eps, 1.0 / (4.0 * p.m)}, true);
    pm.phi = pm.u;
    pm.phi.diagonal() += pm.k0 + pm.k1;
    return pm;
}

double bare_sum_partial(const model_params& p, double sigma_cut,
                        const diag_spectrum& table)
{
    if (sigma_cut <= 0.0) throw config_error("bare_sum_partial: sigma_cut must be > 0");
    const double a = p.m - p.mu;
    const double inv2m = 1.0 / (2.0 * p.m);
    double sum = 0.0;
    for (std::size_t i = 0; i < table.sigma.size() && table.sigma[i] <= sigma_cut; ++i)
        sum += table.weight[i] / (table.sigma[i] * inv2m + a);
    return sum;
}

} // namespace leelab
