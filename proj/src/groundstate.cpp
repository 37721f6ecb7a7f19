#include "leelab/groundstate.hpp"
#include "leelab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace leelab {

namespace {

void require_same_pool(const sector_basis& a, const sector_basis& b)
{
    bool same = a.mode_pool.size() == b.mode_pool.size();
    for (std::size_t i = 0; same && i < a.mode_pool.size(); ++i)
        same = a.mode_pool[i].sigma == b.mode_pool[i].sigma &&
               a.mode_pool[i].label == b.mode_pool[i].label;
    if (!same)
        throw config_error("reconstruct: sector bases must share one mode pool");
}

} // namespace

two_sector_state reconstruct(const sector_basis& basis_n,
                             const sector_basis& basis_np1,
                             const eigen_result& ground, double fh_slope,
                             const model_params& p,
                             const std::vector<double>& f_a,
                             double omega0_tol)
{
    require_same_pool(basis_n, basis_np1);
    if (basis_np1.n != basis_n.n + 1)
        throw config_error("reconstruct: basis_np1 must be the (n+1) sector");
    if (ground.degenerate)
        throw numeric_error("reconstruct: nondegeneracy precondition failed "
                            "(gap flagged numerically degenerate)");
    if (std::abs(ground.omega0) > omega0_tol)
        throw numeric_error("reconstruct: |omega0(E)| = " +
                            std::to_string(std::abs(ground.omega0)) +
                            " exceeds tolerance; not at the ground energy");
    if (!(fh_slope <= -1.0))
        throw numeric_error("reconstruct: Feynman-Hellmann slope must be <= -1");

    two_sector_state ts;
    ts.e_gr = ground.energy;
    ts.omega0_slope = fh_slope;
    const double scale = 1.0 / std::sqrt(-fh_slope);

    ts.psi_n = scale * ground.psi0;

    ts.psi_np1.setZero(static_cast<Eigen::Index>(basis_np1.dim()));
    for (std::size_t s = 0; s < basis_np1.dim(); ++s) {
        const occupation_state& up = basis_np1.states[s];
        const double h0 = h0_eigenvalue(up, p.m);
        // spectrum of H0 in the (n+1) sector starts at (n+1)m > E_gr
        if (h0 <= ts.e_gr)
            throw numeric_error("reconstruct: free resolvent pole inside sector");
        double acc = 0.0;
        for (const auto& [idx, cnt] : up.occ) {
            if (f_a[idx] == 0.0) continue;
            auto lowered = annihilate(up, idx, basis_np1.mode_pool);
            const long j = basis_n.index_of(lowered.state);
            if (j < 0) continue;
            acc += lowered.amplitude * f_a[idx] * ground.psi0(j);
        }
        ts.psi_np1(s) = p.lambda * scale * acc / (h0 - ts.e_gr);
    }

    ts.norm_n = ts.psi_n.squaredNorm();
    ts.norm_np1 = ts.psi_np1.squaredNorm();
    return ts;
}

namespace {

double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// perm[ f_{sigma_j}(y_i) ] over all permutations; k is small here (n+1 <= ~5).
double permanent(const Eigen::MatrixXd& m)
{
    const int k = static_cast<int>(m.rows());
    if (k == 0) return 1.0;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    double sum = 0.0;
    do {
        double prod = 1.0;
        for (int i = 0; i < k; ++i) prod *= m(i, idx[i]);
        sum += prod;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return sum;
}

} // namespace

std::vector<double> position_wavefunction(const manifold_spec& spec,
                                          const sector_basis& basis,
                                          const Eigen::VectorXd& amplitudes,
                                          const std::vector<configuration>& configs,
                                          bool parallel)
{
    if (amplitudes.size() != static_cast<Eigen::Index>(basis.dim()))
        throw config_error("position_wavefunction: amplitude/basis size mismatch");
    const int k = basis.n;
    for (const auto& c : configs)
        if (static_cast<int>(c.size()) != k)
            throw config_error("position_wavefunction: configuration size must equal "
                               "the sector boson number");

    // expanded mode lists and normalizations, once per basis state
    std::vector<std::vector<int>> expanded(basis.dim());
    std::vector<double> norm(basis.dim());
    for (std::size_t s = 0; s < basis.dim(); ++s) {
        double denom = factorial(k);
        for (const auto& [idx, cnt] : basis.states[s].occ) {
            for (int c = 0; c < cnt; ++c) expanded[s].push_back(idx);
            denom *= factorial(cnt);
        }
        norm[s] = 1.0 / std::sqrt(denom);
    }

    std::vector<double> out(configs.size(), 0.0);
    const auto nc = static_cast<long>(configs.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (long ci = 0; ci < nc; ++ci) {
        const configuration& cfg = configs[ci];
        // f_sigma(y_i) for every pool mode
        Eigen::MatrixXd fvals(std::max(k, 1), static_cast<Eigen::Index>(basis.mode_pool.size()));
        for (int i = 0; i < k; ++i)
            for (std::size_t md = 0; md < basis.mode_pool.size(); ++md)
                fvals(i, static_cast<Eigen::Index>(md)) =
                    eigenfunction_at(spec, basis.mode_pool[md], cfg[i]);
        double val = 0.0;
        Eigen::MatrixXd m(k, k);
        for (std::size_t s = 0; s < basis.dim(); ++s) {
            if (amplitudes(static_cast<Eigen::Index>(s)) == 0.0) continue;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) m(i, j) = fvals(i, expanded[s][j]);
            val += amplitudes(static_cast<Eigen::Index>(s)) * norm[s] * permanent(m);
        }
        out[ci] = val;
    }
    return out;
}

positivity_report positivity_certificate(const manifold_spec& spec,
                                         const sector_basis& basis,
                                         const Eigen::VectorXd& amplitudes,
                                         const std::vector<configuration>& configs,
                                         double margin)
{
    auto values = position_wavefunction(spec, basis, amplitudes, configs);
    positivity_report rep;
    rep.samples = values.size();
    rep.margin = margin;
    if (values.empty()) return rep;

    double mean = 0.0;
    for (double v : values) mean += v;
    if (mean < 0.0)
        for (double& v : values) v = -v;

    rep.min_value = values[0];
    rep.max_value = values[0];
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < rep.min_value) {
            rep.min_value = values[i];
            rep.min_index = i;
        }
        rep.max_value = std::max(rep.max_value, values[i]);
    }
    rep.pass = rep.min_value >= margin * rep.max_value && rep.max_value > 0.0;
    return rep;
}

double semigroup_position_minimum(const manifold_spec& spec,
                                  const principal_matrix& phi_at_ground,
                                  const sector_basis& basis_n1,
                                  const std::vector<point>& grid, double t)
{
    if (basis_n1.n != 1)
        throw config_error("semigroup_position_minimum: n = 1 sector only");
    if (t <= 0.0) throw numeric_error("semigroup_position_minimum: t must be > 0");

    const auto dim = static_cast<Eigen::Index>(basis_n1.dim());
    Eigen::MatrixXd f(static_cast<Eigen::Index>(grid.size()), dim);
    for (Eigen::Index i = 0; i < f.rows(); ++i)
        for (Eigen::Index s = 0; s < dim; ++s) {
            const int md = basis_n1.states[s].occ[0].first;
            f(i, s) = eigenfunction_at(spec, basis_n1.mode_pool[md], grid[i]);
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(phi_at_ground.phi);
    if (es.info() != Eigen::Success)
        throw numeric_error("semigroup_position_minimum: eigensolve failed");
    Eigen::VectorXd w = (-t * es.eigenvalues().array()).exp();
    Eigen::MatrixXd kernel =
        f * es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose() *
        f.transpose();
    return kernel.minCoeff();
}

} // namespace leelab
