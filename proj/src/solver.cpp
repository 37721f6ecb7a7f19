#include "leelab/solver.hpp"
#include "leelab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace leelab {

eigen_result lowest_eigenpair(const principal_matrix& matrix, int k)
{
    const auto dim = matrix.phi.rows();
    if (dim == 0) throw numeric_error("lowest_eigenpair: empty matrix");
    if (k < 1) k = 1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.phi);
    if (solver.info() != Eigen::Success)
        throw numeric_error("lowest_eigenpair: eigensolve failed (dim = " +
                            std::to_string(dim) + ", |Phi|_max = " +
                            std::to_string(matrix.phi.cwiseAbs().maxCoeff()) + ")");
    eigen_result r;
    r.energy = matrix.energy;
    r.omega0 = solver.eigenvalues()(0);
    r.gap = dim > 1 ? solver.eigenvalues()(1) - r.omega0 : 0.0;
    r.eigenvalues = solver.eigenvalues().head(std::min<Eigen::Index>(k, dim));
    r.psi0 = solver.eigenvectors().col(0);

    Eigen::Index imax = 0;
    r.psi0.cwiseAbs().maxCoeff(&imax);
    if (r.psi0(imax) < 0.0) r.psi0 = -r.psi0;

    const double scale = matrix.phi.cwiseAbs().maxCoeff();
    if (dim > 1 && r.gap < 1e-10 * scale) r.degenerate = true;
    return r;
}

double feynman_hellmann(const principal_matrix& dphi_de, const Eigen::VectorXd& psi0)
{
    return psi0.dot(dphi_de.phi * psi0);
}

namespace {

struct omega0_eval {
    const sector_basis& basis;
    const model_params& params;
    const diag_spectrum& table;
    const std::vector<double>& f_a;
    const assembly_options& asmopt;

    double operator()(double E) const
    {
        return lowest_eigenpair(
                   assemble_phi(basis, params, E, table, f_a, asmopt), 1)
            .omega0;
    }

    double slope(double E, const Eigen::VectorXd& psi0) const
    {
        return feynman_hellmann(
            assemble_dphi_de(basis, params, E, table, f_a, asmopt), psi0);
    }
};

} // namespace

ground_energy find_ground_energy(const sector_basis& basis, const model_params& p,
                                 const diag_spectrum& k1_table,
                                 const std::vector<double>& f_a,
                                 const solver_options& opt)
{
    p.validate();
    const double e_hi = p.sector_threshold();
    ground_energy g;

    if (p.lambda == 0.0) {
        g.e_gr = e_hi;
        g.bracket_lo = e_hi;
        g.bracket_hi = e_hi;
        g.at_ground =
            lowest_eigenpair(assemble_phi(basis, p, e_hi, k1_table, f_a, opt.assembly), 2);
        g.omega0_residual = g.at_ground.omega0;
        return g;
    }

    omega0_eval f{basis, p, k1_table, f_a, opt.assembly};

    double hi = e_hi;
    double f_hi = f(hi);
    if (f_hi >= 0.0)
        throw numeric_error("find_ground_energy: omega0(nm+mu) >= 0; variational "
                            "bound violated at this truncation");

    // downward doubling until omega0 > 0
    const double floor = e_hi - opt.bracket_floor_drop * p.m;
    double step = p.m;
    double lo = hi - step;
    double f_lo;
    for (;;) {
        if (lo < floor)
            throw numeric_error("find_ground_energy: ground state below search floor " +
                                std::to_string(floor));
        f_lo = f(lo);
        ++g.iterations;
        if (f_lo > 0.0) break;
        step *= 2.0;
        hi = lo;
        f_hi = f_lo;
        lo = hi - step;
    }

    // bisection with Newton acceleration; omega0 is strictly decreasing with
    // slope <= -1, so a Newton step from either side is well posed whenever it
    // stays inside the bracket.
    double e = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        auto pm = assemble_phi(basis, p, e, k1_table, f_a, opt.assembly);
        auto er = lowest_eigenpair(pm, 1);
        ++g.iterations;
        if (std::abs(er.omega0) <= opt.tol * p.m) {
            g.e_gr = e;
            g.bracket_lo = lo;
            g.bracket_hi = hi;
            g.omega0_residual = er.omega0;
            g.at_ground =
                lowest_eigenpair(assemble_phi(basis, p, e, k1_table, f_a, opt.assembly), 2);
            return g;
        }
        if (er.omega0 > 0.0)
            lo = e;
        else
            hi = e;
        double next = 0.5 * (lo + hi);
        if (opt.use_newton) {
            const double slope = f.slope(e, er.psi0);
            const double newton = e - er.omega0 / slope;
            if (newton > lo && newton < hi) next = newton;
        }
        e = next;
    }
    throw numeric_error("find_ground_energy: no convergence in 200 iterations");
}

std::vector<curve_point> omega0_curve(const sector_basis& basis,
                                      const model_params& p,
                                      const diag_spectrum& k1_table,
                                      const std::vector<double>& f_a,
                                      std::span<const double> e_grid,
                                      const assembly_options& opt)
{
    std::vector<curve_point> out(e_grid.size());
    for (std::size_t i = 0; i < e_grid.size(); ++i) {
        const double e = e_grid[i];
        auto er = lowest_eigenpair(assemble_phi(basis, p, e, k1_table, f_a, opt), 2);
        out[i].energy = e;
        out[i].omega0 = er.omega0;
        out[i].gap = er.gap;
        out[i].feynman_hellmann =
            feynman_hellmann(assemble_dphi_de(basis, p, e, k1_table, f_a, opt), er.psi0);
    }
    return out;
}

} // namespace leelab
