#ifndef LEELAB_SOLVER_HPP
#define LEELAB_SOLVER_HPP

#include "leelab/principal.hpp"

namespace leelab {

// Lowest eigenpair of Phi(E), with the spectral gap to the next level.
// Sign convention: the entry of psi0 with the largest magnitude is positive.
struct eigen_result {
    double omega0 = 0.0;
    double gap = 0.0; // omega1 - omega0, >= 0
    Eigen::VectorXd psi0;
    double energy = 0.0;       // E at which Phi was assembled
    bool degenerate = false;   // gap below 1e-10 * ||Phi||
    Eigen::VectorXd eigenvalues; // the k requested, ascending
};

eigen_result lowest_eigenpair(const principal_matrix& matrix, int k = 2);

// Feynman-Hellmann derivative <psi0| dPhi/dE |psi0>; always <= -1.
double feynman_hellmann(const principal_matrix& dphi_de, const Eigen::VectorXd& psi0);

struct ground_energy {
    double e_gr = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;
    double omega0_residual = 0.0;
    eigen_result at_ground; // eigenpair of Phi(E_gr)
};

struct solver_options {
    double tol = 1e-9;          // |omega0(E_gr)| tolerance, units of m
    double bracket_floor_drop = 50.0; // search floor: nm + mu - drop * m
    bool use_newton = true;
    assembly_options assembly{};
};

// Unique zero of the strictly decreasing omega0(E), by bisection with
// Newton acceleration (Feynman-Hellmann slope); bracket grows downward from
// E_hi = nm + mu. lambda = 0 returns E_gr = nm + mu exactly.
ground_energy find_ground_energy(const sector_basis& basis, const model_params& p,
                                 const diag_spectrum& k1_table,
                                 const std::vector<double>& f_a,
                                 const solver_options& opt = {});

struct curve_point {
    double energy = 0.0;
    double omega0 = 0.0;
    double gap = 0.0;
    double feynman_hellmann = 0.0;
};

// omega0(E) sweep over a grid; strictly decreasing by Eq.-level monotonicity.
std::vector<curve_point> omega0_curve(const sector_basis& basis,
                                      const model_params& p,
                                      const diag_spectrum& k1_table,
                                      const std::vector<double>& f_a,
                                      std::span<const double> e_grid,
                                      const assembly_options& opt = {});

} // namespace leelab

#endif
