#ifndef LEELAB_GROUNDSTATE_HPP
#define LEELAB_GROUNDSTATE_HPP

#include "leelab/solver.hpp"

namespace leelab {

// Two-sector ground state read off the rank-one residue of the resolvent at
// E_gr. psi_n is (-omega0')^{-1/2} times the Phi zero eigenvector; psi_np1 is
// the dressed (n+1)-sector component lambda (-omega0')^{-1/2} (H0-E)^{-1}
// phi_dag(a) psi0, stored in the gauge where both sectors are positive for a
// positive psi0. norm_n + norm_np1 = 1 up to truncation (projection trace).
struct two_sector_state {
    Eigen::VectorXd psi_n;
    Eigen::VectorXd psi_np1;
    double e_gr = 0.0;
    double omega0_slope = 0.0; // Feynman-Hellmann value at E_gr, <= -1
    double norm_n = 0.0;
    double norm_np1 = 0.0;
};

// Requires the eigenresult of Phi(E_gr) with |omega0| small and a positive
// gap; throws on a degenerate-flagged result. Both bases must share one mode
// pool.
two_sector_state reconstruct(const sector_basis& basis_n,
                             const sector_basis& basis_np1,
                             const eigen_result& ground, double fh_slope,
                             const model_params& p,
                             const std::vector<double>& f_a,
                             double omega0_tol = 1e-6);

// One k-boson configuration: k points on the manifold.
using configuration = std::vector<point>;

// First-quantized value of the sector wavefunction at each configuration:
// Psi(y_1..y_k) = sum_states amp * perm[f_{sigma_j}(y_i)] / sqrt(k! prod n_i!).
// Permutation symmetric in the y's by construction.
std::vector<double> position_wavefunction(const manifold_spec& spec,
                                          const sector_basis& basis,
                                          const Eigen::VectorXd& amplitudes,
                                          const std::vector<configuration>& configs,
                                          bool parallel = true);

struct positivity_report {
    bool pass = false;
    double min_value = 0.0;   // after global sign fix by grid mean
    double max_value = 0.0;
    std::size_t min_index = 0;
    std::size_t samples = 0;
    double margin = 0.0;
};

// Fixes the global sign so the sampled mean is positive, then requires
// min >= margin * max over the sampled configurations.
positivity_report positivity_certificate(const manifold_spec& spec,
                                         const sector_basis& basis,
                                         const Eigen::VectorXd& amplitudes,
                                         const std::vector<configuration>& configs,
                                         double margin);

// Entrywise minimum of e^{-t Phi(E_gr)} in the position representation
// (conjugation by the eigenfunction matrix on a point grid); n = 1 sector
// only. Positive minima certify the positivity-improving property.
double semigroup_position_minimum(const manifold_spec& spec,
                                  const principal_matrix& phi_at_ground,
                                  const sector_basis& basis_n1,
                                  const std::vector<point>& grid, double t);

} // namespace leelab

#endif
