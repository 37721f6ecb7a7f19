#ifndef LEELAB_PRINCIPAL_HPP
#define LEELAB_PRINCIPAL_HPP

#include "leelab/fock.hpp"
#include "leelab/geometry.hpp"

#include <Eigen/Dense>

namespace leelab {

// Physical constants of a run. Requires m > mu (heavy particles do not
// decay); lambda = 0 is the free theory.
struct model_params {
    manifold_spec spec;
    double m = 1.0;
    double mu = 0.0;
    double lambda = 0.0;
    point a;
    int n = 0;

    void validate() const;
    double sector_threshold() const { return n * m + mu; } // nm + mu
};

// f_sigma(a) for every mode of a pool, indexed like the pool.
std::vector<double> pool_values_at(const manifold_spec& spec,
                                   const std::vector<mode>& pool, const point& a);

// Dense symmetric Phi(E) = K0 + K1 + U (or its E-derivative) on a sector
// basis, with parts kept for diagnostics.
struct principal_matrix {
    Eigen::MatrixXd phi;
    Eigen::VectorXd k0; // diagonal part H0 - E + mu
    Eigen::VectorXd k1; // diagonal part, renormalized spectral sum
    Eigen::MatrixXd u;  // one-boson-move part, entrywise <= 0 on the diagonal
    double energy = 0.0;
    double k1_tail = 0.0; // Weyl tail estimate for the K1 internal sum
};

double k0_diagonal(const occupation_state& state, const model_params& p, double E);

// K1 diagonal entry: lambda^2 sum_{sigma' <= cap} |f_sigma'(a)|^2
// [ 1/(sigma'/2m + m - mu) - 1/(sigma'/2m + h0 + m - E) ].
// Absolutely convergent for D in {2,3}; the cap lives in `table`.
// Throws when E >= h0 + m (the t-integral it resums diverges there).
double k1_diagonal(double h0, const model_params& p, double E,
                   const diag_spectrum& table);

// Weyl-law estimate of the K1 sum beyond the table cap.
double k1_tail_estimate(double h0, const model_params& p, double E,
                        const diag_spectrum& table);

// Single U matrix element between two basis states (zero unless equal or one
// boson moved). f_a holds f_sigma(a) over the basis pool.
double u_matrix_element(const occupation_state& row, const occupation_state& col,
                        const model_params& p, double E,
                        const std::vector<mode>& pool,
                        const std::vector<double>& f_a);

struct assembly_options {
    bool parallel = true;
    bool add_k1_tail = false;
};

principal_matrix assemble_phi(const sector_basis& basis, const model_params& p,
                              double E, const diag_spectrum& k1_table,
                              const std::vector<double>& f_a,
                              const assembly_options& opt = {});

// Entrywise analytic d Phi / d E: dK0 = -1, dK1 and dU are the closed-form
// squared-denominator sums (both quadratic forms <= 0).
principal_matrix assemble_dphi_de(const sector_basis& basis, const model_params& p,
                                  double E, const diag_spectrum& k1_table,
                                  const std::vector<double>& f_a,
                                  const assembly_options& opt = {});

// Serial reference assemblers, kept for testing the parallel kernels.
principal_matrix assemble_phi_serial(const sector_basis& basis,
                                     const model_params& p, double E,
                                     const diag_spectrum& k1_table,
                                     const std::vector<double>& f_a);

// Bare mass difference mu(eps) = mu + lambda^2 sum |f(a)|^2
// e^{-eps(sigma/2m + m - mu)} / (sigma/2m + m - mu); diverges as eps -> 0.
double mu_epsilon(const model_params& p, double eps, const diag_spectrum& table);

// Regularized principal operator: U entries pick up e^{-eps(sigma+tau)/4m},
// the c-number part is mu(eps) - lambda^2 sum |f|^2 e^{-eps sigma'/2m} /
// (sigma'/2m + h0 + m - E). Converges entrywise to Phi as eps -> 0.
principal_matrix assemble_phi_regularized(const sector_basis& basis,
                                          const model_params& p, double E,
                                          double eps, const diag_spectrum& k1_table,
                                          const std::vector<double>& f_a);

// Partial divergent bare sum sum_{sigma <= sigma_cut} |f|^2/(sigma/2m + m - mu),
// for the divergence exhibit. `table` must reach sigma_cut.
double bare_sum_partial(const model_params& p, double sigma_cut,
                        const diag_spectrum& table);

} // namespace leelab

#endif
