#ifndef LEELAB_GEOMETRY_HPP
#define LEELAB_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace leelab {

enum class manifold_kind { torus2, torus3, sphere2 };

std::string to_string(manifold_kind k);
manifold_kind manifold_kind_from_string(const std::string& s);

// A compact manifold with exactly known Laplace-Beltrami spectrum.
// Units: hbar = c = 1; lengths in natural units, sigma in 1/length^2.
struct manifold_spec {
    manifold_kind kind = manifold_kind::torus2;
    std::array<double, 3> lengths{0.0, 0.0, 0.0}; // torus side lengths
    double radius = 0.0;                          // sphere radius

    static manifold_spec torus2(double l1, double l2);
    static manifold_spec torus3(double l1, double l2, double l3);
    static manifold_spec sphere2(double r);

    int dimension() const;
    double volume() const;
    // kappa in Ric >= -kappa g. Zero for flat tori and for the positively
    // curved sphere alike.
    double ricci_lower() const { return 0.0; }
};

// Point in manifold coordinates: periodic coordinates for tori,
// (theta, phi) for the sphere. Only the first dimension() entries are used.
struct point {
    std::array<double, 3> x{0.0, 0.0, 0.0};
};

// Reduce coordinates to the fundamental domain ([0,L_i) / theta in [0,pi],
// phi in [0,2pi)).
point reduce_point(const manifold_spec& spec, const point& p);

// One Laplace-Beltrami eigenmode. label is manifold specific:
//   torus:  {k1, k2, k3, parity}  (parity 0 = cos, 1 = sin; k in the
//           canonical half-lattice, first nonzero component > 0)
//   sphere: {l, m, 0, 0}          (real harmonics, m in [-l, l])
struct mode {
    int id = 0;
    double sigma = 0.0;
    std::array<int, 4> label{0, 0, 0, 0};

    std::string label_string(manifold_kind kind) const;
};

// All modes with sigma <= sigma_max, sorted by (sigma, label).
std::vector<mode> enumerate_modes(const manifold_spec& spec, double sigma_max);

// Value of the real orthonormal eigenfunction at x. Units length^{-D/2}.
double eigenfunction_at(const manifold_spec& spec, const mode& md, const point& x);

// Diagonal spectral table: for each distinct eigenvalue sigma the summed
// squared amplitude w = sum_{modes in shell} f_sigma(a)^2, which on these
// homogeneous manifolds is independent of a (tori: one lattice point per
// 1/V; sphere: (2l+1)/(4 pi R^2) by the addition theorem). Exact, and cheap
// enough to carry sigma_cap into the 1e5-1e6 range.
struct diag_spectrum {
    std::vector<double> sigma;  // ascending, sigma[0] = 0
    std::vector<double> weight; // same length
    double sigma_cap = 0.0;
};

diag_spectrum build_diag_spectrum(const manifold_spec& spec, double sigma_cap);

struct heat_kernel_result {
    double value = 0.0;
    double tail_bound = 0.0; // Weyl-law estimate of the omitted spectral mass
};

// K_t(x,y) = sum_sigma f_sigma(x) f_sigma(y) e^{-t sigma / 2m}, truncated at
// sigma_max. The mass factor e^{-tm} is never included here; callers carry it
// separately. t <= 0 is a domain error.
heat_kernel_result heat_kernel(const manifold_spec& spec, double m, double t,
                               const point& x, const point& y, double sigma_max);
// Same sum over a precomputed mode list (grid evaluation path).
heat_kernel_result heat_kernel(const manifold_spec& spec, double m, double t,
                               const point& x, const point& y,
                               std::span<const mode> modes);
// Diagonal kernel from a shell table (a-independent).
heat_kernel_result heat_kernel_diag(const manifold_spec& spec, double m, double t,
                                    const diag_spectrum& table);

// Weyl-law tail of the diagonal kernel beyond sigma_max (closed form, D = 2, 3).
double heat_kernel_weyl_tail(const manifold_spec& spec, double m, double t,
                             double sigma_max);

struct heat_kernel_bounds {
    double lower = 0.0;
    double upper = 0.0;
};

// lower: Cheeger-Yau comparison kernel; for flat tori (kappa = 0) this is the
// Euclidean kernel (2m/4 pi t)^{D/2}. Unsupported for the sphere.
// upper: 1/V + C (t/2m)^{-D/2} with the caller-supplied fitted constant.
heat_kernel_bounds heat_kernel_diag_bounds(const manifold_spec& spec, double m,
                                           double t, double upper_c);

// Smallest C such that K_t(a,a) <= 1/V + C (t/2m)^{-D/2} across t_grid.
double fit_heat_upper_constant(const manifold_spec& spec, double m,
                               std::span<const double> t_grid,
                               const diag_spectrum& table);

} // namespace leelab

#endif
