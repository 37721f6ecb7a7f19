#include "leelab/geometry.hpp"
#include "leelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace leelab {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;
} // namespace

std::string to_string(manifold_kind k)
{
    switch (k) {
    case manifold_kind::torus2: return "torus2";
    case manifold_kind::torus3: return "torus3";
    case manifold_kind::sphere2: return "sphere2";
    }
    return "unknown";
}

manifold_kind manifold_kind_from_string(const std::string& s)
{
    if (s == "torus2") return manifold_kind::torus2;
    if (s == "torus3") return manifold_kind::torus3;
    if (s == "sphere2") return manifold_kind::sphere2;
    throw config_error("unsupported manifold kind: '" + s + "'");
}

manifold_spec manifold_spec::torus2(double l1, double l2)
{
    if (l1 <= 0.0 || l2 <= 0.0) throw config_error("torus2: side lengths must be positive");
    manifold_spec s;
    s.kind = manifold_kind::torus2;
    s.lengths = {l1, l2, 0.0};
    return s;
}

manifold_spec manifold_spec::torus3(double l1, double l2, double l3)
{
    if (l1 <= 0.0 || l2 <= 0.0 || l3 <= 0.0)
        throw config_error("torus3: side lengths must be positive");
    manifold_spec s;
    s.kind = manifold_kind::torus3;
    s.lengths = {l1, l2, l3};
    return s;
}

manifold_spec manifold_spec::sphere2(double r)
{
    if (r <= 0.0) throw config_error("sphere2: radius must be positive");
    manifold_spec s;
    s.kind = manifold_kind::sphere2;
    s.radius = r;
    return s;
}

int manifold_spec::dimension() const
{
    switch (kind) {
    case manifold_kind::torus2: return 2;
    case manifold_kind::torus3: return 3;
    case manifold_kind::sphere2: return 2;
    }
    throw config_error("unsupported manifold kind");
}

double manifold_spec::volume() const
{
    switch (kind) {
    case manifold_kind::torus2: return lengths[0] * lengths[1];
    case manifold_kind::torus3: return lengths[0] * lengths[1] * lengths[2];
    case manifold_kind::sphere2: return 4.0 * pi * radius * radius;
    }
    throw config_error("unsupported manifold kind");
}

point reduce_point(const manifold_spec& spec, const point& p)
{
    point q = p;
    if (spec.kind == manifold_kind::sphere2) {
        // theta in [0, pi], phi in [0, 2pi)
        double theta = std::fmod(q.x[0], two_pi);
        if (theta < 0.0) theta += two_pi;
        if (theta > pi) {
            theta = two_pi - theta;
            q.x[1] += pi;
        }
        double phi = std::fmod(q.x[1], two_pi);
        if (phi < 0.0) phi += two_pi;
        q.x[0] = theta;
        q.x[1] = phi;
        q.x[2] = 0.0;
        return q;
    }
    for (int d = 0; d < spec.dimension(); ++d) {
        double v = std::fmod(q.x[d], spec.lengths[d]);
        if (v < 0.0) v += spec.lengths[d];
        q.x[d] = v;
    }
    return q;
}

std::string mode::label_string(manifold_kind kind) const
{
    if (kind == manifold_kind::sphere2)
        return "l=" + std::to_string(label[0]) + ";m=" + std::to_string(label[1]);
    std::string s = "k=" + std::to_string(label[0]) + "," + std::to_string(label[1]);
    if (kind == manifold_kind::torus3) s += "," + std::to_string(label[2]);
    s += label[3] == 0 ? ";cos" : ";sin";
    return s;
}

namespace {

// Canonical half-lattice representative: k != 0 and first nonzero entry > 0.
bool half_lattice_canonical(int k1, int k2, int k3)
{
    if (k1 != 0) return k1 > 0;
    if (k2 != 0) return k2 > 0;
    return k3 > 0;
}

std::vector<mode> enumerate_torus_modes(const manifold_spec& spec, double sigma_max)
{
    const int dim = spec.dimension();
    double c[3] = {0.0, 0.0, 0.0};
    int kmax[3] = {0, 0, 0};
    for (int d = 0; d < dim; ++d) {
        c[d] = two_pi / spec.lengths[d];
        c[d] *= c[d];
        kmax[d] = static_cast<int>(std::floor(std::sqrt(sigma_max / c[d]))) + 1;
    }

    std::vector<mode> out;
    const int k3lo = dim == 3 ? -kmax[2] : 0;
    const int k3hi = dim == 3 ? kmax[2] : 0;
    for (int k1 = -kmax[0]; k1 <= kmax[0]; ++k1) {
        for (int k2 = -kmax[1]; k2 <= kmax[1]; ++k2) {
            for (int k3 = k3lo; k3 <= k3hi; ++k3) {
                const double sigma = c[0] * k1 * k1 + c[1] * k2 * k2 + c[2] * k3 * k3;
                if (sigma > sigma_max) continue;
                if (k1 == 0 && k2 == 0 && k3 == 0) {
                    mode md;
                    md.sigma = 0.0;
                    md.label = {0, 0, 0, 0};
                    out.push_back(md);
                    continue;
                }
                if (!half_lattice_canonical(k1, k2, k3)) continue;
                for (int parity = 0; parity < 2; ++parity) {
                    mode md;
                    md.sigma = sigma;
                    md.label = {k1, k2, k3, parity};
                    out.push_back(md);
                }
            }
        }
    }
    return out;
}

std::vector<mode> enumerate_sphere_modes(const manifold_spec& spec, double sigma_max)
{
    std::vector<mode> out;
    const double r2 = spec.radius * spec.radius;
    for (int l = 0;; ++l) {
        const double sigma = static_cast<double>(l) * (l + 1) / r2;
        if (sigma > sigma_max) break;
        for (int m = -l; m <= l; ++m) {
            mode md;
            md.sigma = sigma;
            md.label = {l, m, 0, 0};
            out.push_back(md);
        }
    }
    return out;
}

} // namespace

std::vector<mode> enumerate_modes(const manifold_spec& spec, double sigma_max)
{
    if (sigma_max < 0.0) throw config_error("enumerate_modes: sigma_max must be >= 0");
    std::vector<mode> out;
    switch (spec.kind) {
    case manifold_kind::torus2:
    case manifold_kind::torus3:
        out = enumerate_torus_modes(spec, sigma_max);
        break;
    case manifold_kind::sphere2:
        out = enumerate_sphere_modes(spec, sigma_max);
        break;
    default:
        throw config_error("unsupported manifold kind");
    }
    std::sort(out.begin(), out.end(), [](const mode& a, const mode& b) {
        if (a.sigma != b.sigma) return a.sigma < b.sigma;
        return a.label < b.label;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
    return out;
}

namespace {

// Fully normalized associated Legendre P_lm(cos theta), stable to high l.
double normalized_legendre(int l, int m, double ct, double st)
{
    double pmm = 1.0 / std::sqrt(4.0 * pi);
    for (int k = 1; k <= m; ++k)
        pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * st;
    if (l == m) return pmm;
    double pm1 = std::sqrt(2.0 * m + 3.0) * ct * pmm;
    if (l == m + 1) return pm1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        const double num = (2.0 * ll - 1.0) * (2.0 * ll + 1.0);
        const double den = static_cast<double>(ll - m) * (ll + m);
        const double alpha = std::sqrt(num / den);
        const double beta = std::sqrt((2.0 * ll + 1.0) * (ll - 1.0 - m) * (ll - 1.0 + m) /
                                      ((2.0 * ll - 3.0) * den));
        pll = alpha * ct * pm1 - beta * pmm;
        pmm = pm1;
        pm1 = pll;
    }
    return pll;
}

double real_spherical_harmonic(int l, int m, double theta, double phi)
{
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    if (m == 0) return normalized_legendre(l, 0, ct, st);
    const int am = m > 0 ? m : -m;
    const double p = normalized_legendre(l, am, ct, st);
    const double sqrt2 = std::numbers::sqrt2;
    return m > 0 ? sqrt2 * p * std::cos(am * phi) : sqrt2 * p * std::sin(am * phi);
}

} // namespace

double eigenfunction_at(const manifold_spec& spec, const mode& md, const point& x)
{
    const double v = spec.volume();
    switch (spec.kind) {
    case manifold_kind::torus2:
    case manifold_kind::torus3: {
        if (md.label[0] == 0 && md.label[1] == 0 && md.label[2] == 0)
            return 1.0 / std::sqrt(v);
        double phase = 0.0;
        for (int d = 0; d < spec.dimension(); ++d)
            phase += two_pi * md.label[d] * x.x[d] / spec.lengths[d];
        const double amp = std::sqrt(2.0 / v);
        return md.label[3] == 0 ? amp * std::cos(phase) : amp * std::sin(phase);
    }
    case manifold_kind::sphere2:
        return real_spherical_harmonic(md.label[0], md.label[1], x.x[0], x.x[1]) /
               spec.radius;
    }
    throw config_error("unsupported manifold kind");
}

namespace {

// Merge sorted (sigma, weight) pairs whose sigma agree to relative 1e-9.
diag_spectrum merge_shells(std::vector<std::pair<double, double>> raw, double cap)
{
    std::sort(raw.begin(), raw.end());
    diag_spectrum table;
    table.sigma_cap = cap;
    for (const auto& [s, w] : raw) {
        if (!table.sigma.empty() && s - table.sigma.back() <= 1e-9 * (1.0 + s)) {
            table.weight.back() += w;
        } else {
            table.sigma.push_back(s);
            table.weight.push_back(w);
        }
    }
    return table;
}

} // namespace

diag_spectrum build_diag_spectrum(const manifold_spec& spec, double sigma_cap)
{
    if (sigma_cap < 0.0) throw config_error("build_diag_spectrum: sigma_cap must be >= 0");

    if (spec.kind == manifold_kind::sphere2) {
        diag_spectrum table;
        table.sigma_cap = sigma_cap;
        const double r2 = spec.radius * spec.radius;
        for (int l = 0;; ++l) {
            const double sigma = static_cast<double>(l) * (l + 1) / r2;
            if (sigma > sigma_cap) break;
            table.sigma.push_back(sigma);
            table.weight.push_back((2.0 * l + 1.0) / (4.0 * pi * r2));
        }
        return table;
    }

    // Tori: every lattice point k contributes |f(a)|^2 summed over its
    // cos/sin pair = 1/V (exactly, independent of a).
    const int dim = spec.dimension();
    const double v = spec.volume();
    double c[3] = {0.0, 0.0, 0.0};
    int kmax[3] = {0, 0, 0};
    for (int d = 0; d < dim; ++d) {
        c[d] = two_pi / spec.lengths[d];
        c[d] *= c[d];
        kmax[d] = static_cast<int>(std::floor(std::sqrt(sigma_cap / c[d]))) + 1;
    }
    std::vector<std::pair<double, double>> raw;
    const int k3lo = dim == 3 ? -kmax[2] : 0;
    const int k3hi = dim == 3 ? kmax[2] : 0;
    for (int k1 = -kmax[0]; k1 <= kmax[0]; ++k1) {
        const double s1 = c[0] * k1 * k1;
        if (s1 > sigma_cap) continue;
        for (int k2 = -kmax[1]; k2 <= kmax[1]; ++k2) {
            const double s12 = s1 + c[1] * k2 * k2;
            if (s12 > sigma_cap) continue;
            for (int k3 = k3lo; k3 <= k3hi; ++k3) {
                const double sigma = s12 + c[2] * k3 * k3;
                if (sigma > sigma_cap) continue;
                raw.emplace_back(sigma, 1.0 / v);
            }
        }
    }
    return merge_shells(std::move(raw), sigma_cap);
}

heat_kernel_result heat_kernel(const manifold_spec& spec, double m, double t,
                               const point& x, const point& y, double sigma_max)
{
    const auto modes = enumerate_modes(spec, sigma_max);
    return heat_kernel(spec, m, t, x, y, std::span<const mode>(modes));
}

heat_kernel_result heat_kernel(const manifold_spec& spec, double m, double t,
                               const point& x, const point& y,
                               std::span<const mode> modes)
{
    if (t <= 0.0) throw numeric_error("heat_kernel: t must be > 0");
    heat_kernel_result r;
    double sigma_max = 0.0;
    for (const mode& md : modes) {
        r.value += eigenfunction_at(spec, md, x) * eigenfunction_at(spec, md, y) *
                   std::exp(-t * md.sigma / (2.0 * m));
        sigma_max = std::max(sigma_max, md.sigma);
    }
    r.tail_bound = heat_kernel_weyl_tail(spec, m, t, sigma_max);
    return r;
}

heat_kernel_result heat_kernel_diag(const manifold_spec& spec, double m, double t,
                                    const diag_spectrum& table)
{
    if (t <= 0.0) throw numeric_error("heat_kernel_diag: t must be > 0");
    heat_kernel_result r;
    for (std::size_t i = 0; i < table.sigma.size(); ++i)
        r.value += table.weight[i] * std::exp(-t * table.sigma[i] / (2.0 * m));
    r.tail_bound = heat_kernel_weyl_tail(spec, m, t, table.sigma_cap);
    return r;
}

double heat_kernel_weyl_tail(const manifold_spec& spec, double m, double t,
                             double sigma_max)
{
    // sum_{sigma > L} |f|^2 e^{-t sigma/2m} ~ rho_D integral_L^inf
    // sigma^{D/2-1} e^{-t sigma/2m} d sigma, with rho_2 = 1/4pi,
    // rho_3 = sqrt(sigma)/4pi^2 (per unit volume).
    const double a = t / (2.0 * m);
    const double x = a * sigma_max;
    if (spec.dimension() == 2) return (1.0 / (4.0 * pi)) * std::exp(-x) / a;
    // D = 3: integral = a^{-3/2} Gamma(3/2, x),
    // Gamma(3/2, x) = (sqrt(pi)/2) erfc(sqrt(x)) + sqrt(x) e^{-x}
    const double g = 0.5 * std::sqrt(pi) * std::erfc(std::sqrt(x)) +
                     std::sqrt(x) * std::exp(-x);
    return (1.0 / (4.0 * pi * pi)) * g / (a * std::sqrt(a));
}

heat_kernel_bounds heat_kernel_diag_bounds(const manifold_spec& spec, double m,
                                           double t, double upper_c)
{
    if (t <= 0.0) throw numeric_error("heat_kernel_diag_bounds: t must be > 0");
    heat_kernel_bounds b;
    const double d = spec.dimension();
    b.upper = 1.0 / spec.volume() + upper_c * std::pow(2.0 * m / t, 0.5 * d);
    switch (spec.kind) {
    case manifold_kind::torus2:
    case manifold_kind::torus3:
        // kappa = 0: Cheeger-Yau comparison kernel is the Euclidean one.
        b.lower = std::pow(2.0 * m / (4.0 * pi * t), 0.5 * d);
        break;
    case manifold_kind::sphere2:
        throw config_error("heat kernel lower bound unsupported for sphere2");
    }
    return b;
}

double fit_heat_upper_constant(const manifold_spec& spec, double m,
                               std::span<const double> t_grid,
                               const diag_spectrum& table)
{
    const double v = spec.volume();
    const double d = spec.dimension();
    double c = 0.0;
    for (double t : t_grid) {
        const double k = heat_kernel_diag(spec, m, t, table).value;
        c = std::max(c, (k - 1.0 / v) * std::pow(t / (2.0 * m), 0.5 * d));
    }
    return c;
}

} // namespace leelab
