#include "leelab/fock.hpp"
#include "leelab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace leelab {

int occupation_state::count_of(int pool_index) const
{
    for (const auto& [idx, cnt] : occ)
        if (idx == pool_index) return cnt;
    return 0;
}

std::string occupation_state::key_string() const
{
    std::string key;
    key.reserve(occ.size() * 8);
    for (const auto& [idx, cnt] : occ) {
        key += std::to_string(idx);
        key += 'x';
        key += std::to_string(cnt);
        key += ';';
    }
    return key;
}

bool operator==(const occupation_state& a, const occupation_state& b)
{
    return a.n == b.n && a.occ == b.occ;
}

double h0_eigenvalue(const occupation_state& state, double m)
{
    return state.laplacian_sum / (2.0 * m) + state.n * m;
}

namespace {

double laplacian_sum_of(const std::vector<std::pair<int, int>>& occ,
                        const std::vector<mode>& pool)
{
    double s = 0.0;
    for (const auto& [idx, cnt] : occ) s += cnt * pool[idx].sigma;
    return s;
}

} // namespace

ladder_result annihilate(const occupation_state& state, int pool_index,
                         const std::vector<mode>& pool)
{
    ladder_result r;
    auto it = std::find_if(state.occ.begin(), state.occ.end(),
                           [&](const auto& p) { return p.first == pool_index; });
    if (it == state.occ.end()) return r; // amplitude 0, not an error
    r.amplitude = std::sqrt(static_cast<double>(it->second));
    r.state = state;
    auto& occ = r.state.occ;
    auto jt = occ.begin() + (it - state.occ.begin());
    if (--jt->second == 0) occ.erase(jt);
    r.state.n = state.n - 1;
    r.state.laplacian_sum = laplacian_sum_of(occ, pool);
    return r;
}

ladder_result create(const occupation_state& state, int pool_index,
                     const std::vector<mode>& pool)
{
    ladder_result r;
    r.state = state;
    auto& occ = r.state.occ;
    auto it = std::find_if(occ.begin(), occ.end(),
                           [&](const auto& p) { return p.first >= pool_index; });
    if (it != occ.end() && it->first == pool_index) {
        r.amplitude = std::sqrt(it->second + 1.0);
        ++it->second;
    } else {
        r.amplitude = 1.0;
        occ.insert(it, {pool_index, 1});
    }
    r.state.n = state.n + 1;
    r.state.laplacian_sum = laplacian_sum_of(occ, pool);
    return r;
}

long sector_basis::index_of(const occupation_state& s) const
{
    auto it = index_.find(s.key_string());
    return it == index_.end() ? -1 : it->second;
}

namespace {

void enumerate_rec(const std::vector<mode>& pool, std::size_t next_mode,
                   int bosons_left, double s_budget,
                   std::vector<std::pair<int, int>>& occ,
                   std::vector<std::vector<std::pair<int, int>>>& out,
                   std::size_t max_dim)
{
    if (bosons_left == 0) {
        if (out.size() >= max_dim)
            throw capacity_error("enumerate_sector: dimension exceeds max_dim = " +
                                 std::to_string(max_dim));
        out.push_back(occ);
        return;
    }
    if (next_mode >= pool.size()) return;
    // pool sorted ascending by sigma: every later mode costs at least this much
    if (bosons_left * pool[next_mode].sigma > s_budget + 1e-12 * (1.0 + s_budget))
        return;
    const double sigma = pool[next_mode].sigma;
    const int max_count =
        sigma <= 0.0 ? bosons_left
                     : std::min<int>(bosons_left,
                                     static_cast<int>(std::floor(
                                         (s_budget + 1e-12 * (1.0 + s_budget)) / sigma)));
    for (int cnt = max_count; cnt >= 0; --cnt) {
        if (cnt > 0) occ.emplace_back(static_cast<int>(next_mode), cnt);
        enumerate_rec(pool, next_mode + 1, bosons_left - cnt, s_budget - cnt * sigma,
                      occ, out, max_dim);
        if (cnt > 0) occ.pop_back();
    }
}

} // namespace

sector_basis enumerate_sector(const std::vector<mode>& mode_pool, int n,
                              double energy_cutoff, double m,
                              std::size_t max_dim)
{
    if (n < 0) throw config_error("enumerate_sector: n must be >= 0");
    if (m <= 0.0) throw config_error("enumerate_sector: m must be > 0");

    sector_basis basis;
    basis.mode_pool = mode_pool;
    basis.n = n;
    basis.energy_cutoff = energy_cutoff;
    basis.mass = m;

    const double s_budget = (energy_cutoff - n * m) * 2.0 * m;
    if (s_budget >= -1e-12) {
        std::vector<std::vector<std::pair<int, int>>> raw;
        std::vector<std::pair<int, int>> occ;
        enumerate_rec(mode_pool, 0, n, std::max(s_budget, 0.0), occ, raw, max_dim);
        basis.states.reserve(raw.size());
        for (auto& o : raw) {
            occupation_state st;
            st.occ = std::move(o);
            st.n = n;
            st.laplacian_sum = laplacian_sum_of(st.occ, mode_pool);
            basis.states.push_back(std::move(st));
        }
    }

    std::sort(basis.states.begin(), basis.states.end(),
              [](const occupation_state& a, const occupation_state& b) {
                  if (a.laplacian_sum != b.laplacian_sum)
                      return a.laplacian_sum < b.laplacian_sum;
                  return a.occ < b.occ;
              });
    for (std::size_t i = 0; i < basis.states.size(); ++i)
        basis.index_[basis.states[i].key_string()] = static_cast<long>(i);
    return basis;
}

} // namespace leelab
