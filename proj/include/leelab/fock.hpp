#ifndef LEELAB_FOCK_HPP
#define LEELAB_FOCK_HPP

#include "leelab/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace leelab {

// Symmetric n-boson occupation multiset. occ holds (pool index, count) pairs
// sorted by pool index -- the canonical key. laplacian_sum is
// sum_i count_i * sigma_i.
struct occupation_state {
    std::vector<std::pair<int, int>> occ;
    int n = 0;
    double laplacian_sum = 0.0;

    int count_of(int pool_index) const;
    std::string key_string() const;
};

bool operator==(const occupation_state& a, const occupation_state& b);

// h0 eigenvalue: S/2m + n*m.
double h0_eigenvalue(const occupation_state& state, double m);

struct ladder_result {
    occupation_state state;
    double amplitude = 0.0; // 0 means annihilated to nothing
};

// Bosonic ladder operators in the pool-index basis: annihilate gives
// sqrt(n_sigma), create gives sqrt(n_sigma + 1).
ladder_result annihilate(const occupation_state& state, int pool_index,
                         const std::vector<mode>& pool);
ladder_result create(const occupation_state& state, int pool_index,
                     const std::vector<mode>& pool);

// Ordered n-boson sector basis over a truncated one-particle mode pool.
// States are exactly those with h0 <= energy_cutoff, ordered by ascending h0
// then canonical key.
struct sector_basis {
    std::vector<occupation_state> states;
    std::vector<mode> mode_pool;
    int n = 0;
    double energy_cutoff = 0.0;
    double mass = 0.0;

    std::size_t dim() const { return states.size(); }
    // Index of a state, or -1 when outside the basis.
    long index_of(const occupation_state& s) const;

private:
    friend sector_basis enumerate_sector(const std::vector<mode>&, int, double,
                                         double, std::size_t);
    std::unordered_map<std::string, long> index_;
};

// Enumerates the full sector. Throws capacity_error when the dimension would
// exceed max_dim.
sector_basis enumerate_sector(const std::vector<mode>& mode_pool, int n,
                              double energy_cutoff, double m,
                              std::size_t max_dim = 200000);

} // namespace leelab

#endif
