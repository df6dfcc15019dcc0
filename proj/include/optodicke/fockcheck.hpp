#pragma once

// Dense operators on a truncated Fock space of the two optical modes and the
// membrane, used to check the operator identities of the model exactly.
//
// Basis order is lexicographic in (n_a, n_b, n_c):
//   index = (n_a (n_max_b + 1) + n_b)(n_max_c + 1) + n_c.

#include <Eigen/Dense>

#include <cstddef>
#include <string>

#include "optodicke/model.hpp"

namespace optodicke::fockcheck {

using OperatorMatrix = Eigen::MatrixXcd;

struct FockTruncation {
    int n_max_a = 4;
    int n_max_b = 4;
    int n_max_c = 6;
    std::size_t budget = 4096;

    std::size_t dimension() const;
    std::size_t index(int na, int nb, int nc) const;
    void validate() const;
};

struct Ladder {
    OperatorMatrix a, b, c;
};

// Annihilation operators on the full tensor-product space.
Ladder ladder_operators(const FockTruncation& t);

struct Occupations {
    int na = 0, nb = 0, nc = 0;
};
Occupations occupations(const FockTruncation& t, std::size_t index);

// States with every occupation strictly below its cutoff; products of two
// ladder operators are exact between such states.
bool truncation_exact(const FockTruncation& t, std::size_t index);

OperatorMatrix build_hamiltonian(const DimensionlessParams& p, const FockTruncation& t);

// n_c + g S_x + sqrt(2/V) lambda (c + c^dag) S_z.
OperatorMatrix build_dicke_hamiltonian(const DimensionlessParams& p, const FockTruncation& t);

struct Schwinger {
    OperatorMatrix sx, sy, sz;
};

// S_x = a^dag b + b^dag a, S_y = i(a^dag b - b^dag a), S_z = (n_a - n_b)/2.
Schwinger schwinger_operators(const FockTruncation& t);

OperatorMatrix total_photon_number(const FockTruncation& t);

// exp(i pi n_c) x SWAP_ab, times (-1)^(n_a + n_b) when sign = -1.
OperatorMatrix parity_operator(const FockTruncation& t, int sign);

// Largest |M_ij| over pairs of truncation-exact basis states.
double max_on_exact(const FockTruncation& t, const OperatorMatrix& m);

// Largest |M_ij| over states with n_a + n_b <= min(n_max_a, n_max_b).
double max_on_sectors(const FockTruncation& t, const OperatorMatrix& m);

double check_number_conservation(const DimensionlessParams& p, const FockTruncation& t);

// max |H - H_D - I/2| on truncation-exact states within fixed-N sectors.
double check_dicke_equivalence(const DimensionlessParams& p, const FockTruncation& t);

double check_parity(const DimensionlessParams& p, const FockTruncation& t, int sign);

struct SchwingerReport {
    double commutator = 0.0;   // max |[S_x, S_y] + 4i S_z|
    double sz_number = 0.0;    // max |[S_z, N_tot]|
    double casimir = 0.0;      // max |S_x^2 + S_y^2 + 4 S_z^2 - N(N+2)|
};

SchwingerReport check_schwinger(const FockTruncation& t);

inline constexpr const char* operator_csv_header = "row,col,re,im";
// Nonzero entries in row-major order.
std::string operator_csv(const OperatorMatrix& m);

} // namespace optodicke::fockcheck
