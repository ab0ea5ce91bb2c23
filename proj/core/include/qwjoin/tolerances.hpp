#pragma once

namespace qwjoin::tol {

inline constexpr double jacobi_offdiag = 1e-12;   // relative to the Frobenius norm
inline constexpr double group = 1e-7;             // scaled by max(1, max|M_ij|)
inline constexpr double support = 1e-8;           // projector column norm
inline constexpr double cospectral = 1e-8;        // E e_u = +-E e_v
inline constexpr double rational = 1e-7;          // reconstruct_rational default
inline constexpr long long rational_max_den = 1000000;
inline constexpr double ratio = 1e-9;             // ratio condition test
inline constexpr long long ratio_max_den = 1024;
inline constexpr double set_equal = 1e-7;         // eigenvalue set equality
inline constexpr double pst = 1e-6;               // |U(tau)_uv| >= 1 - pst
inline constexpr double lattice = 1e-9;           // membership in T_M
inline constexpr int minimality_grid = 1024;
inline constexpr int sweep_samples = 4096;

}  // namespace qwjoin::tol
