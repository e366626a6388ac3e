#pragma once

#include "dmdcp/types.hpp"

namespace dmdcp {

/// sqrt of the sum of squared moduli over all entries.
double frobenius_norm3(const Tensor3& t);

/// Mode-n unfolding, cyclic convention:
///   mode 1: I1 x (I2*I3), column index i2 + I2*i3
///   mode 2: I2 x (I3*I1), column index i3 + I3*i1
///   mode 3: I3 x (I1*I2), column index i1 + I1*i2
Matrix unfold_mode(const Tensor3& t, int mode);

/// Inverse of unfold_mode: refolds an unfolding back into a tensor of
/// the given dimensions. Exact (entrywise copy).
Tensor3 fold_mode(const Matrix& m, int mode, const std::array<Index, 3>& dims);

/// Column-wise Kronecker product: column r is kron(a_r, b_r), shape
/// (a.rows*b.rows) x cols.
Matrix khatri_rao(const Matrix& a, const Matrix& b);

/// Sum of rank-1 outer products a_r (x) b_r (x) c_r.
Tensor3 cp_reconstruct(const CPFactors& f, const std::array<Index, 3>& dims);
Tensor3 cp_reconstruct(const CPFactors& f);
void cp_reconstruct_into(const CPFactors& f, Tensor3& out);

/// Matricized tensor times conjugated Khatri-Rao product, the ALS
/// workhorse. Equals unfold_mode(t, mode) * conj(khatri_rao(x, y)) with
/// (x, y) = (C, B), (A, C), (B, A) for modes 1, 2, 3.
Matrix mttkrp_conj(const Tensor3& t, const CPFactors& f, int mode);

/// Frobenius norm of (t - cp_reconstruct(f)) without materializing the
/// reconstruction.
double cp_fit_residual(const Tensor3& t, const CPFactors& f);

namespace ref {

// Serial reference implementations, kept for testing the OpenMP kernels
// above and for the kernel benchmark. Plain index loops, no BLAS-style
// shortcuts.

double frobenius_norm3(const Tensor3& t);
Matrix unfold_mode(const Tensor3& t, int mode);
Matrix khatri_rao(const Matrix& a, const Matrix& b);
Tensor3 cp_reconstruct(const CPFactors& f, const std::array<Index, 3>& dims);
Matrix mttkrp_conj(const Tensor3& t, const CPFactors& f, int mode);
double cp_fit_residual(const Tensor3& t, const CPFactors& f);

}  // namespace ref

}  // namespace dmdcp
