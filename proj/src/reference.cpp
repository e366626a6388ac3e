#include "dmdcp/tensor_ops.hpp"

#include <cmath>
#include <string>

// Serial reference kernels. These mirror the defining formulas entry by
// entry (index enumeration, triple-loop summation) and share no code
// with the OpenMP kernels they are used to test.

namespace dmdcp::ref {

double frobenius_norm3(const Tensor3& t) {
    double acc = 0.0;
    for (Index i3 = 0; i3 < t.dim(2); ++i3)
        for (Index i2 = 0; i2 < t.dim(1); ++i2)
            for (Index i1 = 0; i1 < t.dim(0); ++i1) {
                const Cx v = t(i1, i2, i3);
                acc += v.real() * v.real() + v.imag() * v.imag();
            }
    return std::sqrt(acc);
}

Matrix unfold_mode(const Tensor3& t, int mode) {
    if (mode < 1 || mode > 3)
        throw DataError("ref::unfold_mode: mode must be 1, 2 or 3, got " +
                        std::to_string(mode));
    const Index I1 = t.dim(0), I2 = t.dim(1), I3 = t.dim(2);
    Matrix out;
    if (mode == 1)
        out.resize(I1, I2 * I3);
    else if (mode == 2)
        out.resize(I2, I3 * I1);
    else
        out.resize(I3, I1 * I2);
    for (Index i1 = 0; i1 < I1; ++i1)
        for (Index i2 = 0; i2 < I2; ++i2)
            for (Index i3 = 0; i3 < I3; ++i3) {
                if (mode == 1)
                    out(i1, i2 + I2 * i3) = t(i1, i2, i3);
                else if (mode == 2)
                    out(i2, i3 + I3 * i1) = t(i1, i2, i3);
                else
                    out(i3, i1 + I1 * i2) = t(i1, i2, i3);
            }
    return out;
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw DataError("ref::khatri_rao: column counts differ");
    Matrix out(a.rows() * b.rows(), a.cols());
    for (Index r = 0; r < a.cols(); ++r)
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < b.rows(); ++j)
                out(i * b.rows() + j, r) = a(i, r) * b(j, r);
    return out;
}

Tensor3 cp_reconstruct(const CPFactors& f, const std::array<Index, 3>& dims) {
    check_factors(f, "ref::cp_reconstruct");
    if (f.A.rows() != dims[0] || f.B.rows() != dims[1] || f.C.rows() != dims[2])
        throw DataError("ref::cp_reconstruct: factor row counts do not match dims");
    Tensor3 out(dims[0], dims[1], dims[2]);
    for (Index r = 0; r < f.rank(); ++r)
        for (Index i3 = 0; i3 < dims[2]; ++i3)
            for (Index i2 = 0; i2 < dims[1]; ++i2)
                for (Index i1 = 0; i1 < dims[0]; ++i1)
                    out(i1, i2, i3) += f.A(i1, r) * f.B(i2, r) * f.C(i3, r);
    return out;
}

Matrix mttkrp_conj(const Tensor3& t, const CPFactors& f, int mode) {
    // Literal form: unfolding times conjugated Khatri-Rao product.
    const Matrix unfolded = ref::unfold_mode(t, mode);
    Matrix kr;
    if (mode == 1)
        kr = ref::khatri_rao(f.C, f.B);
    else if (mode == 2)
        kr = ref::khatri_rao(f.A, f.C);
    else
        kr = ref::khatri_rao(f.B, f.A);
    Matrix out(unfolded.rows(), kr.cols());
    for (Index i = 0; i < out.rows(); ++i)
        for (Index r = 0; r < out.cols(); ++r) {
            Cx acc(0.0, 0.0);
            for (Index k = 0; k < unfolded.cols(); ++k)
                acc += unfolded(i, k) * std::conj(kr(k, r));
            out(i, r) = acc;
        }
    return out;
}

double cp_fit_residual(const Tensor3& t, const CPFactors& f) {
    const Tensor3 recon = ref::cp_reconstruct(f, t.dims());
    double acc = 0.0;
    for (Index i3 = 0; i3 < t.dim(2); ++i3)
        for (Index i2 = 0; i2 < t.dim(1); ++i2)
            for (Index i1 = 0; i1 < t.dim(0); ++i1)
                acc += std::norm(t(i1, i2, i3) - recon(i1, i2, i3));
    return std::sqrt(acc);
}

}  // namespace dmdcp::ref
