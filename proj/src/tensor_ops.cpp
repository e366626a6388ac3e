#include "dmdcp/tensor_ops.hpp"

#include <cmath>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dmdcp {

namespace {

// Deterministic parallel sum: fixed chunking by thread index, partials
// combined in thread order. Identical results for a fixed team size,
// and identical to the serial sum when the team has one thread.
template <class ChunkSum>
double ordered_parallel_sum(Index n, Index min_parallel, ChunkSum&& chunk_sum) {
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
#else
    const int max_threads = 1;
#endif
    if (max_threads == 1 || n < min_parallel) return chunk_sum(Index{0}, n);

    std::vector<double> partials(static_cast<std::size_t>(max_threads), 0.0);
    int used = 1;
#pragma omp parallel
    {
#ifdef _OPENMP
        const int team = omp_get_num_threads();
        const int tid = omp_get_thread_num();
#else
        const int team = 1;
        const int tid = 0;
#endif
#pragma omp single
        used = team;
        const Index lo = n * tid / team;
        const Index hi = n * (tid + 1) / team;
        partials[static_cast<std::size_t>(tid)] = chunk_sum(lo, hi);
    }
    double total = 0.0;
    for (int t = 0; t < used; ++t) total += partials[static_cast<std::size_t>(t)];
    return total;
}

void check_mode(int mode, const char* where) {
    if (mode < 1 || mode > 3)
        throw DataError(std::string(where) + ": mode must be 1, 2 or 3, got " +
                        std::to_string(mode));
}

void check_recon_dims(const CPFactors& f, const std::array<Index, 3>& dims,
                      const char* where) {
    check_factors(f, where);
    if (f.A.rows() != dims[0] || f.B.rows() != dims[1] || f.C.rows() != dims[2])
        throw DataError(std::string(where) + ": factor row counts (" +
                        std::to_string(f.A.rows()) + ", " + std::to_string(f.B.rows()) +
                        ", " + std::to_string(f.C.rows()) + ") do not match dims (" +
                        std::to_string(dims[0]) + ", " + std::to_string(dims[1]) + ", " +
                        std::to_string(dims[2]) + ")");
}

}  // namespace

double frobenius_norm3(const Tensor3& t) {
    const Cx* d = t.data();
    const double sq = ordered_parallel_sum(t.size(), 4096, [d](Index lo, Index hi) {
        double acc = 0.0;
        for (Index i = lo; i < hi; ++i) acc += std::norm(d[i]);
        return acc;
    });
    return std::sqrt(sq);
}

Matrix unfold_mode(const Tensor3& t, int mode) {
    check_mode(mode, "unfold_mode");
    const Index I1 = t.dim(0), I2 = t.dim(1), I3 = t.dim(2);
    Matrix out;
    switch (mode) {
        case 1: {
            out.resize(I1, I2 * I3);
#pragma omp parallel for
            for (Index i3 = 0; i3 < I3; ++i3)
                for (Index i2 = 0; i2 < I2; ++i2)
                    for (Index i1 = 0; i1 < I1; ++i1)
                        out(i1, i2 + I2 * i3) = t(i1, i2, i3);
            break;
        }
        case 2: {
            out.resize(I2, I3 * I1);
#pragma omp parallel for
            for (Index i3 = 0; i3 < I3; ++i3)
                for (Index i2 = 0; i2 < I2; ++i2)
                    for (Index i1 = 0; i1 < I1; ++i1)
                        out(i2, i3 + I3 * i1) = t(i1, i2, i3);
            break;
        }
        default: {
            out.resize(I3, I1 * I2);
#pragma omp parallel for
            for (Index i3 = 0; i3 < I3; ++i3)
                for (Index i2 = 0; i2 < I2; ++i2)
                    for (Index i1 = 0; i1 < I1; ++i1)
                        out(i3, i1 + I1 * i2) = t(i1, i2, i3);
            break;
        }
    }
    return out;
}

Tensor3 fold_mode(const Matrix& m, int mode, const std::array<Index, 3>& dims) {
    check_mode(mode, "fold_mode");
    const Index I1 = dims[0], I2 = dims[1], I3 = dims[2];
    Index want_rows = 0, want_cols = 0;
    switch (mode) {
        case 1: want_rows = I1; want_cols = I2 * I3; break;
        case 2: want_rows = I2; want_cols = I3 * I1; break;
        default: want_rows = I3; want_cols = I1 * I2; break;
    }
    if (m.rows() != want_rows || m.cols() != want_cols)
        throw DataError("fold_mode: unfolding shape (" + std::to_string(m.rows()) +
                        " x " + std::to_string(m.cols()) + ") does not match dims for mode " +
                        std::to_string(mode));
    Tensor3 t(I1, I2, I3);
#pragma omp parallel for
    for (Index i3 = 0; i3 < I3; ++i3)
        for (Index i2 = 0; i2 < I2; ++i2)
            for (Index i1 = 0; i1 < I1; ++i1) {
                switch (mode) {
                    case 1: t(i1, i2, i3) = m(i1, i2 + I2 * i3); break;
                    case 2: t(i1, i2, i3) = m(i2, i3 + I3 * i1); break;
                    default: t(i1, i2, i3) = m(i3, i1 + I1 * i2); break;
                }
            }
    return t;
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw DataError("khatri_rao: column counts differ (" + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.cols()) + ")");
    const Index ra = a.rows(), rb = b.rows(), R = a.cols();
    Matrix out(ra * rb, R);
#pragma omp parallel for
    for (Index r = 0; r < R; ++r)
        for (Index i = 0; i < ra; ++i)
            for (Index j = 0; j < rb; ++j)
                out(i * rb + j, r) = a(i, r) * b(j, r);
    return out;
}

void cp_reconstruct_into(const CPFactors& f, Tensor3& out) {
    const Index I3 = out.dim(2);
#pragma omp parallel for
    for (Index j = 0; j < I3; ++j)
        out.slice(j) = f.A * f.C.row(j).asDiagonal() * f.B.transpose();
}

Tensor3 cp_reconstruct(const CPFactors& f, const std::array<Index, 3>& dims) {
    check_recon_dims(f, dims, "cp_reconstruct");
    Tensor3 out(dims[0], dims[1], dims[2]);
    cp_reconstruct_into(f, out);
    return out;
}

Tensor3 cp_reconstruct(const CPFactors& f) {
    return cp_reconstruct(f, {f.A.rows(), f.B.rows(), f.C.rows()});
}

Matrix mttkrp_conj(const Tensor3& t, const CPFactors& f, int mode) {
    check_mode(mode, "mttkrp_conj");
    check_recon_dims(f, t.dims(), "mttkrp_conj");
    const Index I1 = t.dim(0), I2 = t.dim(1), I3 = t.dim(2), R = f.rank();
    Matrix out;
    switch (mode) {
        case 1: {
            out.resize(I1, R);
#pragma omp parallel for
            for (Index i1 = 0; i1 < I1; ++i1)
                for (Index r = 0; r < R; ++r) {
                    Cx acc(0.0, 0.0);
                    for (Index i3 = 0; i3 < I3; ++i3) {
                        const Cx cc = std::conj(f.C(i3, r));
                        for (Index i2 = 0; i2 < I2; ++i2)
                            acc += t(i1, i2, i3) * std::conj(f.B(i2, r)) * cc;
                    }
                    out(i1, r) = acc;
                }
            break;
        }
        case 2: {
            out.resize(I2, R);
#pragma omp parallel for
            for (Index i2 = 0; i2 < I2; ++i2)
                for (Index r = 0; r < R; ++r) {
                    Cx acc(0.0, 0.0);
                    for (Index i3 = 0; i3 < I3; ++i3) {
                        const Cx cc = std::conj(f.C(i3, r));
                        for (Index i1 = 0; i1 < I1; ++i1)
                            acc += t(i1, i2, i3) * std::conj(f.A(i1, r)) * cc;
                    }
                    out(i2, r) = acc;
                }
            break;
        }
        default: {
            out.resize(I3, R);
#pragma omp parallel for
            for (Index i3 = 0; i3 < I3; ++i3)
                for (Index r = 0; r < R; ++r) {
                    Cx acc(0.0, 0.0);
                    for (Index i2 = 0; i2 < I2; ++i2) {
                        const Cx bb = std::conj(f.B(i2, r));
                        for (Index i1 = 0; i1 < I1; ++i1)
                            acc += t(i1, i2, i3) * std::conj(f.A(i1, r)) * bb;
                    }
                    out(i3, r) = acc;
                }
            break;
        }
    }
    return out;
}

double cp_fit_residual(const Tensor3& t, const CPFactors& f) {
    check_recon_dims(f, t.dims(), "cp_fit_residual");
    const Index I3 = t.dim(2);
    const double sq = ordered_parallel_sum(I3, 2, [&](Index lo, Index hi) {
        double acc = 0.0;
        Matrix recon;
        for (Index j = lo; j < hi; ++j) {
            recon.noalias() = f.A * f.C.row(j).asDiagonal() * f.B.transpose();
            acc += (t.slice(j) - recon).squaredNorm();
        }
        return acc;
    });
    return std::sqrt(sq);
}

}  // namespace dmdcp
