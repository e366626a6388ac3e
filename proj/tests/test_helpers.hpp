#pragma once

#include "dmdcp/rng.hpp"
#include "dmdcp/types.hpp"

namespace dmdcp::test {

inline Matrix random_matrix(UniformStream& stream, Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r)
            m(r, c) = Cx(stream.next_signed(), stream.next_signed());
    return m;
}

inline Tensor3 random_tensor(UniformStream& stream, Index i1, Index i2, Index i3) {
    Tensor3 t(i1, i2, i3);
    Cx* d = t.data();
    for (Index i = 0; i < t.size(); ++i)
        d[i] = Cx(stream.next_signed(), stream.next_signed());
    return t;
}

inline CPFactors random_factors(UniformStream& stream, Index i1, Index i2, Index i3,
                                Index R) {
    return {random_matrix(stream, i1, R), random_matrix(stream, i2, R),
            random_matrix(stream, i3, R)};
}

}  // namespace dmdcp::test
