#include "dmdcp/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <string>

namespace dmdcp {

using nlohmann::json;

namespace {

json complex_to_json(const Cx& v) { return json::array({v.real(), v.imag()}); }

Cx complex_from_json(const json& j, const std::string& where, std::size_t pos) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw DataError(where + ": entry " + std::to_string(pos) +
                        " is not a [re, im] pair");
    const double re = j[0].get<double>();
    const double im = j[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
        throw DataError(where + ": entry " + std::to_string(pos) + " is non-finite");
    return {re, im};
}

json matrix_to_json(const Matrix& m) {
    json data = json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw DataError(where + ": expected an object with rows, cols, data");
    const Index rows = j["rows"].get<Index>();
    const Index cols = j["cols"].get<Index>();
    if (rows < 0 || cols < 0) throw DataError(where + ": negative dimensions");
    const json& data = j["data"];
    if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols))
        throw DataError(where + ": data length " + std::to_string(data.size()) +
                        " does not match " + std::to_string(rows) + " x " +
                        std::to_string(cols));
    Matrix m(rows, cols);
    std::size_t pos = 0;
    for (Index i = 0; i < rows; ++i)
        for (Index j2 = 0; j2 < cols; ++j2) {
            m(i, j2) = complex_from_json(data[pos], where, pos);
            ++pos;
        }
    return m;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

json real_vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json complex_vector_to_json(const Vector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Vector complex_vector_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw DataError(where + ": expected an array");
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Index>(i)) = complex_from_json(j[i], where, i);
    return v;
}

}  // namespace

void tensor_io_write(const Tensor3& t, const std::string& path) {
    json data = json::array();
    const Cx* d = t.data();
    for (Index i = 0; i < t.size(); ++i) data.push_back(complex_to_json(d[i]));
    save_json(json{{"dims", {t.dim(0), t.dim(1), t.dim(2)}}, {"data", std::move(data)}},
              path);
}

Tensor3 tensor_io_read(const std::string& path) {
    const json j = load_json(path);
    if (!j.is_object() || !j.contains("dims") || !j.contains("data"))
        throw DataError(path + ": expected an object with dims and data");
    const json& dims = j["dims"];
    if (!dims.is_array() || dims.size() != 3)
        throw DataError(path + ": dims must be a 3-element array");
    const Index i1 = dims[0].get<Index>();
    const Index i2 = dims[1].get<Index>();
    const Index i3 = dims[2].get<Index>();
    if (i1 < 1 || i2 < 1 || i3 < 1) throw DataError(path + ": dims must be >= 1");
    const json& data = j["data"];
    if (!data.is_array() || data.size() != static_cast<std::size_t>(i1 * i2 * i3))
        throw DataError(path + ": data length " + std::to_string(data.size()) +
                        " does not match dims product " + std::to_string(i1 * i2 * i3));
    Tensor3 t(i1, i2, i3);
    Cx* d = t.data();
    for (std::size_t pos = 0; pos < data.size(); ++pos)
        d[pos] = complex_from_json(data[pos], path, pos);
    return t;
}

void factors_io_write(const CPFactors& f, const std::string& path) {
    check_factors(f, "factors_io_write");
    save_json(json{{"R", f.rank()},
                   {"A", matrix_to_json(f.A)},
                   {"B", matrix_to_json(f.B)},
                   {"C", matrix_to_json(f.C)}},
              path);
}

CPFactors factors_io_read(const std::string& path) {
    const json j = load_json(path);
    if (!j.is_object() || !j.contains("R") || !j.contains("A") || !j.contains("B") ||
        !j.contains("C"))
        throw DataError(path + ": expected an object with R, A, B, C");
    CPFactors f;
    f.A = matrix_from_json(j["A"], path + ":A");
    f.B = matrix_from_json(j["B"], path + ":B");
    f.C = matrix_from_json(j["C"], path + ":C");
    const Index r = j["R"].get<Index>();
    if (f.A.cols() != r || f.B.cols() != r || f.C.cols() != r)
        throw DataError(path + ": R = " + std::to_string(r) +
                        " disagrees with factor column counts");
    return f;
}

void dmd_io_write(const DmdResult& res, Index steps, const std::string& path) {
    if (res.amplitudes.size() == 0)
        throw DataError("dmd_io_write: amplitudes have not been computed");
    json j{{"R", res.rank_used},
           {"A", matrix_to_json(res.modes)},
           {"B", matrix_to_json(vandermonde_matrix(res.eigenvalues, steps))},
           {"C", matrix_to_json(res.amplitudes)},
           {"eigenvalues", complex_vector_to_json(res.eigenvalues)},
           {"strategy",
            res.strategy == DmdStrategy::Stacked ? "stacked" : "per_slice_mean"}};
    save_json(j, path);
}

DmdResult dmd_io_read(const std::string& path) {
    const json j = load_json(path);
    if (!j.is_object() || !j.contains("A") || !j.contains("C") ||
        !j.contains("eigenvalues") || !j.contains("strategy"))
        throw DataError(path + ": not a DMD result file");
    DmdResult res;
    res.modes = matrix_from_json(j["A"], path + ":A");
    res.amplitudes = matrix_from_json(j["C"], path + ":C");
    res.eigenvalues = complex_vector_from_json(j["eigenvalues"], path + ":eigenvalues");
    const std::string strategy = j["strategy"].get<std::string>();
    if (strategy == "stacked")
        res.strategy = DmdStrategy::Stacked;
    else if (strategy == "per_slice_mean")
        res.strategy = DmdStrategy::PerSliceMean;
    else
        throw DataError(path + ": unknown strategy '" + strategy + "'");
    res.rank_used = res.modes.cols();
    if (res.eigenvalues.size() != res.rank_used ||
        res.amplitudes.cols() != res.rank_used)
        throw DataError(path + ": inconsistent mode counts");
    return res;
}

void truth_io_write(const SynthGroundTruth& truth, const std::string& path) {
    save_json(json{{"Vbar", matrix_to_json(truth.Vbar)},
                   {"lambdas", complex_vector_to_json(truth.lambdas)},
                   {"alphas", real_vector_to_json(truth.alphas)},
                   {"betas", real_vector_to_json(truth.betas)},
                   {"gammas", real_vector_to_json(truth.gammas)},
                   {"initial_grid", real_vector_to_json(truth.initial_grid)}},
              path);
}

void report_io_write(const MatchReport& rep, const std::string& path) {
    json perm = json::array();
    for (const Index p : rep.permutation) perm.push_back(p);
    json scalars = json::array();
    for (const auto& triple : rep.per_mode_scalars)
        scalars.push_back(json::array({complex_to_json(triple[0]),
                                       complex_to_json(triple[1]),
                                       complex_to_json(triple[2])}));
    json errors = json::array();
    for (Index i = 0; i < rep.factor_errors.rows(); ++i)
        errors.push_back(json::array({rep.factor_errors(i, 0), rep.factor_errors(i, 1),
                                      rep.factor_errors(i, 2)}));
    save_json(json{{"permutation", std::move(perm)},
                   {"per_mode_scalars", std::move(scalars)},
                   {"factor_errors", std::move(errors)},
                   {"mean_error", rep.mean_error},
                   {"dmd_residual", rep.dmd_residual},
                   {"cp_residual", rep.cp_residual},
                   {"kruskal_satisfied", rep.kruskal_satisfied}},
              path);
}

}  // namespace dmdcp
