#pragma once

#include "dmdcp/correspondence.hpp"
#include "dmdcp/dmd.hpp"
#include "dmdcp/synth.hpp"
#include "dmdcp/types.hpp"

#include <string>

namespace dmdcp {

// JSON file formats. Complex values are [re, im] pairs; tensors store
// their entries with the first index fastest-varying, matrices row-major.
// Readers reject malformed documents, shape mismatches and non-finite
// entries with a DataError naming the offending position.

void tensor_io_write(const Tensor3& t, const std::string& path);
Tensor3 tensor_io_read(const std::string& path);

void factors_io_write(const CPFactors& f, const std::string& path);
CPFactors factors_io_read(const std::string& path);

/// DMD results serialize as CP factors (A = modes, B = the Vandermonde
/// time factors over `steps` rows, C = amplitudes) plus the eigenvalues
/// and strategy, so a DMD file is loadable via factors_io_read as well.
void dmd_io_write(const DmdResult& res, Index steps, const std::string& path);
DmdResult dmd_io_read(const std::string& path);

void truth_io_write(const SynthGroundTruth& truth, const std::string& path);

void report_io_write(const MatchReport& rep, const std::string& path);

}  // namespace dmdcp
