#pragma once

#include <filesystem>
#include <iosfwd>

#include "pdm/op_matrix.hpp"

namespace pdm {

/// Text dump of an OpMatrix:
///
///   # pdm-opmatrix v1 d=<d> mode=<truncated|periodic> extent=<M or K>
///   re,im
///   ...
///
/// one line per entry, row-major over the block positions. Masks are not
/// stored; masked matrices are rejected.
void write_opmatrix(const OpMatrix& a, std::ostream& os);
OpMatrix read_opmatrix(std::istream& is);

void save_opmatrix(const OpMatrix& a, const std::filesystem::path& path);
OpMatrix load_opmatrix(const std::filesystem::path& path);

}  // namespace pdm
