#include "pdm/io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace pdm {

void write_opmatrix(const OpMatrix& a, std::ostream& os) {
  if (!a.fully_defined()) throw Error("write_opmatrix: masked matrices cannot be serialized");
  const IndexBlock& blk = a.block();
  os << "# pdm-opmatrix v1 d=" << blk.dim() << " mode=" << (blk.is_periodic() ? "periodic" : "truncated")
     << " extent=" << blk.extent() << '\n';
  os << "re,im\n";
  os << std::setprecision(17);
  for (std::size_t p = 0; p < a.size(); ++p)
    for (std::size_t q = 0; q < a.size(); ++q) os << a(p, q).real() << ',' << a(p, q).imag() << '\n';
}

OpMatrix read_opmatrix(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("read_opmatrix: empty input");
  std::istringstream hs(line);
  std::string hash, tag, version, d_field, mode_field, extent_field;
  hs >> hash >> tag >> version >> d_field >> mode_field >> extent_field;
  if (hash != "#" || tag != "pdm-opmatrix" || version != "v1") throw Error("read_opmatrix: bad header '" + line + "'");
  auto value_of = [&](const std::string& f, const std::string& key) {
    if (f.rfind(key + "=", 0) != 0) throw Error("read_opmatrix: expected " + key + "= in header");
    return f.substr(key.size() + 1);
  };
  const int dim = std::stoi(value_of(d_field, "d"));
  const std::string mode = value_of(mode_field, "mode");
  const int extent = std::stoi(value_of(extent_field, "extent"));
  IndexBlock blk = mode == "periodic"    ? IndexBlock::periodic(dim, extent)
                   : mode == "truncated" ? IndexBlock::truncated(dim, extent)
                                         : throw Error("read_opmatrix: unknown mode '" + mode + "'");
  if (!std::getline(is, line) || line != "re,im") throw Error("read_opmatrix: missing column header");

  const auto n = static_cast<Eigen::Index>(blk.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      if (!std::getline(is, line)) throw Error("read_opmatrix: truncated body");
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw Error("read_opmatrix: malformed entry '" + line + "'");
      m(p, q) = cplx{std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))};
    }
  }
  return OpMatrix(blk, std::move(m));
}

void save_opmatrix(const OpMatrix& a, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("save_opmatrix: cannot open " + path.string());
  write_opmatrix(a, os);
}

OpMatrix load_opmatrix(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("load_opmatrix: cannot open " + path.string());
  return read_opmatrix(is);
}

}  // namespace pdm
