#include "pdm/index_block.hpp"

#include <sstream>

namespace pdm {

IndexBlock::IndexBlock(int dim, BlockMode mode, int extent) : dim_(dim), mode_(mode), extent_(extent) {
  if (dim != 1 && dim != 2) throw Error("IndexBlock: dimension must be 1 or 2");
  if (mode == BlockMode::Truncated) {
    if (extent < 1) throw Error("IndexBlock: truncated radius must be >= 1");
    side_ = 2 * extent + 1;
  } else {
    if (extent < 4 || extent % 2 != 0) throw Error("IndexBlock: period must be even and >= 4");
    side_ = extent;
  }
  size_ = static_cast<std::size_t>(side_);
  if (dim == 2) size_ *= static_cast<std::size_t>(side_);
  norms_.resize(size_);
  for (std::size_t p = 0; p < size_; ++p) norms_[p] = norm(index(p));
}

IndexBlock IndexBlock::truncated(int dim, int radius) { return IndexBlock(dim, BlockMode::Truncated, radius); }

IndexBlock IndexBlock::periodic(int dim, int period) { return IndexBlock(dim, BlockMode::Periodic, period); }

MultiIndex IndexBlock::index(std::size_t pos) const {
  const int offset = mode_ == BlockMode::Truncated ? extent_ : 0;
  if (dim_ == 1) return {static_cast<int>(pos) - offset, 0};
  const int i0 = static_cast<int>(pos / static_cast<std::size_t>(side_));
  const int i1 = static_cast<int>(pos % static_cast<std::size_t>(side_));
  return {i0 - offset, i1 - offset};
}

std::optional<std::size_t> IndexBlock::try_position(const MultiIndex& k) const {
  std::array<int, 2> c{};
  for (int j = 0; j < dim_; ++j) {
    if (mode_ == BlockMode::Periodic) {
      int r = k[j] % extent_;
      if (r < 0) r += extent_;
      c[j] = r;
    } else {
      if (k[j] < -extent_ || k[j] > extent_) return std::nullopt;
      c[j] = k[j] + extent_;
    }
  }
  if (dim_ == 1) return static_cast<std::size_t>(c[0]);
  return static_cast<std::size_t>(c[0]) * static_cast<std::size_t>(side_) + static_cast<std::size_t>(c[1]);
}

std::size_t IndexBlock::position(const MultiIndex& k) const {
  auto p = try_position(k);
  if (!p) throw Error("IndexBlock: index outside truncated block");
  return *p;
}

MultiIndex IndexBlock::representative(const MultiIndex& k) const {
  if (mode_ == BlockMode::Truncated) return k;
  MultiIndex r{0, 0};
  for (int j = 0; j < dim_; ++j) r[j] = centered(k[j], extent_);
  return r;
}

int IndexBlock::norm(const MultiIndex& k) const { return l1(representative(k)); }

std::string IndexBlock::describe() const {
  std::ostringstream os;
  os << "d=" << dim_ << (mode_ == BlockMode::Truncated ? " truncated M=" : " periodic K=") << extent_;
  return os.str();
}

int bracket(const MultiIndex& a, int K, int dim) {
  int s = 0;
  for (int j = 0; j < dim; ++j) s += std::abs(centered(a[j], K));
  return s;
}

void require_same_block(const IndexBlock& a, const IndexBlock& b, const char* what) {
  if (a != b) throw Error(std::string(what) + ": block mismatch (" + a.describe() + " vs " + b.describe() + ")");
}

}  // namespace pdm
