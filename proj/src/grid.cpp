#include "ipq/grid.hpp"

#include <limits>

#include "ipq/error.hpp"

namespace ipq {

GridParams::GridParams(std::uint32_t dim, Rational delta) : dim_(dim), delta_(delta) {
  if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  if (delta_.num() == 0 || delta_.num() > delta_.den()) {
    throw Error(ErrorCode::InvalidDelta, "delta must lie in (0, 1], got " + delta_.to_string());
  }
  // floor(d*den/num + d/2) == floor((2*d*den + d*num) / (2*num))
  using u128 = unsigned __int128;
  const u128 numer = u128{2} * dim_ * delta_.den() + u128{dim_} * delta_.num();
  const u128 s = numer / (u128{2} * delta_.num());
  // s + d must stay within an unsigned long for the rank arithmetic
  if (s > std::numeric_limits<std::uint64_t>::max() / 2) {
    throw Error(ErrorCode::InvalidDelta, "grid too fine: budget overflows 64 bits");
  }
  budget_ = static_cast<std::uint64_t>(s);
}

}  // namespace ipq
