#pragma once

#include <stdexcept>
#include <string>

namespace qlw {

// Shared numeric tolerance for subspace equality, effect validation and
// measurement probabilities.
inline constexpr double kDefaultTol = 1e-9;

// Singular values below kRankRel * sigma_max count as zero; kRankAbs applies
// when every singular value is tiny.
inline constexpr double kRankRel = 1e-8;
inline constexpr double kRankAbs = 1e-12;

// Ambient dimensions above this are rejected by the subspace factories
// unless the caller raises the cap explicitly.
inline constexpr int kDefaultDimCap = 16;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qlw
