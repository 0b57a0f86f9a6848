#ifndef AGDEC_COMMON_HPP
#define AGDEC_COMMON_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace agdec {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input (spec files, word files, descriptors).
class InputError : public Error {
 public:
  using Error::Error;
};

// Degree of the zero polynomial / shifted degree of a zero row.
inline constexpr long kNegInf = std::numeric_limits<long>::min() / 4;

}  // namespace agdec

#endif
