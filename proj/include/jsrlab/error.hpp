#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jsrlab {

enum class Errc {
  NonFinite,
  DimensionTooLarge,
  InvalidInput,
  IndexOutOfRange,
  IllConditioned,
  NotPositiveDefinite,
  NumericalFailure,
  BudgetExceeded,
  DegenerateDistribution,
  StateExplosion,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  Errc code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace jsrlab
