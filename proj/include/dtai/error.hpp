#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace dtai {

/// Error codes used across the library. Each maps 1:1 onto the name
/// printed by the CLI's machine-readable error line.
enum class errc {
  missing_column,
  unknown_category,
  non_numeric_cell,
  empty_dataset,
  non_positive_adjusted,
  no_performance,
  too_few_designs,
  schema_mismatch,
  non_positive_input,
  invalid_parameter,
  empty_front,
  dimension_mismatch,
  empty_input,
  degenerate_samples,
  no_feasible_designs,
  unknown_column,
  out_of_range,
  constant_objective,
  invalid_dimension,
  invalid_config,
  io_error,
};

constexpr const char* to_string(errc c) noexcept {
  switch (c) {
    case errc::missing_column: return "MissingColumn";
    case errc::unknown_category: return "UnknownCategory";
    case errc::non_numeric_cell: return "NonNumericCell";
    case errc::empty_dataset: return "EmptyDataset";
    case errc::non_positive_adjusted: return "NonPositiveAdjusted";
    case errc::no_performance: return "NoPerformance";
    case errc::too_few_designs: return "TooFewDesigns";
    case errc::schema_mismatch: return "SchemaMismatch";
    case errc::non_positive_input: return "NonPositiveInput";
    case errc::invalid_parameter: return "InvalidParameter";
    case errc::empty_front: return "EmptyFront";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::empty_input: return "EmptyInput";
    case errc::degenerate_samples: return "DegenerateSamples";
    case errc::no_feasible_designs: return "NoFeasibleDesigns";
    case errc::unknown_column: return "UnknownColumn";
    case errc::out_of_range: return "OutOfRange";
    case errc::constant_objective: return "ConstantObjective";
    case errc::invalid_dimension: return "InvalidDimension";
    case errc::invalid_config: return "InvalidConfig";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

/// Exception carrying a typed code plus a human-readable message.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }
  const char* code_name() const noexcept { return to_string(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw error(code, message);
}

namespace detail {

inline void stream_into(std::ostringstream&) {}

template <typename T, typename... Rest>
void stream_into(std::ostringstream& oss, const T& head, const Rest&... rest) {
  oss << head;
  stream_into(oss, rest...);
}

}  // namespace detail

template <typename... Parts>
[[noreturn]] void failf(errc code, const Parts&... parts) {
  std::ostringstream oss;
  detail::stream_into(oss, parts...);
  throw error(code, oss.str());
}

template <typename... Parts>
void require(bool condition, errc code, const Parts&... parts) {
  if (!condition) failf(code, parts...);
}

}  // namespace dtai
