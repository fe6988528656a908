#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pidtf {

/// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};

struct DuplicateIndex : Error {
  using Error::Error;
};

struct EmptyTensor : Error {
  using Error::Error;
};

/// Raised by scale_linear when y_max == y_min; constant data cannot be
/// mapped onto a range, the caller may skip scaling instead.
struct DegenerateRange : Error {
  using Error::Error;
};

struct RatioSumError : Error {
  using Error::Error;
};

struct EmptySet : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

/// A factor or controller cell turned NaN/Inf during an update. Carries the
/// offending location so divergence reports can name it.
struct NonFiniteUpdate : Error {
  NonFiniteUpdate(std::string matrix_name, std::uint32_t row_index, int rank_index)
      : Error("non-finite update in " + matrix_name + "[" + std::to_string(row_index) + "][" +
              std::to_string(rank_index) + "]"),
        matrix(std::move(matrix_name)),
        row(row_index),
        r(rank_index) {}

  std::string matrix;
  std::uint32_t row;
  int r;
};

/// CSV row that failed to parse; carries the 1-based row number.
struct ParseError : Error {
  ParseError(std::size_t row_number, const std::string& what_arg)
      : Error("row " + std::to_string(row_number) + ": " + what_arg), row(row_number) {}

  std::size_t row;
};

struct NegativeValue : Error {
  using Error::Error;
};

struct UnknownColumn : Error {
  using Error::Error;
};

}  // namespace pidtf
