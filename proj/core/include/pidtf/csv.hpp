#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pidtf/sparse_tensor.hpp"
#include "pidtf/trainer.hpp"

namespace pidtf {

/// How to read a raw meter-log CSV. Two layouts are supported:
///  - combined: date_column empty (the default). time_step_column holds a
///    full timestamp, either ISO-8601 ("2024-01-05T13:00:05", space or 'T'
///    separator, optional trailing 'Z') or integer epoch seconds
///    (auto-detected). Both the time step and the day derive from it.
///  - separate: date_column names a distinct column with an ISO date
///    ("2024-01-05"); time_step_column then holds a time of day, either
///    "HH:MM:SS" or integer seconds since midnight.
/// All times are treated as UTC.
struct IngestSpec {
  std::string time_step_column = "timestamp";
  std::string meter_column = "meter";
  std::string value_column = "value";
  std::string date_column;  // empty means combined layout

  /// Sample period in seconds; 1 for 1 Hz data. A day holds
  /// ceil(86400 / seconds_per_step) time steps.
  std::uint32_t seconds_per_step = 1;

  /// ISO date mapped to day index 0. Defaults to the earliest date present.
  std::optional<std::string> date_origin;

  /// Throws InvalidArgument when columns collide or the step is 0.
  void validate() const;
};

struct IngestResult {
  SparseTensor tensor;
  /// Source meter ids in dense index order: meters[j] produced column j.
  std::vector<std::string> meters;
  /// The date that became day 0, as an ISO string.
  std::string date_origin;
};

/// Reads a raw CSV under the given ingest layout. Rows must parse, values
/// must be non-negative, and no two rows may land on the same (i, j, k)
/// cell.
/// Throws UnknownColumn, ParseError (with the 1-based row number),
/// NegativeValue, DuplicateIndex, EmptyTensor.
IngestResult ingest_csv(std::istream& in, const IngestSpec& spec);
IngestResult ingest_csv(const std::filesystem::path& path, const IngestSpec& spec);

/// Tensor interchange format:
///   # dims=I,J,K
///   i,j,k,value
///   0,3,1,17.25
/// Values are printed with enough digits to round-trip exactly.
void write_tensor_csv(const SparseTensor& tensor, std::ostream& out);
void write_tensor_csv(const SparseTensor& tensor, const std::filesystem::path& path);
SparseTensor read_tensor_csv(std::istream& in);
SparseTensor read_tensor_csv(const std::filesystem::path& path);

/// Meter map: "j,meter_id" rows under a header, one per dense meter index.
void write_meter_map_csv(std::span<const std::string> meters, std::ostream& out);

/// Imputation queries: "i,j,k" rows under a header.
std::vector<Cell> read_cells_csv(std::istream& in);
std::vector<Cell> read_cells_csv(const std::filesystem::path& path);

/// Imputation output: "i,j,k,value" rows under a header.
void write_imputed_csv(std::span<const ImputedCell> cells, std::ostream& out);

}  // namespace pidtf
