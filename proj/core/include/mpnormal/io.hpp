#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpnormal/block.hpp"
#include "mpnormal/error.hpp"
#include "mpnormal/extension.hpp"
#include "mpnormal/growth_model.hpp"
#include "mpnormal/tolerances.hpp"

namespace mpnormal {

inline constexpr const char* kInstanceFormatVersion = "1.0";

/// Instance file (JSON, version 1.0):
///
///   {
///     "version": "1.0",
///     "blocks": [
///       { "interval": [a, b],
///         "A": [[[re, im], ...], ...],      // row-major, [re, im] per entry
///         "W": [[[re, im], ...], ...] }
///     ],
///     "growth_model": {                      // optional
///       "lambda1": <sequence>, "dims": <sequence>,
///       "lengths": <sequence>,               // optional
///       "scalar_blocks": false               // optional
///     },
///     "tolerances": { "validation": 1e-10 }  // optional overrides
///   }
///
///   <sequence> = {"kind": "constant", "value": v}
///              | {"kind": "linear", "slope": s, "intercept": c}
///              | {"kind": "power", "coefficient": c, "exponent": e}
///              | {"kind": "table", "values": [...], "tail": <sequence>}
struct InstanceFile {
  std::string version = kInstanceFormatVersion;
  std::vector<Block> blocks;
  std::optional<GrowthModel> growth_model;
  std::map<std::string, double> tolerances;

  /// Throws Error(OrderError) / Error(InvalidArgument) as Instance does.
  [[nodiscard]] Instance to_instance() const { return Instance(blocks); }
  /// `base` with this file's overrides applied.
  [[nodiscard]] Tolerances effective_tolerances(Tolerances base) const;

  bool operator==(const InstanceFile&) const = default;
};

/// Raised by the instance readers with every violation found, not only the
/// first. code() is ParseError for malformed input, otherwise ValidationError
/// when any block fails validation, else OrderError.
class InstanceError : public Error {
 public:
  InstanceError(ErrorCode code, std::vector<std::string> violations,
                std::vector<std::pair<std::size_t, ValidationReport>> reports = {});

  [[nodiscard]] const std::vector<std::string>& violations() const noexcept { return violations_; }
  /// (1-based block index, report) for each block that failed validation.
  [[nodiscard]] const std::vector<std::pair<std::size_t, ValidationReport>>& reports() const noexcept {
    return reports_;
  }

 private:
  std::vector<std::string> violations_;
  std::vector<std::pair<std::size_t, ValidationReport>> reports_;
};

/// Structural parse only: JSON shape, matrix shapes, interval endpoints.
InstanceFile parse_instance_text(std::string_view text);

/// Reads, parses and validates an instance file: every block against the
/// normal-extension hypotheses, then interval ordering. `tol` is the base table;
/// overrides from the file apply on top.
InstanceFile parse_instance(const std::filesystem::path& path, const Tolerances& tol = {});

/// Same checks on already-parsed data.
void validate_instance_file(const InstanceFile& file, const Tolerances& tol = {});

/// Pretty-printed JSON; doubles are written in shortest round-trip form so
/// parse_instance_text(serialize_instance(f)) == f.
std::string serialize_instance(const InstanceFile& file);

/// FNV-1a 64 of the compact serialization, as 16 hex digits.
std::string instance_digest(const InstanceFile& file);

}  // namespace mpnormal
