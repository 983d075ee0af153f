#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chshsim/experiment.hpp"

namespace chshsim {

/// One row of the event table: the product sits in the column of the pair
/// that was actually measured, the other three are absent. Lambda is hidden
/// unless explicitly requested.
struct EventRow {
  std::uint64_t event = 0;
  std::array<std::optional<int>, 4> products;
  std::optional<double> lambda;
};

inline constexpr std::string_view kEventCsvHeader = "event,A1B1,A1B2,A2B1,A2B2,lambda";

std::vector<EventRow> emit_event_table(std::span<const TrialRecord> records, bool include_lambda = false);

/// CSV with header `event,A1B1,A1B2,A2B1,A2B2,lambda`; absent cells are
/// empty, lambda is "unknown" unless present.
void write_event_csv(std::ostream& out, std::span<const EventRow> rows);

/// Aligned text rendering with "***" for absent cells.
std::string render_event_text(std::span<const EventRow> rows);

/// Parse an events CSV back into records (product and lambda only).
/// Throws InvalidInput on a malformed file, InsufficientData on an empty one.
std::vector<TrialRecord> read_event_csv(std::istream& in);

std::string format_product(int product);

}  // namespace chshsim
