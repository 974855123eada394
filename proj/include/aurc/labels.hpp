#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aurc {

// Declaration order is also the decoding tie-break order (PRO < CON < NON).
enum class StanceLabel : std::uint8_t { Pro = 0, Con = 1, Non = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<StanceLabel, kNumLabels> kAllLabels = {
    StanceLabel::Pro, StanceLabel::Con, StanceLabel::Non};

using Labels = std::vector<StanceLabel>;

inline constexpr std::size_t index_of(StanceLabel l) noexcept {
  return static_cast<std::size_t>(l);
}

inline constexpr bool is_argumentative(StanceLabel l) noexcept {
  return l != StanceLabel::Non;
}

std::string_view to_string(StanceLabel l) noexcept;

// Accepts "PRO", "CON", "NON" exactly.
std::optional<StanceLabel> parse_label(std::string_view s) noexcept;

// Contiguous argumentative span [start, end) of one sentence.
struct Segment {
  StanceLabel label = StanceLabel::Pro;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

std::string to_string(const Segment& s);

/// Maximal runs of PRO and of CON, left to right. NON runs yield nothing.
/// Throws ValidationError on empty input.
std::vector<Segment> labels_to_segments(std::span<const StanceLabel> labels);

/// Inverse of labels_to_segments; uncovered positions become NON.
/// Throws ValidationError on NON-labeled, empty, out-of-range or
/// overlapping segments.
Labels segments_to_labels(std::span<const Segment> segments,
                          std::size_t length);

// Checks the segment invariants for a sentence of the given length without
// building anything. Throws ValidationError naming the first violation.
void validate_segments(std::span<const Segment> segments, std::size_t length);

}  // namespace aurc
