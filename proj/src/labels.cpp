#include "aurc/labels.hpp"

#include <algorithm>

#include "aurc/error.hpp"

namespace aurc {

std::string_view to_string(StanceLabel l) noexcept {
  switch (l) {
    case StanceLabel::Pro:
      return "PRO";
    case StanceLabel::Con:
      return "CON";
    case StanceLabel::Non:
      return "NON";
  }
  return "NON";
}

std::optional<StanceLabel> parse_label(std::string_view s) noexcept {
  if (s == "PRO") return StanceLabel::Pro;
  if (s == "CON") return StanceLabel::Con;
  if (s == "NON") return StanceLabel::Non;
  return std::nullopt;
}

std::string to_string(const Segment& s) {
  return std::string(to_string(s.label)) + "@[" + std::to_string(s.start) +
         "," + std::to_string(s.end) + ")";
}

std::vector<Segment> labels_to_segments(std::span<const StanceLabel> labels) {
  if (labels.empty()) {
    throw ValidationError("labels_to_segments: empty label sequence");
  }
  std::vector<Segment> out;
  std::size_t i = 0;
  while (i < labels.size()) {
    std::size_t j = i + 1;
    while (j < labels.size() && labels[j] == labels[i]) ++j;
    if (is_argumentative(labels[i])) out.push_back({labels[i], i, j});
    i = j;
  }
  return out;
}

void validate_segments(std::span<const Segment> segments, std::size_t length) {
  std::vector<const Segment*> sorted;
  sorted.reserve(segments.size());
  for (const auto& s : segments) {
    if (!is_argumentative(s.label)) {
      throw ValidationError("segment " + to_string(s) + " is labeled NON");
    }
    if (s.start >= s.end) {
      throw ValidationError("segment " + to_string(s) + " is empty");
    }
    if (s.end > length) {
      throw ValidationError("segment " + to_string(s) +
                            " exceeds sentence length " +
                            std::to_string(length));
    }
    sorted.push_back(&s);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Segment* a, const Segment* b) { return a->start < b->start; });
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k]->start < sorted[k - 1]->end) {
      throw ValidationError("segments " + to_string(*sorted[k - 1]) + " and " +
                            to_string(*sorted[k]) + " overlap");
    }
  }
}

Labels segments_to_labels(std::span<const Segment> segments,
                          std::size_t length) {
  validate_segments(segments, length);
  Labels out(length, StanceLabel::Non);
  for (const auto& s : segments) {
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(s.start),
              out.begin() + static_cast<std::ptrdiff_t>(s.end), s.label);
  }
  return out;
}

}  // namespace aurc
