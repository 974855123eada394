#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "aurc/aggregate.hpp"

namespace aurc {

struct AgreementReport {
  double alpha = 0.0;
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
  std::size_t n_tokens = 0;      // token positions with >= 2 values
  std::size_t n_annotators = 0;  // distinct annotator ids
  std::size_t n_values = 0;      // pairable values (the coincidence total)
  // Coincidence matrix indexed by StanceLabel.
  std::array<std::array<double, kNumLabels>, kNumLabels> coincidences{};
};

/// Krippendorff's alpha with the nominal distance over token positions.
///
/// Each token position of each sentence is one unit; every annotator who
/// labeled the sentence contributes one value, NON (blank) included. Units
/// with fewer than two values are not pairable and are ignored, which is
/// how sentences skipped by some annotators are handled.
///
/// Throws UndefinedError when nothing is pairable or when the pooled values
/// use a single category (expected disagreement 0).
AgreementReport alpha_nominal(std::span<const AnnotationSet> sets);

}  // namespace aurc
