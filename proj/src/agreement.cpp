#include "aurc/agreement.hpp"

#include <set>

#include "aurc/error.hpp"

namespace aurc {

AgreementReport alpha_nominal(std::span<const AnnotationSet> sets) {
  AgreementReport report;
  std::set<std::string> annotators;
  auto& o = report.coincidences;

  for (const auto& set : sets) {
    validate_annotation_set(set);
    for (const auto& [who, labels] : set.annotations) annotators.insert(who);
    const auto m = set.annotations.size();
    if (m < 2) continue;
    const auto n_tokens = set.annotations.begin()->second.size();
    const double weight = 1.0 / static_cast<double>(m - 1);
    for (std::size_t t = 0; t < n_tokens; ++t) {
      std::array<std::size_t, kNumLabels> counts{};
      for (const auto& [who, labels] : set.annotations) ++counts[index_of(labels[t])];
      // o_ck += n_c * (n_k - [c == k]) / (m - 1)
      for (std::size_t c = 0; c < kNumLabels; ++c) {
        if (counts[c] == 0) continue;
        for (std::size_t k = 0; k < kNumLabels; ++k) {
          const auto partners = counts[k] - (c == k ? 1 : 0);
          o[c][k] += static_cast<double>(counts[c] * partners) * weight;
        }
      }
      ++report.n_tokens;
      report.n_values += m;
    }
  }
  report.n_annotators = annotators.size();

  if (report.n_values < 2) {
    throw UndefinedError("alpha_nominal: no pairable values (need >= 2 annotators on a sentence)");
  }
  std::array<double, kNumLabels> marginals{};
  double n = 0.0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    for (std::size_t k = 0; k < kNumLabels; ++k) marginals[c] += o[c][k];
    n += marginals[c];
  }
  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      if (c == k) continue;
      observed += o[c][k];
      expected += marginals[c] * marginals[k];
    }
  }
  report.observed_disagreement = observed / n;
  report.expected_disagreement = expected / (n * (n - 1.0));
  if (report.expected_disagreement <= 0.0) {
    throw UndefinedError(
        "alpha_nominal: undefined agreement, all values fall into one category");
  }
  report.alpha = 1.0 - report.observed_disagreement / report.expected_disagreement;
  return report;
}

}  // namespace aurc
