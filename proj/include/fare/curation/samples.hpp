#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fare/curation/inject.hpp"
#include "fare/curation/rubric.hpp"
#include "fare/curation/seed.hpp"

namespace fare {

inline constexpr std::size_t kDefaultPairLimit = 4;

/// Grades each response against the seed's gold answer.
std::vector<GradedResponse> grade_responses(const SeedRecord& seed,
                                            std::span<const RawResponse> responses);

/// Pairs correct with incorrect responses, at most `limit` pairs. When more
/// pairs exist a seeded subset is kept. The correct response lands in A or B
/// by a seeded coin per pair.
std::vector<LabeledSample> build_pairwise_samples(const SeedRecord& seed,
                                                  std::span<const GradedResponse> graded,
                                                  std::size_t limit, std::uint64_t rng_seed,
                                                  const RubricCatalog& rubrics = {});

enum class VerificationMode { RefFree, RefBased };

/// One sample per graded response. RefBased needs a non-empty gold answer and
/// throws DomainError otherwise.
std::vector<LabeledSample> build_verification_samples(const SeedRecord& seed,
                                                      std::span<const GradedResponse> graded,
                                                      VerificationMode mode,
                                                      const RubricCatalog& rubrics = {});

/// Pairwise samples contrasting the seed's reference call (gold_answer) with
/// corrupted variants, one per requested kind. Inapplicable kinds fall through
/// to the next kind in the list that has not been used for this seed.
std::vector<LabeledSample> build_injection_samples(const SeedRecord& seed,
                                                   std::span<const CorruptionKind> kinds,
                                                   std::uint64_t rng_seed,
                                                   const RubricCatalog& rubrics = {});

}  // namespace fare
