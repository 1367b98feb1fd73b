#pragma once

// Experiments around the conjectural bound 2^(2^(n-1)).
//
//   probe   for a tuple x with |x_1| above the bound, look for y satisfying
//           every add/mul relation of x with some |y_i| > |x_1| (strict
//           mode: |y_1| > |x_1|)
//   survey  classify every small system (n <= 2 exhaustively up to
//           relabeling, n = 3 by seeded sampling)
//   semi    the shell-by-shell search for a solution with max-norm alpha,
//           started at bound(D) + 1 or at an explicit override
//
// Witnesses are always chosen the same way: smallest max-norm first, then
// lexicographic order with coordinates compared as 0, 1, -1, 2, -2, ...

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dioph/ensys.hpp"
#include "dioph/poly.hpp"
#include "dioph/solver.hpp"

namespace dioph::explorer {

enum class VerdictKind { Vacuous, WitnessFound, CandidateCounterexample, Exhausted };

struct Verdict {
    VerdictKind kind = VerdictKind::Exhausted;
    std::optional<ensys::Tuple> witness;
    std::int64_t horizon = 0;
};

std::string to_string(VerdictKind kind);

// Add/mul relations of x (x_i = 1 relations are dropped).
ensys::EnSystem relation_system(std::span<const std::int64_t> x);

Verdict probe(std::span<const std::int64_t> x, std::int64_t horizon, bool strict);
nlohmann::ordered_json to_json(const Verdict& v);

enum class Status { FiniteWithinBound, GrowingFamily, SolutionBeyondBound, Unknown };
std::string to_string(Status status);

struct Classification {
    ensys::EnSystem system;  // canonical representative
    Status status = Status::Unknown;
    std::optional<std::int64_t> max_norm_seen;  // over the growth box
    std::int64_t bound = 0;                      // 2^(2^(n-1))
    std::int64_t inner_box = 0;                  // growth_box / 2
    std::int64_t growth_box = 0;
    BigInt inner_count;
    BigInt growth_count;
};

inline constexpr std::size_t kDefaultSamples = 200;

struct SurveyOptions {
    std::uint32_t n = 2;
    std::int64_t growth_box = 10'000;
    std::uint64_t seed = 1;
    std::size_t samples = kDefaultSamples;  // n = 3 only
    unsigned threads = 1;
};

// Systems in canonical order.
std::vector<Classification> survey(const SurveyOptions& options);

// Classification of one system (not canonicalized).
Classification classify(const ensys::EnSystem& s, std::int64_t growth_box);

nlohmann::ordered_json to_json(const Classification& c);

enum class SemiStatus { Terminated, Exhausted, StartNotEnumerable };
std::string to_string(SemiStatus status);

struct SemiOptions {
    std::optional<std::int64_t> start_override;
    std::int64_t cutoff = 0;
    bool nonneg = false;  // search y_i >= 0 with max(y) = alpha, start at bound(D-hat) + 1
};

struct SemiReport {
    SemiStatus status = SemiStatus::Exhausted;
    std::string start;  // decimal, or the symbolic start value
    std::int64_t cutoff = 0;
    std::optional<std::int64_t> shell;  // where the loop stopped
    std::optional<ensys::Tuple> witness;
};

SemiReport semi_algorithm_infinite(const poly::Polynomial& d, const SemiOptions& options);
nlohmann::ordered_json to_json(const SemiReport& r);

}  // namespace dioph::explorer
