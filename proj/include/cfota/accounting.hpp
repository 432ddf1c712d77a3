#pragma once

#include <cstdint>

namespace cfota {

/// Fronthaul complex-scalar counts for one cooperation level.
/// Channel statistics (K L N^2 / 2 for Hermitian storage) can be a half-integer,
/// so that count is kept doubled.
struct FronthaulReport {
    std::int64_t pilot_data = 0;         // per coherence block
    std::int64_t combiners = 0;          // per coherence block / training round
    std::int64_t statistics_twice = 0;   // one-time, times two

    double statistics() const { return static_cast<double>(statistics_twice) / 2.0; }
    std::int64_t statistics_ceil() const { return (statistics_twice + 1) / 2; }
};

struct FronthaulParams {
    std::int64_t tau_p = 0;
    std::int64_t tau_u = 0;
    std::int64_t antennas = 0;  // N
    std::int64_t aps = 0;       // L
    std::int64_t groups = 0;    // G
    std::int64_t devices = 0;   // K
};

/// Level 3: ((tau_p + tau_u) N L, 0, K L N^2 / 2)
/// Level 2: (tau_p N L + tau_u G L, G N L, K L N^2 / 2)
/// Level 1: (tau_u G L, 0, 0)
/// Throws ValidationError for a level outside {1, 2, 3} or non-positive parameters.
FronthaulReport fronthaul_scalars(int level, const FronthaulParams& p);

enum class CheaperLevel { Level2, Level3, Tie };

/// Which of Level 2 / Level 3 needs less fronthaul when a coherence block holds
/// `rounds_per_block` training rounds. N <= G always favors Level 3; otherwise
/// Level 2 wins iff C < tau_u (N - G) / (N G), with a tie at equality.
CheaperLevel cheaper_level(std::int64_t tau_u, std::int64_t antennas, std::int64_t groups,
                           std::int64_t rounds_per_block);

const char* to_string(CheaperLevel c);

}  // namespace cfota
