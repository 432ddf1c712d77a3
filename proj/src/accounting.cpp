#include "cfota/accounting.hpp"

#include "cfota/errors.hpp"

namespace cfota {

FronthaulReport fronthaul_scalars(int level, const FronthaulParams& p) {
    if (p.tau_p <= 0 || p.tau_u <= 0 || p.antennas <= 0 || p.aps <= 0 || p.groups <= 0 ||
        p.devices <= 0) {
        throw ValidationError("fronthaul parameters must be positive");
    }
    const std::int64_t n = p.antennas;
    const std::int64_t l = p.aps;
    FronthaulReport r;
    switch (level) {
        case 3:
            r.pilot_data = (p.tau_p + p.tau_u) * n * l;
            r.statistics_twice = p.devices * l * n * n;
            break;
        case 2:
            r.pilot_data = p.tau_p * n * l + p.tau_u * p.groups * l;
            r.combiners = p.groups * n * l;
            r.statistics_twice = p.devices * l * n * n;
            break;
        case 1:
            r.pilot_data = p.tau_u * p.groups * l;
            break;
        default:
            throw ValidationError("cooperation level must be 1, 2 or 3");
    }
    return r;
}

CheaperLevel cheaper_level(std::int64_t tau_u, std::int64_t antennas, std::int64_t groups,
                           std::int64_t rounds_per_block) {
    if (tau_u <= 0 || antennas <= 0 || groups <= 0 || rounds_per_block <= 0) {
        throw ValidationError("parameters must be positive");
    }
    if (antennas <= groups) return CheaperLevel::Level3;
    const std::int64_t lhs = rounds_per_block * antennas * groups;
    const std::int64_t rhs = tau_u * (antennas - groups);
    if (lhs < rhs) return CheaperLevel::Level2;
    if (lhs > rhs) return CheaperLevel::Level3;
    return CheaperLevel::Tie;
}

const char* to_string(CheaperLevel c) {
    switch (c) {
        case CheaperLevel::Level2: return "level2";
        case CheaperLevel::Level3: return "level3";
        case CheaperLevel::Tie: return "tie";
    }
    return "unknown";
}

}  // namespace cfota
