#include "cfota/topology.hpp"

#include "cfota/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cfota {

namespace {

std::size_t exact_root(std::size_t count) {
    const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(count))));
    if (count == 0 || r * r != count) {
        throw NotPerfectSquare(std::to_string(count) + " is not a positive perfect square");
    }
    return r;
}

}  // namespace

Area::Area(double side) : side_m(side) {
    if (!(side > 0.0)) throw ValidationError("area side must be positive");
}

bool Area::contains(const Point& p) const {
    return p.x() >= 0.0 && p.x() < side_m && p.y() >= 0.0 && p.y() < side_m;
}

std::vector<Point> place_aps_grid(std::size_t count, const Area& area) {
    const std::size_t per_axis = exact_root(count);
    const double spacing = area.side_m / static_cast<double>(per_axis);
    std::vector<Point> points;
    points.reserve(count);
    for (std::size_t i = 0; i < per_axis; ++i) {
        for (std::size_t j = 0; j < per_axis; ++j) {
            points.emplace_back((static_cast<double>(i) + 0.5) * spacing,
                                (static_cast<double>(j) + 0.5) * spacing);
        }
    }
    return points;
}

DevicePlacement place_devices(DistributionMode mode, const std::vector<std::size_t>& group_sizes,
                              const Area& area, std::size_t cells, Rng& rng) {
    DevicePlacement out;
    const auto draw = [&](double lo, double width) {
        double v = lo + width * uniform01(rng);
        // uniform01 may return values that round up to the upper edge
        return std::min(v, std::nextafter(lo + width, lo));
    };

    if (mode == DistributionMode::Mode1) {
        if (group_sizes.size() > cells) {
            throw TooManyGroups(std::to_string(group_sizes.size()) + " groups but only " +
                                std::to_string(cells) + " cells");
        }
        const std::size_t per_axis = exact_root(cells);
        const double width = area.side_m / static_cast<double>(per_axis);
        for (std::size_t g = 0; g < group_sizes.size(); ++g) {
            const double x0 = static_cast<double>(g / per_axis) * width;
            const double y0 = static_cast<double>(g % per_axis) * width;
            for (std::size_t n = 0; n < group_sizes[g]; ++n) {
                const double x = draw(x0, width);
                const double y = draw(y0, width);
                out.positions.emplace_back(x, y);
                out.group_of_device.push_back(g);
            }
        }
    } else {
        for (std::size_t g = 0; g < group_sizes.size(); ++g) {
            for (std::size_t n = 0; n < group_sizes[g]; ++n) {
                const double x = draw(0.0, area.side_m);
                const double y = draw(0.0, area.side_m);
                out.positions.emplace_back(x, y);
                out.group_of_device.push_back(g);
            }
        }
    }
    return out;
}

Point wrap_offset(const Point& a, const Point& b, const Area& area) {
    Point best = b - a;
    double best_norm = std::numeric_limits<double>::infinity();
    for (int sx = -1; sx <= 1; ++sx) {
        for (int sy = -1; sy <= 1; ++sy) {
            const Point d = b + Point(sx * area.side_m, sy * area.side_m) - a;
            const double n = d.squaredNorm();
            if (n < best_norm) {
                best_norm = n;
                best = d;
            }
        }
    }
    return best;
}

double wrap_distance(const Point& a, const Point& b, const Area& area) {
    return wrap_offset(a, b, area).norm();
}

}  // namespace cfota
