#pragma once

#include "cfota/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace cfota {

using Point = Eigen::Vector2d;

/// Square simulation area [0, side)^2 with wrap-around (toroidal) distances.
struct Area {
    double side_m = 500.0;

    explicit Area(double side = 500.0);
    bool contains(const Point& p) const;
};

enum class DistributionMode {
    Mode1,  // group g uniform inside cell g
    Mode2,  // every device uniform over the whole area
};

struct NetworkGeometry {
    std::vector<Point> ap_positions;
    std::vector<Point> bs_positions;
    std::vector<Point> device_positions;
    std::vector<std::size_t> group_of_device;
    std::size_t cells = 4;
};

struct DevicePlacement {
    std::vector<Point> positions;
    std::vector<std::size_t> group_of_device;
};

/// sqrt(count) x sqrt(count) cell-centered grid: coordinate (i + 0.5) * side / sqrt(count).
/// Throws NotPerfectSquare.
std::vector<Point> place_aps_grid(std::size_t count, const Area& area);

/// Devices for each group (group sizes in order). In Mode1, `cells` must be a perfect
/// square and at least the number of groups; group g lives in cell g of the cell grid
/// (row-major over the same layout place_aps_grid uses). Throws TooManyGroups.
DevicePlacement place_devices(DistributionMode mode, const std::vector<std::size_t>& group_sizes,
                              const Area& area, std::size_t cells, Rng& rng);

/// Displacement from a to the nearest periodic image of b.
Point wrap_offset(const Point& a, const Point& b, const Area& area);

/// Minimum Euclidean distance over the 9 translated copies of b.
double wrap_distance(const Point& a, const Point& b, const Area& area);

}  // namespace cfota
