#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace icecast {

using PointId = std::uint32_t;

struct GridPoint {
    PointId id = 0;
    int gx = 0;
    int gy = 0;
    double cell_area_km2 = 25.0;

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

// Observation mesh.  Two points are adjacent iff their integer grid
// coordinates differ by exactly one step along one axis.  Immutable once
// constructed.
class GridModel {
public:
    GridModel() = default;
    // Throws InvalidArgument on duplicate ids, duplicate coordinates or a
    // non-positive cell area.
    explicit GridModel(std::vector<GridPoint> points);

    const std::vector<GridPoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool contains(PointId id) const noexcept { return by_id_.count(id) != 0; }

    // Throws NotFound.
    const GridPoint& point(PointId id) const;

    // Ascending ids of the 4-neighbours of `id`.  Throws NotFound.
    std::vector<PointId> neighbors(PointId id) const;
    bool adjacent(PointId a, PointId b) const;

    // Unordered adjacent pairs (a < b), ascending.
    std::vector<std::pair<PointId, PointId>> adjacent_pairs() const;

private:
    std::vector<GridPoint> points_;  // sorted by id
    std::map<PointId, std::size_t> by_id_;
    std::map<std::pair<int, int>, PointId> by_coord_;
};

// The four observation points along the route: (50,80) (135,85) (173,95)
// (193,132), ids 1..4, 25 km^2 cells.
GridModel paper_fixture_grid();

// width x height mesh, ids assigned row-major from 1 (id = gy*width + gx + 1).
GridModel make_mesh(int width, int height);

// `#grid v1` text: one `id,gx,gy,area_km2` line per point.
std::string serialize_grid(const GridModel& grid);
GridModel parse_grid(std::string_view text);

}  // namespace icecast
