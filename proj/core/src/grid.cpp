#include "icecast/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "icecast/error.hpp"
#include "icecast/numfmt.hpp"
#include "text_lines.hpp"

namespace icecast {

GridModel::GridModel(std::vector<GridPoint> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end(),
              [](const GridPoint& a, const GridPoint& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const GridPoint& p = points_[i];
        if (!(p.cell_area_km2 > 0.0) || !std::isfinite(p.cell_area_km2))
            throw Error(ErrorKind::InvalidArgument,
                        "point " + std::to_string(p.id) + " has non-positive cell area");
        if (!by_id_.emplace(p.id, i).second)
            throw Error(ErrorKind::InvalidArgument, "duplicate point id " + std::to_string(p.id));
        if (!by_coord_.emplace(std::pair{p.gx, p.gy}, p.id).second)
            throw Error(ErrorKind::InvalidArgument,
                        "duplicate coordinates (" + std::to_string(p.gx) + "," +
                            std::to_string(p.gy) + ")");
    }
}

const GridPoint& GridModel::point(PointId id) const {
    const auto it = by_id_.find(id);
    if (it == by_id_.end()) throw Error(ErrorKind::NotFound, "unknown point id " + std::to_string(id));
    return points_[it->second];
}

std::vector<PointId> GridModel::neighbors(PointId id) const {
    const GridPoint& p = point(id);
    static constexpr std::array<std::pair<int, int>, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    std::vector<PointId> out;
    for (const auto& [dx, dy] : kSteps) {
        const auto it = by_coord_.find({p.gx + dx, p.gy + dy});
        if (it != by_coord_.end()) out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool GridModel::adjacent(PointId a, PointId b) const {
    if (!contains(a) || !contains(b)) return false;
    const GridPoint& pa = point(a);
    const GridPoint& pb = point(b);
    return std::abs(pa.gx - pb.gx) + std::abs(pa.gy - pb.gy) == 1;
}

std::vector<std::pair<PointId, PointId>> GridModel::adjacent_pairs() const {
    std::vector<std::pair<PointId, PointId>> out;
    for (const GridPoint& p : points_)
        for (PointId n : neighbors(p.id))
            if (p.id < n) out.emplace_back(p.id, n);
    std::sort(out.begin(), out.end());
    return out;
}

GridModel paper_fixture_grid() {
    return GridModel({{1, 50, 80, 25.0}, {2, 135, 85, 25.0}, {3, 173, 95, 25.0}, {4, 193, 132, 25.0}});
}

GridModel make_mesh(int width, int height) {
    if (width < 1 || height < 1)
        throw Error(ErrorKind::InvalidArgument, "mesh dimensions must be positive");
    std::vector<GridPoint> pts;
    pts.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (int gy = 0; gy < height; ++gy)
        for (int gx = 0; gx < width; ++gx)
            pts.push_back({static_cast<PointId>(gy * width + gx + 1), gx, gy, 25.0});
    return GridModel(std::move(pts));
}

std::string serialize_grid(const GridModel& grid) {
    std::string out = "#grid v1\n";
    for (const GridPoint& p : grid.points()) {
        out += std::to_string(p.id) + ',' + std::to_string(p.gx) + ',' + std::to_string(p.gy) + ',' +
               format_exact(p.cell_area_km2) + '\n';
    }
    return out;
}

GridModel parse_grid(std::string_view text) {
    std::vector<GridPoint> pts;
    bool saw_header = false;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (line.empty()) return;
        if (line.front() == '#') {
            if (line.rfind("#grid", 0) == 0) {
                if (line != "#grid v1")
                    throw Error(ErrorKind::Parse, "unsupported grid header '" + std::string(line) + "'", lineno);
                saw_header = true;
            }
            return;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 4)
            throw Error(ErrorKind::Parse, "expected id,gx,gy,area_km2", lineno);
        try {
            const long long id = parse_integer(fields[0]);
            if (id < 0 || id > 0xFFFFFFFFLL) throw Error(ErrorKind::Parse, "point id out of range");
            pts.push_back({static_cast<PointId>(id), static_cast<int>(parse_integer(fields[1])),
                           static_cast<int>(parse_integer(fields[2])), parse_double(fields[3])});
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, e.message(), lineno);
        }
    });
    if (!saw_header) throw Error(ErrorKind::Parse, "missing '#grid v1' header");
    return GridModel(std::move(pts));
}

}  // namespace icecast
