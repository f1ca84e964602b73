#pragma once

// Exhaustive reference for best_route: depth-first enumeration of every
// simple path from `start`, ranked by (cost, cell count, id sequence) with the
// cost summed in path order exactly as the search does.

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "icecast/grid.hpp"
#include "icecast/risk.hpp"
#include "icecast/route.hpp"

namespace icecast::test {

struct EnumeratedBest {
    std::vector<PointId> cells;
    double cost = 0.0;
    double survival = 1.0;
};

// Best simple path from `start` to every reachable goal.
inline std::map<PointId, EnumeratedBest> enumerate_best_paths(const GridModel& grid, const RiskField& field,
                                                              PointId start) {
    std::map<PointId, EnumeratedBest> best;
    std::vector<PointId> path{start};
    std::map<PointId, bool> on_path{{start, true}};

    auto consider = [&](double cost) {
        const PointId goal = path.back();
        double survival = 1.0;
        for (PointId id : path) survival *= 1.0 - field.probability(id);
        const auto it = best.find(goal);
        const auto rank = [](double c, const std::vector<PointId>& p) { return std::make_tuple(c, p.size(), p); };
        if (it == best.end() || rank(cost, path) < rank(it->second.cost, it->second.cells)) {
            best[goal] = {path, cost, survival};
        }
    };

    auto dfs = [&](auto&& self, double cost) -> void {
        consider(cost);
        for (PointId v : grid.neighbors(path.back())) {
            if (on_path[v]) continue;
            on_path[v] = true;
            path.push_back(v);
            self(self, cost + node_weight(field.probability(v)));
            path.pop_back();
            on_path[v] = false;
        }
    };
    dfs(dfs, node_weight(field.probability(start)));
    return best;
}

}  // namespace icecast::test
