#include "icecast/route.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "icecast/error.hpp"
#include "icecast/numfmt.hpp"

namespace icecast {

double node_weight(double p) { return -std::log1p(-std::min(p, 1.0 - 1e-12)); }

double path_cost(const std::vector<PointId>& cells, const RiskField& field) {
    double cost = 0.0;
    for (PointId id : cells) cost += node_weight(field.probability(id));
    return cost;
}

Route route_risk(const GridModel& grid, const std::vector<PointId>& cells, const RiskField& field) {
    if (cells.empty()) throw Error(ErrorKind::Path, "route has no cells");
    std::unordered_set<PointId> seen;
    Route route;
    route.cells = cells;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        grid.point(cells[i]);
        if (!seen.insert(cells[i]).second)
            throw Error(ErrorKind::Path, "route visits point " + std::to_string(cells[i]) + " twice");
        if (i > 0 && !grid.adjacent(cells[i - 1], cells[i]))
            throw Error(ErrorKind::Path, "points " + std::to_string(cells[i - 1]) + " and " +
                                             std::to_string(cells[i]) + " are not adjacent");
        route.survival *= 1.0 - field.probability(cells[i]);
    }
    route.total_hazard = 1.0 - route.survival;
    return route;
}

Route best_route(const GridModel& grid, const RiskField& field, PointId start, PointId goal) {
    grid.point(start);
    grid.point(goal);

    struct Label {
        double cost = std::numeric_limits<double>::infinity();
        std::size_t cells = 0;
        PointId pred = 0;
        bool has_pred = false;
        bool settled = false;
    };
    std::unordered_map<PointId, Label> labels;

    auto path_to = [&](PointId id) {
        std::vector<PointId> path{id};
        for (const Label* l = &labels.at(id); l->has_pred; l = &labels.at(l->pred)) path.push_back(l->pred);
        std::reverse(path.begin(), path.end());
        return path;
    };

    using Key = std::tuple<double, std::size_t, PointId>;
    std::set<Key> frontier;
    labels[start] = {node_weight(field.probability(start)), 1, 0, false, false};
    frontier.emplace(labels[start].cost, 1, start);

    while (!frontier.empty()) {
        const auto [cost, ncells, u] = *frontier.begin();
        frontier.erase(frontier.begin());
        Label& lu = labels[u];
        lu.settled = true;
        if (u == goal) break;

        for (PointId v : grid.neighbors(u)) {
            const double cand_cost = cost + node_weight(field.probability(v));
            const std::size_t cand_cells = ncells + 1;
            auto [it, fresh] = labels.try_emplace(v);
            Label& lv = it->second;
            if (lv.settled) continue;

            bool better = fresh || cand_cost < lv.cost || (cand_cost == lv.cost && cand_cells < lv.cells);
            if (!better && cand_cost == lv.cost && cand_cells == lv.cells && lv.has_pred && lv.pred != u)
                better = path_to(u) < path_to(lv.pred);
            if (!better) continue;

            if (!fresh) frontier.erase({lv.cost, lv.cells, v});
            lv = {cand_cost, cand_cells, u, true, false};
            frontier.emplace(cand_cost, cand_cells, v);
        }
    }

    const auto it = labels.find(goal);
    if (it == labels.end() || !it->second.settled)
        throw Error(ErrorKind::Unreachable,
                    "no path from " + std::to_string(start) + " to " + std::to_string(goal));
    return route_risk(grid, path_to(goal), field);
}

std::string format_route(const Route& route) {
    std::string out = "cells=";
    for (std::size_t i = 0; i < route.cells.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(route.cells[i]);
    }
    out += "; survival=" + format_sig9(route.survival) + "; hazard=" + format_sig9(route.total_hazard);
    return out;
}

}  // namespace icecast
