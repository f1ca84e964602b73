#pragma once

#include <string>
#include <vector>

#include "icecast/grid.hpp"
#include "icecast/risk.hpp"

namespace icecast {

struct Route {
    std::vector<PointId> cells;
    double survival = 1.0;      // prod (1 - p_i) over every cell, endpoints included
    double total_hazard = 0.0;  // 1 - survival
};

// Scores an explicit path.  Throws NotFound for cells missing from the grid or
// field and Path for empty, non-adjacent or repeating sequences.
Route route_risk(const GridModel& grid, const std::vector<PointId>& cells, const RiskField& field);

// -ln(1 - p), with p capped at 1 - 1e-12 so certain-hazard cells stay finite.
double node_weight(double p);

// Sum of node weights along `cells`, start node included, in path order.
double path_cost(const std::vector<PointId>& cells, const RiskField& field);

// Maximum-survival simple path from start to goal: Dijkstra over node
// weights (each edge costs its destination's weight; the start's weight is
// paid once).  Ties on cost go to fewer cells, then to the lexicographically
// smallest id sequence.  Throws NotFound / Unreachable.
Route best_route(const GridModel& grid, const RiskField& field, PointId start, PointId goal);

// `cells=<id,id,...>; survival=<v>; hazard=<v>` with 9 significant digits.
std::string format_route(const Route& route);

}  // namespace icecast
