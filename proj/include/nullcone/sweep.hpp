#pragma once
// Grid sweeps over chart points.  Every kernel has a serial loop and an OpenMP
// loop; rows land at their grid index, so output order never depends on threads.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nullcone/embedding.hpp"
#include "nullcone/errors.hpp"
#include "nullcone/intrinsic.hpp"
#include "nullcone/scalefactor.hpp"

namespace nullcone::sweep {

using embedding::ChartPoint;
using scalefactor::ScaleExpr;

enum class Exec { serial, parallel };

/// start:stop:count, inclusive; count = 1 means just start.
struct GridSpec {
    double start = 0.0, stop = 0.0;
    int count = 1;
    static GridSpec parse(const std::string& text);  // ConfigError on bad syntax
    std::vector<double> values() const;
};

/// A grid point failed; index is its position in the grid (lowest failing one).
struct GridFailure : DomainError {
    GridFailure(std::size_t i, const std::string& msg)
        : DomainError("grid point " + std::to_string(i) + ": " + msg), index(i) {}
    std::size_t index;
};

/// fn(i) for i < count.  Domain errors and step failures become GridFailure for the
/// lowest failing index; anything else is rethrown as is.
void run_indexed(std::size_t count, const std::function<void(std::size_t)>& fn, Exec exec);

/// Product grid, t slowest; angle grids must number n - 2.
std::vector<ChartPoint> chart_grid(int k, const GridSpec& t, const GridSpec& chi,
                                   const std::vector<GridSpec>& angles);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// coords, y^0..y^{n+1}, c(y), f(y)
Table embed_table(int k, const ScaleExpr& a, const std::vector<ChartPoint>& pts, Exec exec);
/// coords, g_{mu nu} (mu <= nu), |g - closed form| / max(1, |g|)
Table metric_table(int k, const ScaleExpr& a, const std::vector<ChartPoint>& pts, Exec exec);
/// coords, R, eigenvalues of R^mu_nu (sorted), relative Riemann gap to the chart oracle
Table curvature_table(int k, const ScaleExpr& a, const std::vector<ChartPoint>& pts, Exec exec,
                      const intrinsic::FdOptions& opt = {});

struct PropagatorColumns {
    bool potential = true;   // all 16 <a a'> entries
    bool field = true;       // all 36 <F F'> entries
    enum class FieldRoute { closed, ambient, dd } route = FieldRoute::ambient;
};

/// Pairs (x, ref) with x over pts, n = 4: coords, ydot, scalar, then the selected bitensors.
Table propagator_table(int k, const ScaleExpr& a, const std::vector<ChartPoint>& pts, const ChartPoint& ref,
                       const PropagatorColumns& cols, Exec exec);

}  // namespace nullcone::sweep
