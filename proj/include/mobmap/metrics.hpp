#pragma once

#include "mobmap/bdg.hpp"
#include "mobmap/rng.hpp"
#include "mobmap/tree.hpp"

#include <vector>

namespace mobmap {

// D°(x,y) = Z(x) + Z(y) - 2 max(min over [x,y], min over the complement arc).
double d_circ(const PathFunction& Z, double x, double y);

struct SnakeSample {
    PathFunction e;  // excursion
    PathFunction Z;  // labels on the same grid
};

// Discrete Brownian snake: cycle-lemma excursion of a +-1 walk scaled by
// N^{-1/2}, labels built from independent Gaussian edge increments along the
// excursion's branch structure (variance = excursion step), so that
// Cov(Z(s),Z(t)) is exactly the running minimum of e at grid resolution.
// N must be even.
SnakeSample brownian_snake_sample(int N, Rng& rng);

// Grid-restricted maximal pseudo-metric below D°: contract pairs with
// D° <= zero_tol, then all-pairs shortest paths on the complete graph with
// D° edge weights.
std::vector<std::vector<double>> d_star_grid(const PathFunction& Z,
                                             const std::vector<double>& grid_points,
                                             double zero_tol);

// Contour-time pseudo-metrics of a mobile and its map. Both take contour
// indices whose vertices must have type 1; delta_circ is the label formula
// (with its +2), delta is the graph distance in the map.
struct MobileGeodesics {
    TypedTree mobile;
    std::vector<std::int32_t> theta;          // contour
    std::vector<std::int64_t> lab2;           // doubled labels per vertex
    std::vector<std::int32_t> type1_indices;  // contour indices with type-1 vertex
    HalfEdgeMap map;
    std::vector<std::int32_t> map_vertex_of;  // mobile vertex -> map vertex
    std::vector<std::vector<std::int32_t>> map_dist;  // all-pairs BFS

    static MobileGeodesics build(const TypedTree& mobile, MapSign sign);
    // doubled result halved: exact integers for integer-labeled mobiles
    long long delta_circ2(int i, int j) const;  // doubled value of delta°
    int delta(int i, int j) const;

    // O(1) contour range-min (sparse table, built on demand by bulk checks)
    void build_rmq();
    long long range_min2(int a, int b) const;  // min doubled label over theta[a..b]
    std::vector<std::vector<std::int64_t>> rmq_;
};

// (b / n^{1/4}) * delta and delta° interpolated to a uniform grid of
// `grid` points per axis.
struct RescaledMatrices {
    std::vector<std::vector<double>> D;       // from map distances
    std::vector<std::vector<double>> Dcirc;   // from labels
};
RescaledMatrices rescaled_map_distance_matrix(const MobileGeodesics& g, double scale, int n, int grid);

struct FiniteMetricMeasureSpace {
    std::vector<std::vector<double>> dist;  // symmetric, zero diagonal
    std::vector<double> weights;            // probabilities, sum 1

    int size() const { return int(weights.size()); }
    void check_valid() const;  // triangle inequality etc.
};

// Exact Gromov-Hausdorff distance: half the minimal distortion over all
// correspondences (feasibility search over the finite candidate set of
// distortion values). Caps at 7 points per side.
double gh_distance_exact(const FiniteMetricMeasureSpace& X, const FiniteMetricMeasureSpace& Y);

// Exact Gromov-Hausdorff-Prokhorov distance via the correspondence-coupling
// characterization: min over correspondences R of
// max(dis(R)/2, 1 - max coupling mass on R), the coupling part solved as a
// transportation problem. Caps at 7 points per side.
double ghp_distance_exact(const FiniteMetricMeasureSpace& X, const FiniteMetricMeasureSpace& Y);

}  // namespace mobmap
