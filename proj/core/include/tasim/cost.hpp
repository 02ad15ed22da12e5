#pragma once

#include <cstdint>
#include <vector>

namespace tasim::cost {

// Which second-order wafer edge-loss term to use: the literal form divides by
// sqrt(2) * area, the textbook form by sqrt(2 * area).
enum class EdgeTermVariant { Literal, Textbook };

struct CostParams {
    double wafer_cost = 1.0;            // normalized
    double wafer_diameter_mm = 300.0;
    double defect_density_per_cm2 = 0.2;
    double clustering_alpha = 3.0;      // negative-binomial yield parameter
    double wafer_yield = 1.0;
    double stacking_yield = 0.99;       // per bonded interface
    double tsv_yield = 0.99;
    EdgeTermVariant edge_term = EdgeTermVariant::Literal;

    void validate() const;
};

// Gross dies per wafer: pi*(phi/2)^2/A minus the edge-loss term.
double dies_per_wafer(double die_area_mm2, const CostParams& p);

// Negative-binomial yield: Y_wafer * (1 + A_cm2 * D0 / alpha)^(-alpha).
double die_yield(double die_area_mm2, const CostParams& p);

// Cost of one good die: (wafer_cost / dies_per_wafer) / yield.
double die_cost(double die_area_mm2, const CostParams& p);

// Stacked cost: sum of per-tier die costs divided by
// stacking_yield^(tiers-1) * tsv_yield.
double stack_cost_3d(const std::vector<double>& tier_areas_mm2, const CostParams& p);

// Relative cost of design A versus baseline B from the same wafer:
// (yield_B * dies_B) / (yield_A * dies_A).
double normalized_cost(double area_a_mm2, double area_b_mm2, const CostParams& p);

struct DieSpec {
    double core_area_mm2 = 0.0;
    double router_area_mm2 = 0.0;
    int tsv_count = 0;
    double tsv_pitch_mm = 0.015;

    double area_mm2() const {
        return core_area_mm2 + router_area_mm2 + tsv_count * tsv_pitch_mm * tsv_pitch_mm;
    }
};

} // namespace tasim::cost
