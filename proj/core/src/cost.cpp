#include "tasim/cost.hpp"

#include "tasim/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tasim::cost {

void CostParams::validate() const {
    if (wafer_cost <= 0) throw ConfigError("cost.wafer_cost must be positive");
    if (wafer_diameter_mm <= 0) throw ConfigError("cost.wafer_diameter_mm must be positive");
    if (defect_density_per_cm2 < 0) throw ConfigError("cost.defect_density_per_cm2 must be non-negative");
    if (clustering_alpha <= 0) throw ConfigError("cost.clustering_alpha must be positive");
    if (wafer_yield <= 0 || wafer_yield > 1) throw ConfigError("cost.wafer_yield must be in (0, 1]");
    if (stacking_yield <= 0 || stacking_yield > 1) throw ConfigError("cost.stacking_yield must be in (0, 1]");
    if (tsv_yield <= 0 || tsv_yield > 1) throw ConfigError("cost.tsv_yield must be in (0, 1]");
}

double dies_per_wafer(double die_area_mm2, const CostParams& p) {
    p.validate();
    if (die_area_mm2 <= 0) throw std::invalid_argument("die area must be positive");
    const double phi = p.wafer_diameter_mm;
    const double gross = std::numbers::pi * (phi / 2.0) * (phi / 2.0) / die_area_mm2;
    const double edge = p.edge_term == EdgeTermVariant::Literal
                            ? std::numbers::pi * phi / (std::sqrt(2.0) * die_area_mm2)
                            : std::numbers::pi * phi / std::sqrt(2.0 * die_area_mm2);
    const double n = gross - edge;
    if (n <= 0) throw std::invalid_argument("die area too large for the wafer");
    return n;
}

double die_yield(double die_area_mm2, const CostParams& p) {
    p.validate();
    if (die_area_mm2 <= 0) throw std::invalid_argument("die area must be positive");
    const double area_cm2 = die_area_mm2 / 100.0;
    return p.wafer_yield *
           std::pow(1.0 + area_cm2 * p.defect_density_per_cm2 / p.clustering_alpha, -p.clustering_alpha);
}

double die_cost(double die_area_mm2, const CostParams& p) {
    return (p.wafer_cost / dies_per_wafer(die_area_mm2, p)) / die_yield(die_area_mm2, p);
}

double stack_cost_3d(const std::vector<double>& tier_areas_mm2, const CostParams& p) {
    if (tier_areas_mm2.empty()) throw std::invalid_argument("a stack needs at least one tier");
    double sum = 0.0;
    for (double a : tier_areas_mm2) sum += die_cost(a, p);
    const double bond_yield = std::pow(p.stacking_yield, static_cast<double>(tier_areas_mm2.size()) - 1.0);
    return sum / (bond_yield * p.tsv_yield);
}

double normalized_cost(double area_a_mm2, double area_b_mm2, const CostParams& p) {
    return (die_yield(area_b_mm2, p) * dies_per_wafer(area_b_mm2, p)) /
           (die_yield(area_a_mm2, p) * dies_per_wafer(area_a_mm2, p));
}

} // namespace tasim::cost
