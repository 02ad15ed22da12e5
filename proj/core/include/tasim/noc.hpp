#pragma once

#include "tasim/mapping.hpp"
#include "tasim/workload.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tasim::noc {

// Mesh3D:     4x4 planar mesh on every tier, 16 vertical TSV links per
//             adjacent tier pair (48 total).
// Mesh3DSkip: Mesh3D plus 16 skip TSV links pairing tier 0 and tier 3
//             node for node.
// Atleus:     skip TSVs as above, planar mesh kept on the systolic tier only;
//             the ReRAM tiers flatten to a serpentine space-filling curve of
//             15 links each, matching their streaming stage-to-stage traffic.
enum class TopologyKind { Mesh3D, Mesh3DSkip, Atleus };

const char* topology_name(TopologyKind k);
TopologyKind topology_from_name(const std::string& name);

enum class LinkKind { Planar, TsvVertical, TsvSkip };
enum class NodeKind { Reram, Systolic };

struct Node {
    int id = 0;
    int tier = 0; // 0 = systolic (bottom), 1..3 = ReRAM
    int x = 0, y = 0;
    NodeKind kind = NodeKind::Reram;
};

struct Link {
    int a = 0, b = 0;
    LinkKind kind = LinkKind::Planar;
    int width_bits = 128;
    int latency_cycles = 0; // traversal beyond the per-hop router latency
    double energy_per_bit_j = 0.0;
};

struct NocParams {
    int grid = 4;  // nodes per tier edge
    int tiers = 4;
    int router_latency_cycles = 2;
    double clock_hz = 1e9;
    int link_width_bits = 128;
    double planar_energy_per_bit_j = 1.0e-13;
    double tsv_energy_per_bit_j = 1.85e-14;    // 0.5 * 37 fF * (1.0 V)^2
    double skip_energy_span = 3.0;             // skip TSV crosses three tier gaps
    double router_energy_per_bit_per_port_j = 5.0e-14;
    double router_area_mm2_per_port2 = 6.3e-5; // crossbar switch scaling
    double tsv_pitch_mm = 0.015;               // 3 x 5 um diameter
    double skip_diameter_factor = 3.0;         // pad area scales by factor^2
};

struct Topology {
    TopologyKind kind;
    NocParams params;
    std::vector<Node> nodes;
    std::vector<Link> links;

    int node_id(int tier, int x, int y) const;
    const std::vector<int>& adjacent(int node) const; // link indices
    int other_end(int link, int node) const;
    // serpentine order of (x, y) cells; consecutive cells are grid-adjacent
    static std::vector<std::pair<int, int>> sfc_cells(int grid);

    std::vector<std::vector<int>> adjacency; // built by build_topology
};

Topology build_topology(TopologyKind kind, const NocParams& params = {});

// Router ports = link degree + 1 local port. Skip TSVs terminate at the
// systolic core's network interface on tier 0 (the core is the sole
// sink/source of skip traffic), so they add a router port on tier 3 only.
std::map<int, int> port_histogram(const Topology& topo);
int max_ports(const Topology& topo);

// Deterministic path as a list of link indices. Discipline: vertical first at
// the source column, then in-tier (XY on mesh tiers, along the curve on SFC
// tiers). A skip link is taken when it strictly reduces the hop count and the
// path starts or ends at the skip's tier-0 node.
std::vector<int> route(const Topology& topo, int src, int dst);

struct Flow {
    int src = 0, dst = 0;
    std::uint64_t bytes = 0;
    mapping::StageId stage = mapping::StageId::S1; // consuming stage
    std::string label;
};

struct TrafficTrace {
    std::vector<Flow> flows;
    std::uint64_t total_bytes() const;
};

struct Placement {
    // layers map to vertical pillars in serpentine order; stages stack
    // S2->tier0, S3->tier1, S4->tier2, S1->tier3 within a pillar
    std::array<int, 4> stage_tier = {3, 0, 1, 2}; // indexed by StageId
    std::vector<std::pair<int, int>> layer_cell;  // (x, y) per layer
    int dram_ingress = 0;                         // node id on tier 0
};

Placement default_placement(const Topology& topo, int num_layers);

// Per-iteration activation flows between consecutive stages plus the adapter
// fetch from DRAM. Independent of topology; bytes conserved across designs.
TrafficTrace gen_traffic(const workload::TransformerConfig& cfg, const Topology& topo,
                         const Placement& placement);

struct NocEval {
    std::map<mapping::StageId, double> per_stage_comm_delay_s;
    double total_energy_j = 0.0;
    double total_comm_delay_s = 0.0; // sum over stages
    double edp_js = 0.0;             // total energy * total comm delay
    double router_area_mm2 = 0.0;
    double tsv_area_mm2 = 0.0;
    double area_mm2 = 0.0;
};

// Per-flow delay = hops * router_latency / clock + bytes * 8 / (width * clock);
// flows of the same stage sharing a link serialize on it. Energy adds per-link
// transfer energy and a per-router traversal term proportional to port count.
NocEval evaluate_noc(const Topology& topo, const TrafficTrace& traffic);

} // namespace tasim::noc
