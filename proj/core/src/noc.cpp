#include "tasim/noc.hpp"

#include "tasim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace tasim::noc {

const char* topology_name(TopologyKind k) {
    switch (k) {
        case TopologyKind::Mesh3D: return "mesh3d";
        case TopologyKind::Mesh3DSkip: return "mesh3d-skip";
        case TopologyKind::Atleus: return "atleus";
    }
    return "?";
}

TopologyKind topology_from_name(const std::string& name) {
    if (name == "mesh3d") return TopologyKind::Mesh3D;
    if (name == "mesh3d-skip") return TopologyKind::Mesh3DSkip;
    if (name == "atleus") return TopologyKind::Atleus;
    throw ConfigError("noc.topology must be one of mesh3d, mesh3d-skip, atleus");
}

int Topology::node_id(int tier, int x, int y) const {
    return tier * params.grid * params.grid + y * params.grid + x;
}

const std::vector<int>& Topology::adjacent(int node) const { return adjacency[static_cast<std::size_t>(node)]; }

int Topology::other_end(int link, int node) const {
    const Link& l = links[static_cast<std::size_t>(link)];
    return l.a == node ? l.b : l.a;
}

std::vector<std::pair<int, int>> Topology::sfc_cells(int grid) {
    std::vector<std::pair<int, int>> cells;
    cells.reserve(static_cast<std::size_t>(grid) * grid);
    for (int y = 0; y < grid; ++y) {
        if (y % 2 == 0)
            for (int x = 0; x < grid; ++x) cells.emplace_back(x, y);
        else
            for (int x = grid - 1; x >= 0; --x) cells.emplace_back(x, y);
    }
    return cells;
}

namespace {

bool is_sfc_tier(const Topology& topo, int tier) {
    return topo.kind == TopologyKind::Atleus && tier >= 1;
}

} // namespace

Topology build_topology(TopologyKind kind, const NocParams& params) {
    if (params.grid < 2) throw ConfigError("noc.grid must be at least 2");
    if (params.tiers != 4) throw ConfigError("noc.tiers must be 4 (one systolic, three ReRAM)");

    Topology topo;
    topo.kind = kind;
    topo.params = params;
    const int g = params.grid;

    for (int tier = 0; tier < params.tiers; ++tier)
        for (int y = 0; y < g; ++y)
            for (int x = 0; x < g; ++x) {
                Node n;
                n.tier = tier;
                n.x = x;
                n.y = y;
                n.id = topo.node_id(tier, x, y);
                n.kind = tier == 0 ? NodeKind::Systolic : NodeKind::Reram;
                topo.nodes.push_back(n);
            }

    auto add_link = [&](int a, int b, LinkKind lk) {
        Link l;
        l.a = a;
        l.b = b;
        l.kind = lk;
        l.width_bits = params.link_width_bits;
        switch (lk) {
            case LinkKind::Planar: l.energy_per_bit_j = params.planar_energy_per_bit_j; break;
            case LinkKind::TsvVertical: l.energy_per_bit_j = params.tsv_energy_per_bit_j; break;
            case LinkKind::TsvSkip:
                l.energy_per_bit_j = params.tsv_energy_per_bit_j * params.skip_energy_span;
                break;
        }
        topo.links.push_back(l);
    };

    for (int tier = 0; tier < params.tiers; ++tier) {
        if (is_sfc_tier(topo, tier)) {
            const auto cells = Topology::sfc_cells(g);
            for (std::size_t i = 0; i + 1 < cells.size(); ++i)
                add_link(topo.node_id(tier, cells[i].first, cells[i].second),
                         topo.node_id(tier, cells[i + 1].first, cells[i + 1].second), LinkKind::Planar);
        } else {
            for (int y = 0; y < g; ++y)
                for (int x = 0; x < g; ++x) {
                    if (x + 1 < g) add_link(topo.node_id(tier, x, y), topo.node_id(tier, x + 1, y), LinkKind::Planar);
                    if (y + 1 < g) add_link(topo.node_id(tier, x, y), topo.node_id(tier, x, y + 1), LinkKind::Planar);
                }
        }
    }
    for (int tier = 0; tier + 1 < params.tiers; ++tier)
        for (int y = 0; y < g; ++y)
            for (int x = 0; x < g; ++x)
                add_link(topo.node_id(tier, x, y), topo.node_id(tier + 1, x, y), LinkKind::TsvVertical);
    if (kind != TopologyKind::Mesh3D)
        for (int y = 0; y < g; ++y)
            for (int x = 0; x < g; ++x)
                add_link(topo.node_id(0, x, y), topo.node_id(params.tiers - 1, x, y), LinkKind::TsvSkip);

    topo.adjacency.assign(topo.nodes.size(), {});
    for (std::size_t li = 0; li < topo.links.size(); ++li) {
        topo.adjacency[static_cast<std::size_t>(topo.links[li].a)].push_back(static_cast<int>(li));
        topo.adjacency[static_cast<std::size_t>(topo.links[li].b)].push_back(static_cast<int>(li));
    }
    return topo;
}

namespace {

std::vector<int> node_ports(const Topology& topo) {
    std::vector<int> degree(topo.nodes.size(), 0);
    for (const auto& l : topo.links) {
        if (l.kind == LinkKind::TsvSkip) {
            // network-interface termination on the systolic tier
            const int reram_end = topo.nodes[static_cast<std::size_t>(l.a)].tier == 0 ? l.b : l.a;
            degree[static_cast<std::size_t>(reram_end)] += 1;
        } else {
            degree[static_cast<std::size_t>(l.a)] += 1;
            degree[static_cast<std::size_t>(l.b)] += 1;
        }
    }
    for (auto& d : degree) d += 1; // local port
    return degree;
}

int find_link(const Topology& topo, int a, int b, LinkKind kind) {
    for (int li : topo.adjacent(a)) {
        const Link& l = topo.links[static_cast<std::size_t>(li)];
        if (l.kind == kind && ((l.a == a && l.b == b) || (l.a == b && l.b == a))) return li;
    }
    return -1;
}

void push_link(std::vector<int>& path, int li) {
    if (li < 0) throw std::logic_error("route stepped onto a missing link");
    path.push_back(li);
}

void append_vertical(const Topology& topo, std::vector<int>& path, int x, int y, int t_from, int t_to) {
    const int step = t_to > t_from ? 1 : -1;
    for (int t = t_from; t != t_to; t += step)
        push_link(path, find_link(topo, topo.node_id(t, x, y), topo.node_id(t + step, x, y), LinkKind::TsvVertical));
}

void append_in_tier(const Topology& topo, std::vector<int>& path, int tier, int x0, int y0, int x1, int y1) {
    if (is_sfc_tier(topo, tier)) {
        const auto cells = Topology::sfc_cells(topo.params.grid);
        auto pos = [&](int x, int y) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (cells[i].first == x && cells[i].second == y) return static_cast<int>(i);
            return -1;
        };
        int p = pos(x0, y0);
        const int q = pos(x1, y1);
        const int step = q > p ? 1 : -1;
        while (p != q) {
            push_link(path, find_link(topo, topo.node_id(tier, cells[static_cast<std::size_t>(p)].first, cells[static_cast<std::size_t>(p)].second),
                                      topo.node_id(tier, cells[static_cast<std::size_t>(p + step)].first, cells[static_cast<std::size_t>(p + step)].second),
                                      LinkKind::Planar));
            p += step;
        }
    } else {
        int x = x0, y = y0;
        while (x != x1) {
            const int step = x1 > x ? 1 : -1;
            push_link(path, find_link(topo, topo.node_id(tier, x, y), topo.node_id(tier, x + step, y), LinkKind::Planar));
            x += step;
        }
        while (y != y1) {
            const int step = y1 > y ? 1 : -1;
            push_link(path, find_link(topo, topo.node_id(tier, x, y), topo.node_id(tier, x, y + step), LinkKind::Planar));
            y += step;
        }
    }
}

} // namespace

std::map<int, int> port_histogram(const Topology& topo) {
    std::map<int, int> hist;
    for (int p : node_ports(topo)) hist[p] += 1;
    return hist;
}

int max_ports(const Topology& topo) {
    const auto ports = node_ports(topo);
    return *std::max_element(ports.begin(), ports.end());
}

std::vector<int> route(const Topology& topo, int src, int dst) {
    if (src < 0 || dst < 0 || src >= static_cast<int>(topo.nodes.size()) || dst >= static_cast<int>(topo.nodes.size()))
        throw std::invalid_argument("route endpoints out of range");
    if (src == dst) return {};
    const Node& s = topo.nodes[static_cast<std::size_t>(src)];
    const Node& d = topo.nodes[static_cast<std::size_t>(dst)];

    std::vector<int> base;
    append_vertical(topo, base, s.x, s.y, s.tier, d.tier);
    append_in_tier(topo, base, d.tier, s.x, s.y, d.x, d.y);

    const int top = topo.params.tiers - 1;
    std::vector<int> cand;
    if (s.tier == top && d.tier == 0) {
        const int skip = find_link(topo, topo.node_id(top, d.x, d.y), dst, LinkKind::TsvSkip);
        if (skip >= 0) {
            append_in_tier(topo, cand, top, s.x, s.y, d.x, d.y);
            cand.push_back(skip);
        }
    } else if (s.tier == 0 && d.tier == top) {
        const int skip = find_link(topo, src, topo.node_id(top, s.x, s.y), LinkKind::TsvSkip);
        if (skip >= 0) {
            cand.push_back(skip);
            append_in_tier(topo, cand, top, s.x, s.y, d.x, d.y);
        }
    }
    if (!cand.empty() && cand.size() < base.size()) return cand;
    return base;
}

std::uint64_t TrafficTrace::total_bytes() const {
    std::uint64_t total = 0;
    for (const auto& f : flows) total += f.bytes;
    return total;
}

Placement default_placement(const Topology& topo, int num_layers) {
    if (num_layers < 1) throw ConfigError("workload.num_layers must be positive");
    Placement p;
    const auto cells = Topology::sfc_cells(topo.params.grid);
    p.layer_cell.reserve(static_cast<std::size_t>(num_layers));
    for (int l = 0; l < num_layers; ++l) p.layer_cell.push_back(cells[static_cast<std::size_t>(l) % cells.size()]);
    p.dram_ingress = topo.node_id(0, 0, 0);
    return p;
}

TrafficTrace gen_traffic(const workload::TransformerConfig& cfg, const Topology& topo,
                         const Placement& placement) {
    cfg.validate();
    if (placement.layer_cell.size() < static_cast<std::size_t>(cfg.num_layers))
        throw ConfigError("placement must cover every layer");

    using mapping::StageId;
    const std::uint64_t act_bytes = static_cast<std::uint64_t>(cfg.precision.activation_bits) / 8;
    const std::uint64_t n = cfg.n, d = cfg.d_model, dff = cfg.ff_dim();
    const std::uint64_t lora_bytes = mapping::lora_parameter_bytes(cfg);

    TrafficTrace trace;
    auto node = [&](StageId st, int layer) {
        const auto [x, y] = placement.layer_cell[static_cast<std::size_t>(layer)];
        return topo.node_id(placement.stage_tier[static_cast<int>(st)], x, y);
    };
    for (int l = 0; l < cfg.num_layers; ++l) {
        const std::string tag = "L" + std::to_string(l);
        trace.flows.push_back({node(StageId::S1, l), node(StageId::S2, l), 3 * n * d * act_bytes,
                               StageId::S2, tag + ":S1->S2"});
        trace.flows.push_back({node(StageId::S2, l), node(StageId::S3, l), n * d * act_bytes,
                               StageId::S3, tag + ":S2->S3"});
        trace.flows.push_back({node(StageId::S3, l), node(StageId::S4, l), n * dff * act_bytes,
                               StageId::S4, tag + ":S3->S4"});
        if (l + 1 < cfg.num_layers)
            trace.flows.push_back({node(StageId::S4, l), node(StageId::S1, l + 1), n * d * act_bytes,
                                   StageId::S1, tag + ":S4->S1"});
        if (lora_bytes > 0)
            trace.flows.push_back({placement.dram_ingress, node(StageId::S2, l), lora_bytes,
                                   StageId::S2, tag + ":DRAM->S2"});
    }
    return trace;
}

NocEval evaluate_noc(const Topology& topo, const TrafficTrace& traffic) {
    const NocParams& p = topo.params;
    const auto ports = node_ports(topo);
    const double bit_time = 1.0 / (static_cast<double>(p.link_width_bits) * p.clock_hz);

    NocEval ev;
    using mapping::StageId;
    for (StageId st : {StageId::S1, StageId::S2, StageId::S3, StageId::S4})
        ev.per_stage_comm_delay_s[st] = 0.0;

    std::map<mapping::StageId, std::map<int, double>> link_busy; // stage -> link -> seconds

    for (const auto& flow : traffic.flows) {
        const auto path = route(topo, flow.src, flow.dst);
        const double bits = static_cast<double>(flow.bytes) * 8.0;
        const double serialization = bits * bit_time;

        double hop_cycles = 0.0;
        double link_energy_per_bit = 0.0;
        for (int li : path) {
            const Link& l = topo.links[static_cast<std::size_t>(li)];
            hop_cycles += p.router_latency_cycles + l.latency_cycles;
            link_energy_per_bit += l.energy_per_bit_j;
            link_busy[flow.stage][li] += serialization;
        }
        const double flow_delay = hop_cycles / p.clock_hz + serialization;
        ev.per_stage_comm_delay_s[flow.stage] = std::max(ev.per_stage_comm_delay_s[flow.stage], flow_delay);

        // router traversals: every node on the path except tier-0 skip
        // endpoints, which inject/eject through the core's interface
        double router_energy_per_bit = 0.0;
        if (!path.empty()) {
            int at = flow.src;
            const Link& first = topo.links[static_cast<std::size_t>(path.front())];
            if (!(first.kind == LinkKind::TsvSkip && topo.nodes[static_cast<std::size_t>(at)].tier == 0))
                router_energy_per_bit += ports[static_cast<std::size_t>(at)] * p.router_energy_per_bit_per_port_j;
            for (int li : path) {
                at = topo.other_end(li, at);
                const Link& l = topo.links[static_cast<std::size_t>(li)];
                if (l.kind == LinkKind::TsvSkip && topo.nodes[static_cast<std::size_t>(at)].tier == 0)
                    continue;
                router_energy_per_bit += ports[static_cast<std::size_t>(at)] * p.router_energy_per_bit_per_port_j;
            }
        }
        ev.total_energy_j += bits * (link_energy_per_bit + router_energy_per_bit);
    }

    for (auto& [stage, links] : link_busy)
        for (const auto& [li, busy] : links)
            ev.per_stage_comm_delay_s[stage] = std::max(ev.per_stage_comm_delay_s[stage], busy);

    for (const auto& [stage, delay] : ev.per_stage_comm_delay_s) ev.total_comm_delay_s += delay;
    ev.edp_js = ev.total_energy_j * ev.total_comm_delay_s;

    for (int pt : ports) ev.router_area_mm2 += p.router_area_mm2_per_port2 * pt * pt;
    for (const auto& l : topo.links) {
        if (l.kind == LinkKind::TsvVertical) ev.tsv_area_mm2 += p.tsv_pitch_mm * p.tsv_pitch_mm;
        if (l.kind == LinkKind::TsvSkip)
            ev.tsv_area_mm2 += (p.tsv_pitch_mm * p.skip_diameter_factor) * (p.tsv_pitch_mm * p.skip_diameter_factor);
    }
    ev.area_mm2 = ev.router_area_mm2 + ev.tsv_area_mm2;
    return ev;
}

} // namespace tasim::noc
