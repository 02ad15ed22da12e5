#pragma once

#include "tasim/reram.hpp"
#include "tasim/systolic.hpp"

namespace tasim {

struct DramConfig {
    double bandwidth_bytes_per_s = 256e9;
    double efficiency = 0.8; // achievable fraction of peak
    double capacity_bytes_per_tier = 2.0 * (1ull << 30);
    int interface_bits = 1024;
    double clock_hz = 600e6;

    void validate() const;
};

// One stacked accelerator: three ReRAM tiers of 16 cores above one systolic
// tier of 16 cores, off-chip DRAM on an interposer.
struct HardwareSpec {
    reram::ReramTileConfig reram;
    int reram_cores = 48;
    systolic::SystolicConfig systolic;
    int systolic_cores = 16;
    DramConfig dram;
    double pipeline_slack = 1.0; // stage-2 job delay budget, in slowest-ReRAM-stage units

    void validate() const; // enforces the 3:1 ReRAM-to-systolic core ratio
};

} // namespace tasim
