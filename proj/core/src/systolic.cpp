#include "tasim/systolic.hpp"

#include "tasim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tasim::systolic {

namespace {

void require_cfg(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::int64_t fold_cycles(std::int64_t r, std::int64_t c, std::int64_t k) {
    return (r - 1) + (c - 1) + k + r;
}

void check_os(const SystolicConfig& cfg) {
    if (cfg.dataflow != Dataflow::OutputStationary)
        throw std::invalid_argument("only the output-stationary dataflow is implemented");
}

} // namespace

std::string SystolicConfig::shape_label() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

void SystolicConfig::validate() const {
    require_cfg(rows >= 1, "systolic.rows must be positive");
    require_cfg(cols >= 1, "systolic.cols must be positive");
    require_cfg(clock_hz > 0, "systolic.clock_hz must be positive");
    require_cfg(sram_bytes > 0, "systolic.sram_bytes must be positive");
    require_cfg(core_power_w > 0, "systolic.core_power_w must be positive");
}

std::int64_t analytic_cycles(const MMJob& job, const SystolicConfig& cfg) {
    check_os(cfg);
    if (job.m < 1 || job.k < 1 || job.n < 1)
        throw std::invalid_argument("matrix product dimensions must be positive");

    const std::int64_t row_blocks = ceil_div(job.m, cfg.rows);
    const std::int64_t col_blocks = ceil_div(job.n, cfg.cols);
    std::int64_t total = 0;
    for (std::int64_t bi = 0; bi < row_blocks; ++bi) {
        const std::int64_t r = std::min<std::int64_t>(cfg.rows, job.m - bi * cfg.rows);
        for (std::int64_t bj = 0; bj < col_blocks; ++bj) {
            const std::int64_t c = std::min<std::int64_t>(cfg.cols, job.n - bj * cfg.cols);
            total += fold_cycles(r, c, job.k);
        }
    }
    return total;
}

double utilization(const MMJob& job, const SystolicConfig& cfg) {
    const double cycles = static_cast<double>(analytic_cycles(job, cfg));
    const double macs = static_cast<double>(job.m) * static_cast<double>(job.k) * static_cast<double>(job.n);
    return macs / (static_cast<double>(cfg.pe_count()) * cycles);
}

std::int64_t elementwise_cycles(std::uint64_t ops, const SystolicConfig& cfg) {
    return ceil_div(static_cast<std::int64_t>(ops), cfg.pe_count());
}

double energy_joules(const MMJob& job, const SystolicConfig& cfg) {
    if (cfg.energy_model == EnergyModel::PerMac) {
        const double macs = static_cast<double>(job.m) * static_cast<double>(job.k) * static_cast<double>(job.n);
        return macs * cfg.pe_energy_per_mac_j;
    }
    return cfg.core_power_w * (static_cast<double>(analytic_cycles(job, cfg)) / cfg.clock_hz);
}

EventSimResult event_sim(const Matrix& a, const Matrix& b, const SystolicConfig& cfg) {
    check_os(cfg);
    if (a.cols != b.rows) throw std::invalid_argument("operand inner dimensions disagree");
    if (a.rows > cfg.rows || b.cols > cfg.cols)
        throw std::invalid_argument("single-fold event_sim needs A.rows <= array rows and B.cols <= array cols");
    if (a.rows < 1 || a.cols < 1 || b.cols < 1)
        throw std::invalid_argument("matrix product dimensions must be positive");

    const std::int64_t r = a.rows, c = b.cols, K = a.cols;
    const auto idx = [c](std::int64_t i, std::int64_t j) { return static_cast<std::size_t>(i * c + j); };

    std::vector<double> a_reg(idx(r - 1, c - 1) + 1, 0.0), b_reg(a_reg.size(), 0.0);
    std::vector<char> a_ok(a_reg.size(), 0), b_ok(a_reg.size(), 0);
    Matrix acc(r, c);

    std::int64_t last_mac_cycle = -1;
    for (std::int64_t t = 0;; ++t) {
        std::vector<double> a_next(a_reg.size(), 0.0), b_next(b_reg.size(), 0.0);
        std::vector<char> a_next_ok(a_reg.size(), 0), b_next_ok(b_reg.size(), 0);
        bool any_valid = false;

        for (std::int64_t i = 0; i < r; ++i) {
            for (std::int64_t j = 0; j < c; ++j) {
                double av = 0.0, bv = 0.0;
                bool avok = false, bvok = false;
                if (j == 0) {
                    const std::int64_t k = t - i; // row skew
                    if (k >= 0 && k < K) { av = a.at(i, k); avok = true; }
                } else if (a_ok[idx(i, j - 1)]) {
                    av = a_reg[idx(i, j - 1)];
                    avok = true;
                }
                if (i == 0) {
                    const std::int64_t k = t - j; // column skew
                    if (k >= 0 && k < K) { bv = b.at(k, j); bvok = true; }
                } else if (b_ok[idx(i - 1, j)]) {
                    bv = b_reg[idx(i - 1, j)];
                    bvok = true;
                }
                if (avok && bvok) {
                    acc.at(i, j) += av * bv;
                    last_mac_cycle = t;
                }
                if (avok) { a_next[idx(i, j)] = av; a_next_ok[idx(i, j)] = 1; any_valid = true; }
                if (bvok) { b_next[idx(i, j)] = bv; b_next_ok[idx(i, j)] = 1; any_valid = true; }
            }
        }
        a_reg.swap(a_next); b_reg.swap(b_next);
        a_ok.swap(a_next_ok); b_ok.swap(b_next_ok);
        if (!any_valid && t >= K) break; // pipeline drained of operands
    }

    EventSimResult res;
    // compute phase: cycles 0 .. last_mac_cycle, then r drain cycles in which
    // the accumulated rows shift out one front per cycle
    res.cycles = (last_mac_cycle + 1) + r;
    res.product = std::move(acc);
    return res;
}

EventSimResult event_sim_tiled(const Matrix& a, const Matrix& b, const SystolicConfig& cfg) {
    check_os(cfg);
    if (a.cols != b.rows) throw std::invalid_argument("operand inner dimensions disagree");

    const std::int64_t row_blocks = ceil_div(a.rows, cfg.rows);
    const std::int64_t col_blocks = ceil_div(b.cols, cfg.cols);

    EventSimResult total;
    total.product = Matrix(a.rows, b.cols);
    for (std::int64_t bi = 0; bi < row_blocks; ++bi) {
        const std::int64_t r0 = bi * cfg.rows;
        const std::int64_t r = std::min<std::int64_t>(cfg.rows, a.rows - r0);
        Matrix a_sub(r, a.cols);
        for (std::int64_t i = 0; i < r; ++i)
            for (std::int64_t k = 0; k < a.cols; ++k) a_sub.at(i, k) = a.at(r0 + i, k);
        for (std::int64_t bj = 0; bj < col_blocks; ++bj) {
            const std::int64_t c0 = bj * cfg.cols;
            const std::int64_t c = std::min<std::int64_t>(cfg.cols, b.cols - c0);
            Matrix b_sub(b.rows, c);
            for (std::int64_t k = 0; k < b.rows; ++k)
                for (std::int64_t j = 0; j < c; ++j) b_sub.at(k, j) = b.at(k, c0 + j);

            EventSimResult fold = event_sim(a_sub, b_sub, cfg);
            total.cycles += fold.cycles;
            for (std::int64_t i = 0; i < r; ++i)
                for (std::int64_t j = 0; j < c; ++j)
                    total.product.at(r0 + i, c0 + j) = fold.product.at(i, j);
        }
    }
    return total;
}

std::vector<MMJob> systolic_jobs(const workload::KernelInstance& kernel) {
    std::vector<MMJob> jobs;
    if (kernel.cls != workload::KernelClass::DynamicMM) return jobs;
    jobs.reserve(kernel.products.size());
    for (const auto& p : kernel.products) jobs.push_back({p.m, p.k, p.n});
    return jobs;
}

std::vector<SweepEntry> shape_sweep(const std::vector<workload::KernelInstance>& s2_kernels,
                                    const std::vector<SystolicConfig>& candidates,
                                    double reram_stage_delay_s) {
    if (reram_stage_delay_s <= 0) throw std::invalid_argument("reram stage delay must be positive");
    if (!candidates.empty()) {
        const double clock = candidates.front().clock_hz;
        for (const auto& c : candidates)
            if (c.clock_hz != clock) throw std::invalid_argument("sweep candidates must share a clock");
    }

    std::vector<SweepEntry> entries;
    entries.reserve(candidates.size());
    for (const auto& cand : candidates) {
        cand.validate();
        SweepEntry e;
        e.config = cand;
        double util_sum = 0.0;
        std::int64_t util_jobs = 0;
        for (const auto& kern : s2_kernels) {
            double delay = 0.0;
            if (kern.cls == workload::KernelClass::DynamicMM) {
                for (const auto& job : systolic_jobs(kern)) {
                    delay += static_cast<double>(analytic_cycles(job, cand)) / cand.clock_hz;
                    util_sum += utilization(job, cand);
                    ++util_jobs;
                }
            } else {
                delay = static_cast<double>(elementwise_cycles(kern.macs, cand)) / cand.clock_hz;
            }
            e.kernels.push_back({kern.label(), delay, delay / reram_stage_delay_s});
            e.cumulative_delay_s += delay;
        }
        e.cumulative_normalized_delay = e.cumulative_delay_s / reram_stage_delay_s;
        e.feasible = e.cumulative_normalized_delay <= 1.0;
        e.mean_utilization = util_jobs > 0 ? util_sum / static_cast<double>(util_jobs) : 0.0;
        entries.push_back(std::move(e));
    }

    std::sort(entries.begin(), entries.end(), [](const SweepEntry& a, const SweepEntry& b) {
        if (a.feasible != b.feasible) return a.feasible;
        if (a.feasible) {
            if (a.mean_utilization != b.mean_utilization) return a.mean_utilization > b.mean_utilization;
            if (a.cumulative_delay_s != b.cumulative_delay_s) return a.cumulative_delay_s < b.cumulative_delay_s;
        } else if (a.cumulative_delay_s != b.cumulative_delay_s) {
            return a.cumulative_delay_s < b.cumulative_delay_s;
        }
        if (a.config.pe_count() != b.config.pe_count()) return a.config.pe_count() < b.config.pe_count();
        return a.config.rows < b.config.rows;
    });
    return entries;
}

} // namespace tasim::systolic
