#pragma once

#include <string>
#include <vector>

#include "radopf/network.hpp"

namespace radopf {

/// Admissible complex-power withdrawal region of one bus for one hour.
/// The withdrawal is s = (p_load - pv_p) + j (q_load - pv_q - cap_q) with
/// 0 <= pv_p <= pv_avail, |pv_p + j pv_q| <= pv_nameplate, and cap_q either
/// fixed at cap_q_nominal or ranging over [0, cap_q_nominal].
struct WithdrawalRegion {
    double p_load = 0.0;
    double q_load = 0.0;
    bool has_pv = false;
    double pv_avail = 0.0;
    double pv_nameplate = 0.0;
    bool has_cap = false;
    double cap_q_nominal = 0.0;
    bool cap_variable = false;

    /// Componentwise lower corner of the region (it is bounded below).
    double p_min() const { return p_load - (has_pv ? pv_avail : 0.0); }
    double q_min() const {
        double q = q_load;
        if (has_pv) q -= pv_nameplate;
        if (has_cap) q -= cap_q_nominal;
        return q;
    }
    bool degenerate() const { return !has_pv && !(has_cap && cap_variable); }
};

/// One hour's withdrawal regions, bus 1..n at regions[l-1].
struct Scenario {
    long hour = 0;
    std::vector<WithdrawalRegion> regions;

    const WithdrawalRegion& region(int bus) const {
        return regions.at(static_cast<size_t>(bus) - 1);
    }
};

enum class CapacitorMode { FromFile, AllFixed, AllVariable };

struct ScenarioOptions {
    CapacitorMode cap_mode = CapacitorMode::FromFile;
    /// When true, ignore the feeder's pv section and install stations at
    /// every bus with load, sized by the ratios below.
    bool pv_auto = false;
    double pv_total_ratio = 2.5;      // total capacity / feeder peak load
    double pv_nameplate_ratio = 1.1;  // nameplate / station peak capacity
    std::string pv_auto_key = "pv";
    /// Fallback profile key for buses without an explicit load_key.
    std::string default_load_key = "load";
};

/// Assembles one hour's regions from feeder data and profile multipliers.
/// Throws std::out_of_range for a bad hour and std::invalid_argument for
/// profile keys missing from the set.
Scenario build_scenario(const Feeder& feeder, const ProfileSet& profiles,
                        long hour, const ScenarioOptions& options = {});

/// Profile-free variant with uniform multipliers; used by single solves.
Scenario build_scenario_uniform(const Feeder& feeder, double load_mult,
                                double pv_mult,
                                const ScenarioOptions& options = {});

}  // namespace radopf
