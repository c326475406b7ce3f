#include "radopf/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace radopf {

namespace {

struct Multipliers {
    double load(const std::string& key) const {
        if (profiles == nullptr) return uniform_load;
        return profiles->at(key, static_cast<size_t>(hour));
    }
    double pv(const std::string& key) const {
        if (profiles == nullptr) return uniform_pv;
        return profiles->at(key, static_cast<size_t>(hour));
    }
    const ProfileSet* profiles = nullptr;
    long hour = 0;
    double uniform_load = 1.0;
    double uniform_pv = 1.0;
};

std::vector<PvStation> effective_pv(const Feeder& feeder, const ScenarioOptions& options) {
    if (!options.pv_auto) return feeder.pv;
    // Stations at every bus with load; capacity proportional to the bus peak
    // so the fleet totals pv_total_ratio times the feeder peak load.
    std::vector<PvStation> stations;
    for (const Bus& b : feeder.buses) {
        if (b.p_load <= 0) continue;
        PvStation s;
        s.bus = b.index;
        s.peak_capacity = options.pv_total_ratio * b.p_load;
        s.nameplate = options.pv_nameplate_ratio * s.peak_capacity;
        s.key = options.pv_auto_key;
        stations.push_back(std::move(s));
    }
    return stations;
}

Scenario assemble(const Feeder& feeder, const Multipliers& mult, const ScenarioOptions& options) {
    Scenario scenario;
    scenario.hour = mult.hour;
    scenario.regions.resize(static_cast<size_t>(feeder.bus_count()));
    const auto stations = effective_pv(feeder, options);
    for (const Bus& b : feeder.buses) {
        WithdrawalRegion& region = scenario.regions[static_cast<size_t>(b.index) - 1];
        const std::string& lk = b.load_key.empty() ? options.default_load_key : b.load_key;
        double lm = (b.p_load != 0.0 || b.q_load != 0.0) ? mult.load(lk) : 0.0;
        region.p_load = b.p_load * lm;
        region.q_load = b.q_load * lm;
    }
    for (const PvStation& s : stations) {
        WithdrawalRegion& region = scenario.regions[static_cast<size_t>(s.bus) - 1];
        region.has_pv = true;
        const std::string& pk = s.key.empty() ? options.pv_auto_key : s.key;
        region.pv_avail = s.peak_capacity * mult.pv(pk);
        region.pv_nameplate = s.nameplate;
    }
    for (const CapacitorBank& c : feeder.capacitors) {
        WithdrawalRegion& region = scenario.regions[static_cast<size_t>(c.bus) - 1];
        region.has_cap = true;
        region.cap_q_nominal = c.q_cap;
        switch (options.cap_mode) {
            case CapacitorMode::FromFile: region.cap_variable = c.variable; break;
            case CapacitorMode::AllFixed: region.cap_variable = false; break;
            case CapacitorMode::AllVariable: region.cap_variable = true; break;
        }
    }
    return scenario;
}

}  // namespace

Scenario build_scenario(const Feeder& feeder, const ProfileSet& profiles, long hour,
                        const ScenarioOptions& options) {
    if (hour < 0 || static_cast<size_t>(hour) >= profiles.hours())
        throw std::out_of_range("hour " + std::to_string(hour) + " outside profile range [0, " +
                                std::to_string(profiles.hours()) + ")");
    Multipliers mult;
    mult.profiles = &profiles;
    mult.hour = hour;
    return assemble(feeder, mult, options);
}

Scenario build_scenario_uniform(const Feeder& feeder, double load_mult, double pv_mult,
                                const ScenarioOptions& options) {
    Multipliers mult;
    mult.uniform_load = load_mult;
    mult.uniform_pv = pv_mult;
    return assemble(feeder, mult, options);
}

}  // namespace radopf
