#pragma once

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace radopf {

using Complex = std::complex<double>;

/// Error raised by the feeder/profile readers; carries file and line context.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, int line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(std::move(file)), line_(line) {}
    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

/// Line l connects bus up(l) to bus l. Electrical quantities are per-unit
/// on the feeder bases; b_shunt is the half shunt susceptance of the pi model.
struct Line {
    int index = 0;
    int upstream = 0;
    Complex z{0.0, 0.0};
    double b_shunt = 0.0;
    std::optional<double> i_max_sq;  // squared current bound, p.u.^2
    std::optional<double> s_max;     // apparent-flow bound, p.u.
};

/// Non-root bus. Voltage bounds are stored squared (p.u.^2); the default
/// load is the peak withdrawal, already multiplied by load_scale.
struct Bus {
    int index = 0;
    std::string zone;
    double v_min_sq = 0.81;
    double v_max_sq = 1.21;
    double p_load = 0.0;
    double q_load = 0.0;
    double load_scale = 1.0;
    std::string load_key;
};

struct CapacitorBank {
    int bus = 0;
    double q_cap = 0.0;  // nominal reactive injection, p.u.
    bool variable = false;
};

struct PvStation {
    int bus = 0;
    double peak_capacity = 0.0;  // peak active capability, p.u.
    double nameplate = 0.0;      // apparent-power capacity, p.u.
    std::string key;
};

/// Radial feeder. Bus 0 is the root (fixed squared voltage v0) and carries
/// no Bus record; buses and lines are indexed 1..n with line l ending at bus l.
struct Feeder {
    double v0 = 1.0;  // squared root voltage, p.u.^2
    double base_mva = 1.0;
    std::map<std::string, double> base_kv;  // phase-to-phase kV per zone
    std::vector<Bus> buses;                 // bus l at buses[l-1]
    std::vector<Line> lines;                // line l at lines[l-1]
    std::vector<CapacitorBank> capacitors;
    std::vector<PvStation> pv;

    int bus_count() const { return static_cast<int>(buses.size()); }
    const Bus& bus(int l) const { return buses.at(static_cast<size_t>(l) - 1); }
    const Line& line(int l) const { return lines.at(static_cast<size_t>(l) - 1); }
    int upstream(int l) const { return line(l).upstream; }

    /// Children adjacency: children()[l] lists m with up(m) == l, l in 0..n.
    std::vector<std::vector<int>> children() const;

    /// Sum of default active loads (p.u.); profiles scale loads below this.
    double peak_active_load() const;

    const CapacitorBank* capacitor_at(int bus) const;
    const PvStation* pv_at(int bus) const;

    /// Structural and parameter validation; throws std::invalid_argument.
    void validate() const;
};

/// Feeder with electrical quantities in physical units (ohms, siemens, MW,
/// MVAr, kV). Used for unit round-trip checks and external data exchange.
struct PhysicalFeeder {
    double root_voltage_kv = 0.0;
    double base_mva = 1.0;
    std::map<std::string, double> base_kv;
    std::vector<Bus> buses;   // loads in MW / MVAr, voltage bounds in kV
    std::vector<Line> lines;  // z in ohm, b_shunt in siemens, s_max in MVA
    std::vector<CapacitorBank> capacitors;  // q_cap in MVAr
    std::vector<PvStation> pv;              // capacities in MW / MVA
};

PhysicalFeeder to_physical_units(const Feeder& feeder);
Feeder from_physical_units(const PhysicalFeeder& physical);

/// Reads and validates a feeder file (see docs/feeder-format.md).
Feeder load_feeder(const std::string& path);
void save_feeder(const Feeder& feeder, const std::string& path);

/// downstream_sets(feeder)[l-1] lists the buses of the subtree rooted at
/// line l's end bus (l itself included), ascending. One post-order pass.
std::vector<std::vector<int>> downstream_sets(const Feeder& feeder);

/// Hourly multiplier series keyed by profile name; all series equal length.
struct ProfileSet {
    std::map<std::string, std::vector<double>> series;

    size_t hours() const;
    bool has(const std::string& key) const { return series.count(key) > 0; }
    double at(const std::string& key, size_t hour) const;
};

/// Reads a profile CSV with header `hour,key,multiplier`; hours are 0-based
/// and must be contiguous per key; multipliers must lie in [0, 1].
ProfileSet load_profiles(const std::string& path);
void save_profiles(const ProfileSet& profiles, const std::string& path);

/// Synthetic year profile (8760 hours): load in [0.15, 1], pv in [0, 1],
/// deterministic in the seed.
ProfileSet synthetic_year_profiles(unsigned seed = 1u,
                                   const std::string& load_key = "load",
                                   const std::string& pv_key = "pv");

}  // namespace radopf
