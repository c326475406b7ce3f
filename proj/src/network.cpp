#include "radopf/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "radopf/io_util.hpp"

namespace radopf {

namespace {

std::string strip_comment(const std::string& raw) {
    auto pos = raw.find('#');
    std::string s = (pos == std::string::npos) ? raw : raw.substr(0, pos);
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

struct Cursor {
    std::string file;
    int line = 0;
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file, line, msg); }
};

double to_double(const Cursor& cur, const std::string& tok, const char* field) {
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        cur.fail(std::string("expected a number for '") + field + "', got '" + tok + "'");
    }
    if (used != tok.size()) cur.fail(std::string("trailing characters in '") + field + "': '" + tok + "'");
    return v;
}

int to_int(const Cursor& cur, const std::string& tok, const char* field) {
    size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(tok, &used);
    } catch (const std::exception&) {
        cur.fail(std::string("expected an integer for '") + field + "', got '" + tok + "'");
    }
    if (used != tok.size()) cur.fail(std::string("trailing characters in '") + field + "': '" + tok + "'");
    return v;
}

}  // namespace

std::vector<std::vector<int>> Feeder::children() const {
    std::vector<std::vector<int>> kids(buses.size() + 1);
    for (const Line& ln : lines) kids.at(static_cast<size_t>(ln.upstream)).push_back(ln.index);
    return kids;
}

double Feeder::peak_active_load() const {
    double total = 0.0;
    for (const Bus& b : buses) total += b.p_load;
    return total;
}

const CapacitorBank* Feeder::capacitor_at(int bus) const {
    for (const CapacitorBank& c : capacitors)
        if (c.bus == bus) return &c;
    return nullptr;
}

const PvStation* Feeder::pv_at(int bus) const {
    for (const PvStation& s : pv)
        if (s.bus == bus) return &s;
    return nullptr;
}

void Feeder::validate() const {
    const int n = bus_count();
    auto bad = [](const std::string& msg) { throw std::invalid_argument("feeder: " + msg); };
    if (n == 0) bad("no buses");
    if (static_cast<int>(lines.size()) != n) bad("need exactly one line per non-root bus");
    if (v0 <= 0) bad("root squared voltage must be positive");
    if (base_mva <= 0) bad("power base must be positive");
    for (int l = 1; l <= n; ++l) {
        if (buses[l - 1].index != l) bad("bus ids must be contiguous 1..n");
        if (lines[l - 1].index != l) bad("line ids must be contiguous 1..n");
    }
    for (const Bus& b : buses) {
        if (!(b.v_min_sq > 0)) bad("bus " + std::to_string(b.index) + ": lower voltage bound must be positive");
        if (!(b.v_min_sq < b.v_max_sq)) bad("bus " + std::to_string(b.index) + ": voltage bounds must satisfy min < max");
        if (!base_kv.empty() && base_kv.find(b.zone) == base_kv.end())
            bad("bus " + std::to_string(b.index) + ": missing voltage base for zone '" + b.zone + "'");
    }
    for (const Line& ln : lines) {
        if (ln.upstream < 0 || ln.upstream > n) bad("line " + std::to_string(ln.index) + ": upstream bus out of range");
        if (ln.upstream == ln.index) bad("line " + std::to_string(ln.index) + ": connects bus to itself");
        if (std::abs(ln.z) <= 0) bad("line " + std::to_string(ln.index) + ": impedance magnitude must be positive");
        if (ln.z.real() < 0) bad("line " + std::to_string(ln.index) + ": negative resistance");
        if (ln.b_shunt < 0) bad("line " + std::to_string(ln.index) + ": negative shunt susceptance");
        if (ln.i_max_sq && *ln.i_max_sq <= 0) bad("line " + std::to_string(ln.index) + ": current bound must be positive");
        if (ln.s_max && *ln.s_max <= 0) bad("line " + std::to_string(ln.index) + ": apparent-flow bound must be positive");
    }
    for (const CapacitorBank& c : capacitors) {
        if (c.bus < 1 || c.bus > n) bad("capacitor at unknown bus " + std::to_string(c.bus));
        if (c.q_cap < 0) bad("capacitor at bus " + std::to_string(c.bus) + ": negative rating");
    }
    for (const PvStation& s : pv) {
        if (s.bus < 1 || s.bus > n) bad("pv at unknown bus " + std::to_string(s.bus));
        if (s.peak_capacity < 0 || s.nameplate < 0) bad("pv at bus " + std::to_string(s.bus) + ": negative rating");
    }
    // Radiality: the upstream map must reach every bus from the root.
    auto kids = children();
    std::deque<int> queue(kids[0].begin(), kids[0].end());
    std::vector<char> seen(static_cast<size_t>(n) + 1, 0);
    int reached = 0;
    while (!queue.empty()) {
        int l = queue.front();
        queue.pop_front();
        if (seen[static_cast<size_t>(l)]) bad("bus " + std::to_string(l) + " reached twice; network is not a tree");
        seen[static_cast<size_t>(l)] = 1;
        ++reached;
        for (int m : kids[static_cast<size_t>(l)]) queue.push_back(m);
    }
    if (reached != n) bad("network is not a tree rooted at bus 0 (" + std::to_string(n - reached) + " buses unreachable)");
}

std::vector<std::vector<int>> downstream_sets(const Feeder& feeder) {
    const int n = feeder.bus_count();
    auto kids = feeder.children();
    std::vector<std::vector<int>> down(static_cast<size_t>(n));
    // Post-order over the tree: children first, then merge into the parent.
    std::vector<int> stack;
    std::vector<int> order;
    order.reserve(static_cast<size_t>(n));
    for (int r : kids[0]) stack.push_back(r);
    while (!stack.empty()) {
        int l = stack.back();
        stack.pop_back();
        order.push_back(l);
        for (int m : kids[static_cast<size_t>(l)]) stack.push_back(m);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int l = *it;
        auto& set = down[static_cast<size_t>(l) - 1];
        set.push_back(l);
        for (int m : kids[static_cast<size_t>(l)]) {
            const auto& sub = down[static_cast<size_t>(m) - 1];
            set.insert(set.end(), sub.begin(), sub.end());
        }
        std::sort(set.begin(), set.end());
    }
    return down;
}

namespace {

enum class Section { None, Bases, Buses, Lines, Capacitors, Pv };

struct RawPv {
    bool auto_mode = false;
    double ratio = 2.5;
    double nameplate_ratio = 1.1;
    std::vector<PvStation> stations;
};

}  // namespace

Feeder load_feeder(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");

    Feeder feeder;
    feeder.base_mva = 0.0;  // must be declared
    bool saw_format = false;
    bool saw_root_v = false;
    Section section = Section::None;
    std::string bus_units = "pu", line_units = "pu", cap_units = "pu", pv_units = "pu";
    std::set<int> line_ids_seen;
    RawPv rawpv;
    Cursor cur{path, 0};

    std::string raw;
    while (std::getline(in, raw)) {
        ++cur.line;
        std::string s = strip_comment(raw);
        if (s.empty()) continue;
        if (!saw_format) {
            auto toks = tokenize(s);
            if (toks.size() != 2 || toks[0] != "format" || toks[1] != "feeder-v1")
                cur.fail("first directive must be 'format feeder-v1'");
            saw_format = true;
            continue;
        }
        if (s.front() == '[') {
            if (s == "[bases]") section = Section::Bases;
            else if (s == "[buses]") section = Section::Buses;
            else if (s == "[lines]") section = Section::Lines;
            else if (s == "[capacitors]") section = Section::Capacitors;
            else if (s == "[pv]") section = Section::Pv;
            else cur.fail("unknown section " + s);
            continue;
        }
        auto toks = tokenize(s);
        switch (section) {
            case Section::None:
                cur.fail("data before any section header");
            case Section::Bases: {
                if (toks[0] == "power_mva" && toks.size() == 2) {
                    feeder.base_mva = to_double(cur, toks[1], "power_mva");
                } else if (toks[0] == "voltage_kv" && toks.size() == 3) {
                    feeder.base_kv[toks[1]] = to_double(cur, toks[2], "voltage_kv");
                } else if (toks[0] == "root_voltage_pu" && toks.size() == 2) {
                    double mag = to_double(cur, toks[1], "root_voltage_pu");
                    if (mag <= 0) cur.fail("root voltage must be positive");
                    feeder.v0 = mag * mag;
                    saw_root_v = true;
                } else {
                    cur.fail("unknown [bases] entry '" + toks[0] + "'");
                }
                break;
            }
            case Section::Buses: {
                if (toks[0] == "units") {
                    if (toks.size() != 2 || (toks[1] != "pu" && toks[1] != "kw"))
                        cur.fail("bus units must be 'pu' or 'kw'");
                    bus_units = toks[1];
                    break;
                }
                if (toks.size() < 6) cur.fail("bus row needs: id zone vmin vmax pload qload");
                Bus b;
                b.index = to_int(cur, toks[0], "bus id");
                b.zone = toks[1];
                double vmin = to_double(cur, toks[2], "vmin");
                double vmax = to_double(cur, toks[3], "vmax");
                b.v_min_sq = vmin * vmin;
                b.v_max_sq = vmax * vmax;
                b.p_load = to_double(cur, toks[4], "pload");
                b.q_load = to_double(cur, toks[5], "qload");
                for (size_t i = 6; i < toks.size(); i += 2) {
                    if (i + 1 >= toks.size()) cur.fail("dangling option '" + toks[i] + "' in bus row");
                    if (toks[i] == "scale") b.load_scale = to_double(cur, toks[i + 1], "scale");
                    else if (toks[i] == "key") b.load_key = toks[i + 1];
                    else cur.fail("unknown bus option '" + toks[i] + "'");
                }
                if (bus_units == "kw") {
                    if (feeder.base_mva <= 0) cur.fail("kw loads need power_mva declared first");
                    b.p_load /= 1000.0 * feeder.base_mva;
                    b.q_load /= 1000.0 * feeder.base_mva;
                }
                b.p_load *= b.load_scale;
                b.q_load *= b.load_scale;
                feeder.buses.push_back(std::move(b));
                break;
            }
            case Section::Lines: {
                if (toks[0] == "units") {
                    if (toks.size() != 2 || (toks[1] != "pu" && toks[1] != "ohm"))
                        cur.fail("line units must be 'pu' or 'ohm'");
                    line_units = toks[1];
                    break;
                }
                if (toks.size() < 5) cur.fail("line row needs: id up r x b");
                Line ln;
                ln.index = to_int(cur, toks[0], "line id");
                ln.upstream = to_int(cur, toks[1], "upstream bus");
                double r = to_double(cur, toks[2], "r");
                double x = to_double(cur, toks[3], "x");
                double b = to_double(cur, toks[4], "b");
                std::optional<double> imax, smax;
                for (size_t i = 5; i < toks.size(); i += 2) {
                    if (i + 1 >= toks.size()) cur.fail("dangling option '" + toks[i] + "' in line row");
                    if (toks[i] == "imax") imax = to_double(cur, toks[i + 1], "imax");
                    else if (toks[i] == "smax") smax = to_double(cur, toks[i + 1], "smax");
                    else cur.fail("unknown line option '" + toks[i] + "'");
                }
                if (!line_ids_seen.insert(ln.index).second)
                    cur.fail("bus " + std::to_string(ln.index) + " lists two upstream lines; network must be a tree");
                if (line_units == "ohm") {
                    // Impedance base from the downstream bus zone; shunt given
                    // in microsiemens.
                    if (feeder.base_mva <= 0) cur.fail("ohm lines need power_mva declared first");
                    auto bus_it = std::find_if(feeder.buses.begin(), feeder.buses.end(),
                                               [&](const Bus& bb) { return bb.index == ln.index; });
                    if (bus_it == feeder.buses.end()) cur.fail("ohm line listed before its bus");
                    auto zone_it = feeder.base_kv.find(bus_it->zone);
                    if (zone_it == feeder.base_kv.end())
                        cur.fail("missing voltage base for zone '" + bus_it->zone + "'");
                    double zbase = zone_it->second * zone_it->second / feeder.base_mva;
                    r /= zbase;
                    x /= zbase;
                    b *= 1e-6 * zbase;
                }
                ln.z = Complex(r, x);
                ln.b_shunt = b;
                if (imax) ln.i_max_sq = (*imax) * (*imax);
                ln.s_max = smax;
                feeder.lines.push_back(std::move(ln));
                break;
            }
            case Section::Capacitors: {
                if (toks[0] == "units") {
                    if (toks.size() != 2 || (toks[1] != "pu" && toks[1] != "kvar"))
                        cur.fail("capacitor units must be 'pu' or 'kvar'");
                    cap_units = toks[1];
                    break;
                }
                if (toks.size() != 3) cur.fail("capacitor row needs: bus q mode");
                CapacitorBank c;
                c.bus = to_int(cur, toks[0], "capacitor bus");
                c.q_cap = to_double(cur, toks[1], "q");
                if (cap_units == "kvar") {
                    if (feeder.base_mva <= 0) cur.fail("kvar capacitors need power_mva declared first");
                    c.q_cap /= 1000.0 * feeder.base_mva;
                }
                if (toks[2] == "fixed") c.variable = false;
                else if (toks[2] == "variable") c.variable = true;
                else cur.fail("capacitor mode must be 'fixed' or 'variable'");
                feeder.capacitors.push_back(c);
                break;
            }
            case Section::Pv: {
                if (toks[0] == "units") {
                    if (toks.size() != 2 || (toks[1] != "pu" && toks[1] != "kw"))
                        cur.fail("pv units must be 'pu' or 'kw'");
                    pv_units = toks[1];
                    break;
                }
                if (toks[0] == "auto") {
                    rawpv.auto_mode = true;
                    for (size_t i = 1; i < toks.size(); i += 2) {
                        if (i + 1 >= toks.size()) cur.fail("dangling option '" + toks[i] + "' in pv auto row");
                        if (toks[i] == "ratio") rawpv.ratio = to_double(cur, toks[i + 1], "ratio");
                        else if (toks[i] == "nameplate") rawpv.nameplate_ratio = to_double(cur, toks[i + 1], "nameplate");
                        else cur.fail("unknown pv auto option '" + toks[i] + "'");
                    }
                    break;
                }
                if (toks.size() < 3) cur.fail("pv row needs: bus capacity nameplate");
                PvStation s;
                s.bus = to_int(cur, toks[0], "pv bus");
                s.peak_capacity = to_double(cur, toks[1], "capacity");
                s.nameplate = to_double(cur, toks[2], "nameplate");
                for (size_t i = 3; i < toks.size(); i += 2) {
                    if (i + 1 >= toks.size()) cur.fail("dangling option '" + toks[i] + "' in pv row");
                    if (toks[i] == "key") s.key = toks[i + 1];
                    else cur.fail("unknown pv option '" + toks[i] + "'");
                }
                if (pv_units == "kw") {
                    if (feeder.base_mva <= 0) cur.fail("kw pv needs power_mva declared first");
                    s.peak_capacity /= 1000.0 * feeder.base_mva;
                    s.nameplate /= 1000.0 * feeder.base_mva;
                }
                rawpv.stations.push_back(std::move(s));
                break;
            }
        }
    }
    if (!saw_format) throw ParseError(path, cur.line, "empty file; expected 'format feeder-v1'");
    if (feeder.base_mva <= 0) throw ParseError(path, cur.line, "missing power_mva declaration in [bases]");
    if (!saw_root_v) throw ParseError(path, cur.line, "missing root_voltage_pu declaration in [bases]");

    std::sort(feeder.buses.begin(), feeder.buses.end(),
              [](const Bus& a, const Bus& b) { return a.index < b.index; });
    std::sort(feeder.lines.begin(), feeder.lines.end(),
              [](const Line& a, const Line& b) { return a.index < b.index; });
    if (rawpv.auto_mode) {
        double peak = 0.0;
        for (const Bus& b : feeder.buses) peak += b.p_load;
        for (const Bus& b : feeder.buses) {
            if (b.p_load <= 0) continue;
            PvStation s;
            s.bus = b.index;
            s.peak_capacity = rawpv.ratio * b.p_load;  // proportional split of ratio*peak
            s.nameplate = rawpv.nameplate_ratio * s.peak_capacity;
            feeder.pv.push_back(std::move(s));
        }
        (void)peak;
    } else {
        feeder.pv = std::move(rawpv.stations);
    }

    try {
        feeder.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(path, cur.line, e.what());
    }
    return feeder;
}

void save_feeder(const Feeder& feeder, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "format feeder-v1\n\n[bases]\n";
    out << "power_mva " << fmt_double(feeder.base_mva) << "\n";
    for (const auto& [zone, kv] : feeder.base_kv) out << "voltage_kv " << zone << " " << fmt_double(kv) << "\n";
    out << "root_voltage_pu " << fmt_double(std::sqrt(feeder.v0)) << "\n";
    out << "\n[buses]\nunits pu\n";
    for (const Bus& b : feeder.buses) {
        out << b.index << " " << (b.zone.empty() ? "default" : b.zone) << " "
            << fmt_double(std::sqrt(b.v_min_sq)) << " " << fmt_double(std::sqrt(b.v_max_sq)) << " "
            << fmt_double(b.p_load) << " " << fmt_double(b.q_load);
        if (!b.load_key.empty()) out << " key " << b.load_key;
        out << "\n";
    }
    out << "\n[lines]\nunits pu\n";
    for (const Line& ln : feeder.lines) {
        out << ln.index << " " << ln.upstream << " " << fmt_double(ln.z.real()) << " "
            << fmt_double(ln.z.imag()) << " " << fmt_double(ln.b_shunt);
        if (ln.i_max_sq) out << " imax " << fmt_double(std::sqrt(*ln.i_max_sq));
        if (ln.s_max) out << " smax " << fmt_double(*ln.s_max);
        out << "\n";
    }
    if (!feeder.capacitors.empty()) {
        out << "\n[capacitors]\nunits pu\n";
        for (const CapacitorBank& c : feeder.capacitors)
            out << c.bus << " " << fmt_double(c.q_cap) << " " << (c.variable ? "variable" : "fixed") << "\n";
    }
    if (!feeder.pv.empty()) {
        out << "\n[pv]\nunits pu\n";
        for (const PvStation& s : feeder.pv) {
            out << s.bus << " " << fmt_double(s.peak_capacity) << " " << fmt_double(s.nameplate);
            if (!s.key.empty()) out << " key " << s.key;
            out << "\n";
        }
    }
}

PhysicalFeeder to_physical_units(const Feeder& feeder) {
    PhysicalFeeder phys;
    phys.base_mva = feeder.base_mva;
    phys.base_kv = feeder.base_kv;
    auto kv_of = [&](const std::string& zone) {
        auto it = feeder.base_kv.find(zone);
        if (it == feeder.base_kv.end()) throw std::invalid_argument("missing voltage base for zone '" + zone + "'");
        return it->second;
    };
    const std::string root_zone = feeder.buses.empty() ? std::string() : feeder.bus(1).zone;
    phys.root_voltage_kv = std::sqrt(feeder.v0) * (feeder.base_kv.empty() ? 1.0 : kv_of(root_zone));
    for (const Bus& b : feeder.buses) {
        Bus pb = b;
        double kv = kv_of(b.zone);
        pb.v_min_sq = std::sqrt(b.v_min_sq) * kv;  // bound magnitude in kV
        pb.v_max_sq = std::sqrt(b.v_max_sq) * kv;
        pb.p_load = b.p_load * feeder.base_mva;
        pb.q_load = b.q_load * feeder.base_mva;
        phys.buses.push_back(std::move(pb));
    }
    for (const Line& ln : feeder.lines) {
        Line pl = ln;
        double kv = kv_of(feeder.bus(ln.index).zone);
        double zbase = kv * kv / feeder.base_mva;
        pl.z = ln.z * zbase;
        pl.b_shunt = ln.b_shunt / zbase;
        if (ln.i_max_sq) {
            double ibase_ka = feeder.base_mva / (std::sqrt(3.0) * kv);
            pl.i_max_sq = std::sqrt(*ln.i_max_sq) * ibase_ka;  // magnitude in kA
        }
        if (ln.s_max) pl.s_max = *ln.s_max * feeder.base_mva;
        phys.lines.push_back(std::move(pl));
    }
    for (const CapacitorBank& c : feeder.capacitors) {
        CapacitorBank pc = c;
        pc.q_cap = c.q_cap * feeder.base_mva;
        phys.capacitors.push_back(pc);
    }
    for (const PvStation& s : feeder.pv) {
        PvStation ps = s;
        ps.peak_capacity = s.peak_capacity * feeder.base_mva;
        ps.nameplate = s.nameplate * feeder.base_mva;
        phys.pv.push_back(std::move(ps));
    }
    return phys;
}

Feeder from_physical_units(const PhysicalFeeder& phys) {
    Feeder feeder;
    feeder.base_mva = phys.base_mva;
    feeder.base_kv = phys.base_kv;
    auto kv_of = [&](const std::string& zone) {
        auto it = phys.base_kv.find(zone);
        if (it == phys.base_kv.end()) throw std::invalid_argument("missing voltage base for zone '" + zone + "'");
        return it->second;
    };
    const std::string root_zone = phys.buses.empty() ? std::string() : phys.buses.front().zone;
    {
        double kv = phys.base_kv.empty() ? 1.0 : kv_of(root_zone);
        double mag = phys.root_voltage_kv / kv;
        feeder.v0 = mag * mag;
    }
    for (const Bus& pb : phys.buses) {
        Bus b = pb;
        double kv = kv_of(pb.zone);
        double vmin = pb.v_min_sq / kv, vmax = pb.v_max_sq / kv;
        b.v_min_sq = vmin * vmin;
        b.v_max_sq = vmax * vmax;
        b.p_load = pb.p_load / phys.base_mva;
        b.q_load = pb.q_load / phys.base_mva;
        feeder.buses.push_back(std::move(b));
    }
    for (const Line& pl : phys.lines) {
        Line ln = pl;
        double kv = kv_of(feeder.bus(pl.index).zone);
        double zbase = kv * kv / phys.base_mva;
        ln.z = pl.z / zbase;
        ln.b_shunt = pl.b_shunt * zbase;
        if (pl.i_max_sq) {
            double ibase_ka = phys.base_mva / (std::sqrt(3.0) * kv);
            double mag = *pl.i_max_sq / ibase_ka;
            ln.i_max_sq = mag * mag;
        }
        if (pl.s_max) ln.s_max = *pl.s_max / phys.base_mva;
        feeder.lines.push_back(std::move(ln));
    }
    for (const CapacitorBank& pc : phys.capacitors) {
        CapacitorBank c = pc;
        c.q_cap = pc.q_cap / phys.base_mva;
        feeder.capacitors.push_back(c);
    }
    for (const PvStation& ps : phys.pv) {
        PvStation s = ps;
        s.peak_capacity = ps.peak_capacity / phys.base_mva;
        s.nameplate = ps.nameplate / phys.base_mva;
        feeder.pv.push_back(std::move(s));
    }
    return feeder;
}

size_t ProfileSet::hours() const {
    size_t h = 0;
    for (const auto& [key, v] : series) h = std::max(h, v.size());
    return h;
}

double ProfileSet::at(const std::string& key, size_t hour) const {
    auto it = series.find(key);
    if (it == series.end()) throw std::invalid_argument("unknown profile key '" + key + "'");
    if (hour >= it->second.size()) throw std::out_of_range("hour " + std::to_string(hour) + " outside profile range");
    return it->second[hour];
}

ProfileSet load_profiles(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    Cursor cur{path, 0};
    std::string raw;
    if (!std::getline(in, raw)) cur.fail("empty profile file");
    ++cur.line;
    {
        std::string hdr = raw;
        if (!hdr.empty() && hdr.back() == '\r') hdr.pop_back();
        if (hdr != "hour,key,multiplier") cur.fail("expected header 'hour,key,multiplier'");
    }
    ProfileSet set;
    while (std::getline(in, raw)) {
        ++cur.line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        std::istringstream iss(raw);
        std::string hour_s, key, mult_s;
        if (!std::getline(iss, hour_s, ',') || !std::getline(iss, key, ',') || !std::getline(iss, mult_s))
            cur.fail("expected 'hour,key,multiplier'");
        long hour = to_int(cur, hour_s, "hour");
        double mult = to_double(cur, mult_s, "multiplier");
        if (mult < 0.0 || mult > 1.0) cur.fail("multiplier must lie in [0, 1]");
        auto& vec = set.series[key];
        if (hour != static_cast<long>(vec.size()))
            cur.fail("hours for key '" + key + "' must be contiguous from 0; got " + hour_s);
        vec.push_back(mult);
    }
    size_t len = 0;
    bool first = true;
    for (const auto& [key, v] : set.series) {
        if (first) {
            len = v.size();
            first = false;
        } else if (v.size() != len) {
            throw ParseError(path, cur.line, "series '" + key + "' has " + std::to_string(v.size()) +
                                                 " hours; other series have " + std::to_string(len));
        }
    }
    return set;
}

void save_profiles(const ProfileSet& profiles, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "hour,key,multiplier\n";
    for (const auto& [key, v] : profiles.series)
        for (size_t h = 0; h < v.size(); ++h)
            out << h << "," << key << "," << fmt_double(v[h]) << "\n";
}

ProfileSet synthetic_year_profiles(unsigned seed, const std::string& load_key, const std::string& pv_key) {
    std::mt19937 rng(seed);
    auto uniform = [&rng]() { return (rng() >> 8) * (1.0 / 16777216.0); };  // [0,1)
    ProfileSet set;
    auto& load = set.series[load_key];
    auto& pv = set.series[pv_key];
    load.resize(8760);
    pv.resize(8760);
    const double pi = 3.14159265358979323846;
    for (int h = 0; h < 8760; ++h) {
        int hod = h % 24;
        int day = h / 24;
        // Load: morning/evening double hump, seasonal swing, mild noise;
        // clipped to the 15%..100% band.
        double daily = 0.55 + 0.2 * std::sin((hod - 7) * pi / 12.0) + 0.15 * std::sin((hod - 18) * pi / 6.0);
        double seasonal = 0.85 + 0.15 * std::cos((day - 15) * 2.0 * pi / 365.0);
        double l = daily * seasonal * (0.9 + 0.2 * uniform());
        load[h] = std::min(1.0, std::max(0.15, l));
        // PV: daylight bell with seasonal amplitude and cloud noise.
        double bell = std::cos((hod - 12.5) * pi / 14.0);
        bell = bell > 0 ? bell * bell : 0.0;
        double season = 0.75 + 0.25 * std::cos((day - 172) * 2.0 * pi / 365.0);
        double cloud = 0.45 + 0.55 * uniform();
        double p = (hod >= 6 && hod <= 19) ? bell * season * cloud : 0.0;
        pv[h] = std::min(1.0, std::max(0.0, p));
    }
    return set;
}

}  // namespace radopf
