#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "squeezer/error.hpp"
#include "squeezer/params.hpp"

namespace squeezer {

namespace {

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_number(std::string_view key, std::string_view text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty())
        throw SchemaError("key '" + std::string(key) + "': expected a number, got '" + std::string(text) + "'");
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw SchemaError("key '" + std::string(key) + "': expected true or false, got '" + std::string(text) + "'");
}

using Setter = std::function<void(PhysicalConfig&, std::string_view key, std::string_view value)>;

struct Field {
    std::string_view key;
    Setter set;
};

Setter number_field(double PhysicalConfig::*member) {
    return [member](PhysicalConfig& c, std::string_view k, std::string_view v) { c.*member = parse_number(k, v); };
}

const std::array<Field, 19>& fields() {
    static const std::array<Field, 19> table = {{
        {"carrier_wavelength", number_field(&PhysicalConfig::carrier_wavelength)},
        {"arm_length", number_field(&PhysicalConfig::arm_length)},
        {"src_length", number_field(&PhysicalConfig::src_length)},
        {"circulating_power", number_field(&PhysicalConfig::circulating_power)},
        {"mirror_mass", number_field(&PhysicalConfig::mirror_mass)},
        {"itm_transmission", number_field(&PhysicalConfig::itm_transmission)},
        {"srm_transmission_signal", number_field(&PhysicalConfig::srm_transmission_signal)},
        {"srm_transmission_idler", number_field(&PhysicalConfig::srm_transmission_idler)},
        {"intracavity_loss_arm", number_field(&PhysicalConfig::intracavity_loss_arm)},
        {"intracavity_loss_signal", number_field(&PhysicalConfig::intracavity_loss_signal)},
        {"intracavity_loss_idler", number_field(&PhysicalConfig::intracavity_loss_idler)},
        {"detection_loss", number_field(&PhysicalConfig::detection_loss)},
        {"injected_squeezing_db", number_field(&PhysicalConfig::injected_squeezing_db)},
        {"squeeze_signal_port",
         [](PhysicalConfig& c, std::string_view k, std::string_view v) { c.squeeze_signal_port = parse_bool(k, v); }},
        {"squeeze_idler_port",
         [](PhysicalConfig& c, std::string_view k, std::string_view v) {
             if (v == "auto")
                 c.squeeze_idler_port.reset();
             else
                 c.squeeze_idler_port = parse_bool(k, v);
         }},
        {"pump_phase", number_field(&PhysicalConfig::pump_phase)},
        {"chi_ratio",
         [](PhysicalConfig& c, std::string_view k, std::string_view v) {
             c.drive = SqueezerDrive::ratio(parse_number(k, v));
         }},
        {"chi_abs",
         [](PhysicalConfig& c, std::string_view k, std::string_view v) {
             c.drive = SqueezerDrive::absolute(parse_number(k, v));
         }},
        {"idler_separation", number_field(&PhysicalConfig::idler_separation)},
    }};
    return table;
}

const Field& lookup(std::string_view key) {
    for (const auto& f : fields())
        if (f.key == key) return f;
    throw SchemaError("unknown key '" + std::string(key) + "'");
}

void assign(PhysicalConfig& cfg, std::string_view key, std::string_view value) {
    lookup(key).set(cfg, key, value);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

PhysicalConfig parse_config(std::string_view text) {
    PhysicalConfig cfg;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw SchemaError("line " + std::to_string(line_no) + ": expected 'key = value'");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (seen.contains(key)) throw SchemaError("duplicate key '" + std::string(key) + "'");
        seen.emplace(key);
        assign(cfg, key, value);
    }
    if (seen.contains("chi_ratio") && seen.contains("chi_abs"))
        throw SchemaError("keys 'chi_ratio' and 'chi_abs' are mutually exclusive");
    validate(cfg);
    return cfg;
}

PhysicalConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const PhysicalConfig& c) {
    std::ostringstream os;
    os << "carrier_wavelength = " << fmt(c.carrier_wavelength) << '\n'
       << "arm_length = " << fmt(c.arm_length) << '\n'
       << "src_length = " << fmt(c.src_length) << '\n'
       << "circulating_power = " << fmt(c.circulating_power) << '\n'
       << "mirror_mass = " << fmt(c.mirror_mass) << '\n'
       << "itm_transmission = " << fmt(c.itm_transmission) << '\n'
       << "srm_transmission_signal = " << fmt(c.srm_transmission_signal) << '\n'
       << "srm_transmission_idler = " << fmt(c.srm_transmission_idler) << '\n'
       << "intracavity_loss_arm = " << fmt(c.intracavity_loss_arm) << '\n'
       << "intracavity_loss_signal = " << fmt(c.intracavity_loss_signal) << '\n'
       << "intracavity_loss_idler = " << fmt(c.intracavity_loss_idler) << '\n'
       << "detection_loss = " << fmt(c.detection_loss) << '\n'
       << "injected_squeezing_db = " << fmt(c.injected_squeezing_db) << '\n'
       << "squeeze_signal_port = " << (c.squeeze_signal_port ? "true" : "false") << '\n'
       << "squeeze_idler_port = "
       << (c.squeeze_idler_port ? (*c.squeeze_idler_port ? "true" : "false") : "auto") << '\n'
       << "pump_phase = " << fmt(c.pump_phase) << '\n'
       << (c.drive.mode == SqueezerDrive::Mode::ratio ? "chi_ratio = " : "chi_abs = ") << fmt(c.drive.value)
       << '\n'
       << "idler_separation = " << fmt(c.idler_separation) << '\n';
    return os.str();
}

void apply_override(PhysicalConfig& cfg, std::string_view assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw SchemaError("override '" + std::string(assignment) + "' is not of the form key=value");
    PhysicalConfig next = cfg;
    assign(next, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
    validate(next);
    cfg = next;
}

}  // namespace squeezer
