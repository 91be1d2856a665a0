// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_TOOLS_COMMANDS_HPP
#define OAMSIM_TOOLS_COMMANDS_HPP

// Scenario runner behind the `oamsim` executable. Every command parses and validates its whole
// configuration first (ConfigError -> exit 2), then computes into memory, then writes files and
// the manifest. Numerical or geometric failures during the run exit with 3.

#include "oamsim/io.hpp"
#include "oamsim/oamsim.hpp"

#include "json.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace oamsim::cli
{

inline constexpr const char *software_version = "oamsim 0.1.0";

enum ExitCode : int
{
    exit_ok = 0,
    exit_config = 2,
    exit_numeric = 3,
};

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------------------
// Checksums and output buffering

inline std::string sha256_hex(const std::string &data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i)
        out += hex[md[i] >> 4], out += hex[md[i] & 0xF];
    return out;
}

// Files are held in memory until the run has succeeded, then written in insertion order.
class OutputSet
{
public:
    void add(std::string relative_path, std::string content)
    {
        files_.emplace_back(std::move(relative_path), std::move(content));
    }

    ojson inventory() const
    {
        ojson inv = ojson::array();
        for (const auto &[name, content] : files_)
            inv.push_back({{"path", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
        return inv;
    }

    void write(const std::filesystem::path &dir) const
    {
        for (const auto &[name, content] : files_)
        {
            const auto p = dir / name;
            std::filesystem::create_directories(p.parent_path());
            std::ofstream f(p, std::ios::binary);
            f.write(content.data(), static_cast<std::streamsize>(content.size()));
            if (!f)
                throw std::runtime_error("cannot write " + p.string());
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

// Writes outputs plus manifest.json (scenario echo, version, results, file inventory).
inline void finish_run(const std::filesystem::path &out_dir, OutputSet &files, ojson scenario, ojson results,
                       std::optional<long long> seed)
{
    ojson manifest;
    manifest["software"] = software_version;
    manifest["scenario"] = std::move(scenario);
    manifest["seed"] = seed ? ojson(*seed) : ojson(nullptr);
    manifest["results"] = std::move(results);
    manifest["files"] = files.inventory();
    std::filesystem::create_directories(out_dir);
    files.write(out_dir);
    std::ofstream f(out_dir / "manifest.json", std::ios::binary);
    f << manifest.dump(2) << '\n';
}

// ------------------------------------------------------------------------
// Config parsing helpers

namespace cfg
{
inline void allow_keys(const json &j, std::initializer_list<const char *> keys, const std::string &where)
{
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto &item : j.items())
    {
        bool ok = false;
        for (const char *k : keys)
            ok = ok || item.key() == k;
        if (!ok)
            throw ConfigError(where + "." + item.key() + ": unknown key");
    }
}

inline double number(const json &j, const char *key, const std::string &where, std::optional<double> def = {})
{
    if (!j.contains(key))
    {
        if (def)
            return *def;
        throw ConfigError(where + "." + key + ": required number is missing");
    }
    if (!j[key].is_number())
        throw ConfigError(where + "." + key + ": expected a number");
    const double v = j[key].get<double>();
    if (!std::isfinite(v))
        throw ConfigError(where + "." + key + ": must be finite");
    return v;
}

inline int integer(const json &j, const char *key, const std::string &where, std::optional<int> def = {})
{
    if (!j.contains(key))
    {
        if (def)
            return *def;
        throw ConfigError(where + "." + key + ": required integer is missing");
    }
    if (!j[key].is_number_integer())
        throw ConfigError(where + "." + key + ": expected an integer");
    return j[key].get<int>();
}

inline std::string string(const json &j, const char *key, const std::string &where,
                          std::optional<std::string> def = {})
{
    if (!j.contains(key))
    {
        if (def)
            return *def;
        throw ConfigError(where + "." + key + ": required string is missing");
    }
    if (!j[key].is_string())
        throw ConfigError(where + "." + key + ": expected a string");
    return j[key].get<std::string>();
}

inline Vec3 vec3(const json &j, const char *key, const std::string &where, Vec3 def)
{
    if (!j.contains(key))
        return def;
    const json &v = j[key];
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        throw ConfigError(where + "." + key + ": expected [x, y, z]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

inline const json &section(const json &j, const char *key, const std::string &where)
{
    if (!j.contains(key))
        throw ConfigError(where + "." + key + ": required section is missing");
    return j[key];
}

// Runs a library constructor, turning its validation errors into config diagnostics.
template <class F>
auto checked(const std::string &where, F &&f)
{
    try
    {
        return f();
    }
    catch (const Error &e)
    {
        throw ConfigError(where + ": " + e.what());
    }
}

inline json parse_document(const std::string &text, const std::string &source)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(source + ": " + e.what());
    }
}

inline json load_document(const std::filesystem::path &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError(path.string() + ": cannot open");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_document(ss.str(), path.string());
}
} // namespace cfg

// ------------------------------------------------------------------------
// Scenario description

struct LayoutChoice
{
    ArrayLayout layout;
    std::string id;
    ojson echo;
};

inline Wave parse_wave(const json &j, const std::string &where)
{
    const double f = cfg::number(j, "frequency", where);
    if (!(f > 0.0))
        throw ConfigError(where + ".frequency: must be > 0 (Hz)");
    return Wave(f);
}

inline Placement parse_placement(const std::string &s, const std::string &where)
{
    if (s == "regular")
        return Placement::regular;
    if (s == "irregular")
        return Placement::irregular;
    throw ConfigError(where + ": placement must be \"regular\" or \"irregular\"");
}

inline LayoutChoice parse_layout(const json &j, const std::string &where, const std::filesystem::path &base_dir)
{
    const std::string type = cfg::string(j, "type", where);
    if (type == "uca")
    {
        cfg::allow_keys(j, {"type", "count", "radius", "mode", "center", "normal"}, where);
        UcaSpec s;
        s.count = cfg::integer(j, "count", where);
        s.radius = cfg::number(j, "radius", where);
        s.mode = cfg::integer(j, "mode", where, 0);
        s.center = cfg::vec3(j, "center", where, {});
        s.normal = cfg::vec3(j, "normal", where, {0.0, 0.0, 1.0});
        ArrayLayout layout = cfg::checked(where, [&] { return build_uca(s); });
        return {std::move(layout), "uca-N" + std::to_string(s.count) + "-l" + std::to_string(s.mode), ojson(j)};
    }
    if (type == "smartphone")
    {
        cfg::allow_keys(j, {"type", "placement", "width", "height", "mode"}, where);
        SmartphoneSpec s;
        s.placement = parse_placement(cfg::string(j, "placement", where), where + ".placement");
        s.width = cfg::number(j, "width", where, s.width);
        s.height = cfg::number(j, "height", where, s.height);
        s.mode = cfg::integer(j, "mode", where, 1);
        ArrayLayout layout = cfg::checked(where, [&] { return build_smartphone_layout(s); });
        return {std::move(layout), std::string("smartphone-") + cfg::string(j, "placement", where), ojson(j)};
    }
    if (type == "file")
    {
        cfg::allow_keys(j, {"type", "path"}, where);
        const std::filesystem::path p = base_dir / cfg::string(j, "path", where);
        const json doc = cfg::load_document(p);
        ArrayLayout layout = cfg::checked(where, [&] { return io::layout_from_json(doc, p.string()); });
        return {std::move(layout), p.stem().string(), ojson(j)};
    }
    throw ConfigError(where + ".type: expected \"uca\", \"smartphone\" or \"file\"");
}

inline RadiatorModel parse_radiator(const json &j, const std::string &where, const Wave &wave)
{
    const std::string type = cfg::string(j, "type", where);
    if (type == "point")
    {
        cfg::allow_keys(j, {"type"}, where);
        return PointSource{};
    }
    if (type == "dipole")
    {
        cfg::allow_keys(j, {"type", "half_length", "axis", "max_half_length_wavelengths"}, where);
        Dipole d;
        d.half_length = cfg::number(j, "half_length", where);
        d.axis = cfg::vec3(j, "axis", where, {1.0, 0.0, 0.0});
        d.max_half_length_wavelengths = cfg::number(j, "max_half_length_wavelengths", where, 10.0);
        cfg::checked(where, [&] {
            validate(d, wave);
            return 0;
        });
        return d;
    }
    throw ConfigError(where + ".type: expected \"point\" or \"dipole\"");
}

struct Scenario
{
    std::string name = "scenario";
    Wave wave{1e9};
    LayoutChoice layout;
    RadiatorModel radiator = PointSource{};
    std::vector<PlaneGrid> planes;
    std::vector<RingProbe> rings;
    int l_max = 8;
    ojson echo;
};

inline PlaneGrid default_plane(const Wave &wave)
{
    return {10.0 * wave.wavelength(), 10.0 * wave.wavelength(), 256};
}

inline Scenario parse_scenario(const json &j, const std::filesystem::path &base_dir)
{
    const std::string w = "config";
    cfg::allow_keys(j, {"name", "frequency", "layout", "radiator", "planes", "rings", "analysis"}, w);
    const Wave wave = parse_wave(j, w);
    Scenario s{cfg::string(j, "name", w, "scenario"), wave, parse_layout(cfg::section(j, "layout", w), w + ".layout", base_dir), PointSource{}, {}, {}, 8, {}};
    s.radiator = j.contains("radiator") ? parse_radiator(j["radiator"], w + ".radiator", wave) : PointSource{};
    if (j.contains("planes"))
    {
        if (!j["planes"].is_array())
            throw ConfigError(w + ".planes: expected an array");
        for (std::size_t i = 0; i < j["planes"].size(); ++i)
        {
            const std::string at = w + ".planes[" + std::to_string(i) + "]";
            const json &p = j["planes"][i];
            cfg::allow_keys(p, {"z", "half_extent", "samples"}, at);
            PlaneGrid g{cfg::number(p, "z", at), cfg::number(p, "half_extent", at),
                        cfg::integer(p, "samples", at, 256)};
            cfg::checked(at, [&] {
                g.validate();
                return 0;
            });
            s.planes.push_back(g);
        }
    }
    else
    {
        s.planes.push_back(default_plane(wave));
    }
    if (j.contains("rings"))
    {
        if (!j["rings"].is_array())
            throw ConfigError(w + ".rings: expected an array");
        for (std::size_t i = 0; i < j["rings"].size(); ++i)
        {
            const std::string at = w + ".rings[" + std::to_string(i) + "]";
            const json &r = j["rings"][i];
            cfg::allow_keys(r, {"radius", "z", "samples"}, at);
            RingProbe p{cfg::number(r, "radius", at), cfg::number(r, "z", at), cfg::integer(r, "samples", at, 72)};
            cfg::checked(at, [&] {
                p.validate();
                return 0;
            });
            s.rings.push_back(p);
        }
    }
    if (j.contains("analysis"))
    {
        const json &a = j["analysis"];
        cfg::allow_keys(a, {"l_max"}, w + ".analysis");
        s.l_max = cfg::integer(a, "l_max", w + ".analysis", 8);
        if (s.l_max < 1)
            throw ConfigError(w + ".analysis.l_max: must be >= 1");
    }
    const int mode = s.layout.layout.mode().value_or(0);
    if (std::abs(mode) > s.l_max)
        throw ConfigError(w + ".analysis.l_max: must cover the layout mode " + std::to_string(mode));
    for (std::size_t i = 0; i < s.rings.size(); ++i)
        if (s.rings[i].samples < 2 * s.l_max + 2)
            throw ConfigError(w + ".rings[" + std::to_string(i) + "].samples: need >= 2*l_max+2");
    s.echo = ojson(j);
    return s;
}

// ------------------------------------------------------------------------
// Shared pieces of result reporting

inline ojson purity_json(const PurityReport &r)
{
    return {{"target", r.target},
            {"dominant", r.dominant},
            {"purity", r.purity},
            {"target_purity", r.target_purity},
            {"unique", r.unique}};
}

inline ojson ring_json(const RingProbe &p)
{
    return {{"radius", p.radius}, {"z", p.z}, {"samples", p.samples}};
}

struct RingAnalysis
{
    RingProbe probe;
    ModeSpectrum spectrum;
    PurityReport purity;
    std::optional<WindingResult> winding;
    std::string winding_error;
};

inline RingAnalysis analyse_ring(const ArrayLayout &layout, const RadiatorModel &model, const Wave &wave,
                                 const RingProbe &probe, int l_max)
{
    const RingSamples samples = superpose(layout, model, probe, wave);
    RingAnalysis a{probe, mode_decompose(samples, l_max), {}, {}, {}};
    a.purity = purity(a.spectrum, layout.mode().value_or(0));
    try
    {
        a.winding = winding_number(samples);
    }
    catch (const Error &e)
    {
        if (e.kind() != ErrorKind::undefined_phase)
            throw;
        a.winding_error = e.what();
    }
    return a;
}

inline ojson analysis_json(const RingAnalysis &a)
{
    ojson j;
    j["ring"] = ring_json(a.probe);
    j["purity"] = purity_json(a.purity);
    if (a.winding)
        j["winding"] = {{"winding", a.winding->winding}, {"residual", a.winding->residual}};
    else
        j["winding"] = {{"error", a.winding_error}};
    return j;
}

// Field maps, spectra and purity for one layout/model/frequency. Files are added under `prefix`.
inline ojson run_scenario(const Scenario &s, OutputSet &files, const std::string &prefix)
{
    ojson res;
    res["layout_id"] = s.layout.id;
    res["radiator"] = describe(s.radiator);
    res["frequency"] = s.wave.frequency();
    res["wavelength"] = s.wave.wavelength();
    res["elements"] = s.layout.layout.size();
    res["layout"] = io::layout_to_json(s.layout.layout);

    ojson planes = ojson::array();
    for (std::size_t i = 0; i < s.planes.size(); ++i)
    {
        const PlaneGrid &g = s.planes[i];
        const FieldMap map = superpose(s.layout.layout, s.radiator, g, s.wave, s.layout.id);
        const std::string stem = prefix + "plane" + std::to_string(i);
        files.add(stem + "_phase.pgm", io::phase_pgm(map));
        files.add(stem + "_magnitude.pgm", io::magnitude_pgm(map));
        files.add(stem + "_field.csv", io::field_map_csv(map));
        const double mmax = max_magnitude(map);
        const NodeField axis = field_at(s.layout.layout, s.radiator, {0.0, 0.0, g.z}, s.wave);
        planes.push_back({{"z", g.z},
                          {"half_extent", g.half_extent},
                          {"samples", g.samples},
                          {"max_magnitude", mmax},
                          {"invalid_nodes", map.invalid_count()},
                          {"on_axis_ratio", axis.valid && mmax > 0.0 ? ojson(std::abs(axis.scalar) / mmax)
                                                                     : ojson(nullptr)}});
    }
    res["planes"] = std::move(planes);

    const RingProbe def = default_analysis_ring(s.layout.layout, s.radiator, s.wave, s.l_max);
    const RingAnalysis main = analyse_ring(s.layout.layout, s.radiator, s.wave, def, s.l_max);
    files.add(prefix + "spectrum.csv", io::mode_spectrum_csv(main.spectrum));
    res["analysis"] = analysis_json(main);

    ojson rings = ojson::array();
    for (std::size_t i = 0; i < s.rings.size(); ++i)
    {
        const RingAnalysis a = analyse_ring(s.layout.layout, s.radiator, s.wave, s.rings[i], s.l_max);
        files.add(prefix + "ring" + std::to_string(i) + "_spectrum.csv", io::mode_spectrum_csv(a.spectrum));
        rings.push_back(analysis_json(a));
    }
    res["rings"] = std::move(rings);
    return res;
}

// ------------------------------------------------------------------------
// Commands

struct RunOptions
{
    std::filesystem::path out_dir = "out";
    std::optional<long long> seed;
};

inline int cmd_simulate(const std::filesystem::path &config, const RunOptions &opt)
{
    const json doc = cfg::load_document(config);
    const Scenario s = parse_scenario(doc, config.parent_path());
    OutputSet files;
    ojson results = run_scenario(s, files, s.name + "_");
    finish_run(opt.out_dir, files, s.echo, std::move(results), opt.seed);
    return exit_ok;
}

struct MinElementsRow
{
    int mode = 0;
    int rule = 0;
    std::optional<int> empirical;
};

/// Rule-vs-sweep table for l = 1..l_max. Returns rows (possibly partial) and whether all agree.
inline std::vector<MinElementsRow> min_elements_table(int l_max, const Wave &wave, std::string *failure = nullptr)
{
    std::vector<MinElementsRow> rows;
    for (int l = 1; l <= l_max; ++l)
    {
        MinElementsRow row{l, min_elements(l), {}};
        try
        {
            row.empirical = find_min_elements_empirical(l, wave).elements;
        }
        catch (const Error &e)
        {
            if (failure)
                *failure = e.what();
            rows.push_back(row);
            break;
        }
        rows.push_back(row);
    }
    return rows;
}

inline std::string min_elements_csv(const std::vector<MinElementsRow> &rows)
{
    std::string csv = "l,n_rule,n_empirical\r\n";
    for (const auto &r : rows)
        csv += std::to_string(r.mode) + ',' + std::to_string(r.rule) + ',' +
               (r.empirical ? std::to_string(*r.empirical) : std::string("failed")) + "\r\n";
    return csv;
}

inline constexpr double table_frequency = 10e9;

inline int cmd_min_elements(int l_max, const RunOptions &opt)
{
    if (l_max < 1)
        throw ConfigError("--l-max: must be >= 1");
    const Wave wave(table_frequency);
    std::string failure;
    const auto rows = min_elements_table(l_max, wave, &failure);
    bool agree = failure.empty();
    ojson table = ojson::array();
    for (const auto &r : rows)
    {
        agree = agree && r.empirical && *r.empirical == r.rule;
        table.push_back({{"l", r.mode}, {"n_rule", r.rule}, {"n_empirical", r.empirical ? ojson(*r.empirical) : ojson(nullptr)}});
    }
    OutputSet files;
    files.add("min_elements.csv", min_elements_csv(rows));
    ojson results;
    results["min_elements"] = std::move(table);
    results["frequency"] = wave.frequency();
    results["complete"] = failure.empty();
    results["agree"] = agree;
    if (!failure.empty())
        results["failure"] = failure;
    finish_run(opt.out_dir, files, {{"command", "min-elements"}, {"l_max", l_max}}, std::move(results), opt.seed);
    return agree ? exit_ok : exit_numeric;
}

inline Scenario smartphone_scenario(Placement placement, double frequency, int mode = 1)
{
    const Wave wave(frequency);
    SmartphoneSpec spec;
    spec.placement = placement;
    spec.mode = mode;
    const std::string pname = placement == Placement::regular ? "regular" : "irregular";
    ojson echo = {{"type", "smartphone"}, {"placement", pname}, {"width", spec.width}, {"height", spec.height},
                  {"mode", mode}};
    Scenario s{"smartphone-" + pname, wave, {build_smartphone_layout(spec), "smartphone-" + pname, echo}, PointSource{}, {}, {}, 8, {}};
    s.planes.push_back(default_plane(wave));
    s.echo = {{"name", s.name}, {"frequency", frequency}, {"layout", echo}, {"radiator", {{"type", "point"}}}};
    return s;
}

inline double target_purity_of(const Scenario &s)
{
    const RingProbe ring = default_analysis_ring(s.layout.layout, s.radiator, s.wave, s.l_max);
    return analyse_ring(s.layout.layout, s.radiator, s.wave, ring, s.l_max).purity.target_purity;
}

inline ojson smartphone_results(Placement placement, double frequency, OutputSet &files, const std::string &prefix)
{
    const Scenario s = smartphone_scenario(placement, frequency);
    ojson res = run_scenario(s, files, prefix);
    const Placement other = placement == Placement::regular ? Placement::irregular : Placement::regular;
    const double mine = res["analysis"]["purity"]["target_purity"].get<double>();
    const double theirs = target_purity_of(smartphone_scenario(other, frequency));
    res["comparison"] = {{"other_placement", other == Placement::regular ? "regular" : "irregular"},
                         {"target_purity", mine},
                         {"other_target_purity", theirs},
                         {"difference", mine - theirs}};
    return res;
}

inline int cmd_smartphone(const std::string &placement, double frequency, const RunOptions &opt)
{
    const Placement p = parse_placement(placement, "--placement");
    if (!(frequency > 0.0) || !std::isfinite(frequency))
        throw ConfigError("--freq: must be > 0 (Hz)");
    OutputSet files;
    ojson results = smartphone_results(p, frequency, files, placement + "_");
    finish_run(opt.out_dir, files, {{"command", "smartphone"}, {"placement", placement}, {"frequency", frequency}},
               std::move(results), opt.seed);
    return exit_ok;
}

struct ChannelConfig
{
    Wave wave{1e9};
    std::optional<LinkSpec> link;
    std::vector<int> modes;
    std::vector<double> snr;
    ojson echo;
};

inline ChannelConfig parse_channel(const json &j, const std::filesystem::path &base_dir)
{
    const std::string w = "config";
    cfg::allow_keys(j, {"name", "frequency", "tx", "rx", "separation", "lateral_offset", "tilt", "modes", "snr"}, w);
    ChannelConfig c;
    c.wave = parse_wave(j, w);
    LayoutChoice tx = parse_layout(cfg::section(j, "tx", w), w + ".tx", base_dir);
    LayoutChoice rx = parse_layout(cfg::section(j, "rx", w), w + ".rx", base_dir);
    const double d = cfg::number(j, "separation", w);
    if (!(d > 0.0))
        throw ConfigError(w + ".separation: must be > 0");
    c.link = LinkSpec{tx.layout, rx.layout, d, cfg::number(j, "lateral_offset", w, 0.0), cfg::number(j, "tilt", w, 0.0)};
    if (!j.contains("modes") || !j["modes"].is_array() || j["modes"].empty())
        throw ConfigError(w + ".modes: expected a non-empty integer array");
    for (const auto &m : j["modes"])
    {
        if (!m.is_number_integer())
            throw ConfigError(w + ".modes: expected integers");
        c.modes.push_back(m.get<int>());
    }
    if (j.contains("snr"))
    {
        if (!j["snr"].is_array())
            throw ConfigError(w + ".snr: expected an array of linear SNR values");
        for (const auto &v : j["snr"])
        {
            if (!v.is_number() || !(v.get<double>() >= 0.0))
                throw ConfigError(w + ".snr: values must be numbers >= 0");
            c.snr.push_back(v.get<double>());
        }
    }
    else
    {
        c.snr = {0.0, 1.0, 10.0, 100.0, 1000.0};
    }
    // Mode-range and ring-shape checks happen before any output exists.
    if (c.link->tx.size() != c.link->rx.size())
        throw ConfigError(w + ".rx: mode basis needs equal tx/rx element counts");
    const int n = static_cast<int>(c.link->tx.size());
    for (int m : c.modes)
        if (2 * std::abs(m) > n - 1)
            throw ConfigError(w + ".modes: aliasing: mode " + std::to_string(m) + " exceeds the alias-free range of " +
                              std::to_string(n) + " elements");
    c.echo = ojson(j);
    return c;
}

inline int cmd_channel(const std::filesystem::path &config, const std::vector<double> &snr_override,
                       const RunOptions &opt)
{
    ChannelConfig c = parse_channel(cfg::load_document(config), config.parent_path());
    if (!snr_override.empty())
    {
        for (double v : snr_override)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ConfigError("--snr: values must be >= 0");
        c.snr = snr_override;
    }
    const ChannelMatrix H = channel_matrix(*c.link, c.wave);
    const ChannelMatrix Hm = [&] {
        try
        {
            return mode_channel(H, c.modes);
        }
        catch (const Error &e)
        {
            if (e.kind() == ErrorKind::invalid_spec || e.kind() == ErrorKind::aliasing)
                throw ConfigError(std::string("config: ") + e.what());
            throw;
        }
    }();
    const Eigen::MatrixXd X = crosstalk_db(Hm);

    OutputSet files;
    files.add("channel_element.csv", io::channel_csv(H));
    files.add("channel_mode.csv", io::channel_csv(Hm));
    std::string xcsv = "rx_mode,tx_mode,db\r\n";
    double worst = crosstalk_floor_db;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j)
        {
            xcsv += std::to_string(c.modes[static_cast<std::size_t>(i)]) + ',' +
                    std::to_string(c.modes[static_cast<std::size_t>(j)]) + ',' + io::fmt_double(X(i, j)) + "\r\n";
            if (i != j)
                worst = std::max(worst, X(i, j));
        }
    files.add("crosstalk.csv", xcsv);

    std::string ccsv = "snr,streams,capacity\r\n";
    ojson caps = ojson::array();
    for (double snr : c.snr)
        for (int k = 1; k <= static_cast<int>(c.modes.size()); ++k)
        {
            const CapacityReport r = capacity(Hm, snr, k);
            ccsv += io::fmt_double(snr) + ',' + std::to_string(k) + ',' + io::fmt_double(r.capacity) + "\r\n";
            caps.push_back({{"snr", snr}, {"streams", k}, {"capacity", r.capacity}});
        }
    files.add("capacity.csv", ccsv);

    ojson results;
    results["modes"] = c.modes;
    results["singular_values"] = singular_values(Hm.values);
    results["normalization"] = CapacityReport::normalization;
    results["worst_offdiagonal_crosstalk_db"] = worst;
    results["frobenius_element"] = H.values.norm();
    results["frobenius_mode"] = Hm.values.norm();
    results["capacity"] = std::move(caps);
    finish_run(opt.out_dir, files, c.echo, std::move(results), opt.seed);
    return exit_ok;
}

// Plane wave E = E0 x exp(-ikz), B = (E0/c) y exp(-ikz).
inline FieldSample plane_wave(double amplitude, const Wave &wave, const Position3 &p)
{
    const cplx ph = std::polar(1.0, -wave.wavenumber() * p.z);
    return {{amplitude * ph, 0.0, 0.0}, {0.0, amplitude / constants::c0 * ph, 0.0}};
}

struct MomentumConfig
{
    Wave wave{1e9};
    double amplitude = 1.0;
    std::optional<LayoutChoice> layout;
    std::optional<Dipole> dipole;
    FarSphereSpec sphere;
    ojson echo;
};

inline MomentumConfig parse_momentum(const json &j, const std::filesystem::path &base_dir)
{
    const std::string w = "config";
    cfg::allow_keys(j, {"name", "frequency", "plane_wave", "layout", "radiator", "far_sphere"}, w);
    MomentumConfig c;
    c.wave = parse_wave(j, w);
    if (j.contains("plane_wave"))
    {
        cfg::allow_keys(j["plane_wave"], {"amplitude"}, w + ".plane_wave");
        c.amplitude = cfg::number(j["plane_wave"], "amplitude", w + ".plane_wave", 1.0);
        if (!(c.amplitude > 0.0))
            throw ConfigError(w + ".plane_wave.amplitude: must be > 0 (V/m)");
    }
    if (j.contains("layout"))
    {
        c.layout = parse_layout(j["layout"], w + ".layout", base_dir);
        if (!j.contains("radiator"))
            throw ConfigError(w + ".radiator: angular-momentum flux needs a dipole radiator");
        const RadiatorModel m = parse_radiator(j["radiator"], w + ".radiator", c.wave);
        if (!is_vectorial(m))
            throw ConfigError(w + ".radiator: unsupported-model: point sources carry no magnetic field, "
                                  "so angular-momentum flux is undefined; use a dipole radiator");
        c.dipole = std::get<Dipole>(m);
        const auto l = c.layout->layout.mode();
        if (l && static_cast<int>(c.layout->layout.size()) < min_elements(*l))
            throw ConfigError(w + ".layout: needs at least 2|l|+1 elements");
    }
    if (j.contains("far_sphere"))
    {
        const json &f = j["far_sphere"];
        cfg::allow_keys(f, {"radius", "n_theta", "n_phi"}, w + ".far_sphere");
        if (f.contains("radius"))
            c.sphere.radius = cfg::number(f, "radius", w + ".far_sphere");
        c.sphere.n_theta = cfg::integer(f, "n_theta", w + ".far_sphere", 128);
        c.sphere.n_phi = cfg::integer(f, "n_phi", w + ".far_sphere", 256);
        if (c.sphere.radius && *c.sphere.radius < 100.0 * c.wave.wavelength())
            throw ConfigError(w + ".far_sphere.radius: must be >= 100 wavelengths");
        if (c.sphere.n_theta < 1 || c.sphere.n_phi < 3)
            throw ConfigError(w + ".far_sphere: need n_theta >= 1 and n_phi >= 3");
    }
    c.echo = ojson(j);
    return c;
}

inline ojson vec_json(const Vec3 &v) { return ojson::array({v.x, v.y, v.z}); }

inline ojson momentum_results(const MomentumConfig &c)
{
    ojson res;
    // Plane-wave checks: pressure on an absorber, stress symmetry, source-free closed surface.
    const FieldSample f0 = plane_wave(c.amplitude, c.wave, {});
    const ComplexVec3 H0 = f0.B * cplx(1.0 / constants::mu0);
    const Vec3 S = poynting_avg(f0.E, H0);
    const Vec3 g = momentum_density(f0.E, f0.B);
    const StressTensor T = maxwell_stress_avg(f0.E, f0.B);
    const double intensity = S.z;
    const double pressure = -T.apply({0.0, 0.0, 1.0}).z;
    double asym = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            asym = std::max(asym, std::abs(T(i, j) - T(j, i)));

    const double lambda = c.wave.wavelength();
    const auto absorber = [&](const Position3 &p) {
        return p.z <= 0.0 ? plane_wave(c.amplitude, c.wave, p) : FieldSample{};
    };
    const double disk_r = lambda;
    const Vec3 disk_force = surface_force(absorber, make_capped_disk({}, disk_r, 16, 64));
    const Vec3 free_force = surface_force(
        [&](const Position3 &p) { return plane_wave(c.amplitude, c.wave, p); }, make_sphere({}, 2.0 * lambda, 32, 64));

    res["plane_wave"] = {{"amplitude", c.amplitude},
                         {"intensity", intensity},
                         {"poynting", vec_json(S)},
                         {"momentum_density", vec_json(g)},
                         {"pressure", pressure},
                         {"intensity_over_c", intensity / constants::c0},
                         {"stress_asymmetry", asym},
                         {"absorber_force", vec_json(disk_force)},
                         {"absorber_expected", intensity / constants::c0 * pi * disk_r * disk_r},
                         {"source_free_force", vec_json(free_force)}};

    if (c.layout)
    {
        const OamFlux flux = oam_flux(c.layout->layout, *c.dipole, c.wave, c.sphere);
        res["oam_flux"] = {{"layout_id", c.layout->id},
                           {"power", flux.power},
                           {"angular_flux", flux.angular_flux},
                           {"ratio", flux.ratio}};
    }
    return res;
}

inline int cmd_momentum(const std::filesystem::path &config, const RunOptions &opt)
{
    const MomentumConfig c = parse_momentum(cfg::load_document(config), config.parent_path());
    OutputSet files;
    finish_run(opt.out_dir, files, c.echo, momentum_results(c), opt.seed);
    return exit_ok;
}

// ------------------------------------------------------------------------
// Built-in scenarios

inline const std::vector<std::string> &builtin_scenarios()
{
    static const std::vector<std::string> names{"fig2-modes", "fig3-dipoles", "table1", "smartphone-3g",
                                                "smartphone-86g"};
    return names;
}

inline Scenario uca_scenario(int mode, int count, double frequency, RadiatorModel radiator, const std::string &name)
{
    const Wave wave(frequency);
    UcaSpec spec{count, wave.wavelength(), mode, {}, {0.0, 0.0, 1.0}};
    ojson echo = {{"type", "uca"}, {"count", count}, {"radius", spec.radius}, {"mode", mode}};
    Scenario s{name, wave, {build_uca(spec), "uca-N" + std::to_string(count) + "-l" + std::to_string(mode), echo}, PointSource{}, {}, {}, 8, {}};
    s.radiator = std::move(radiator);
    s.planes.push_back(default_plane(wave));
    s.l_max = std::max(8, std::abs(mode) + count);
    ojson rad = {{"type", "point"}};
    if (const auto *d = std::get_if<Dipole>(&s.radiator))
        rad = {{"type", "dipole"}, {"half_length", d->half_length}, {"axis", vec_json(d->axis)}};
    s.echo = {{"name", name}, {"frequency", frequency}, {"layout", echo}, {"radiator", rad}};
    return s;
}

inline int cmd_scenario(const std::string &name, const RunOptions &opt)
{
    OutputSet files;
    ojson results;
    ojson echo = {{"command", "scenario"}, {"name", name}};
    int code = exit_ok;
    if (name == "fig2-modes")
    {
        // Point-source circles at 10 GHz, radius one wavelength, N = 2l+1 (l = 6 extends the table).
        for (int l = 0; l <= 6; ++l)
        {
            const Scenario s = uca_scenario(l, min_elements(l), 10e9, PointSource{}, "l" + std::to_string(l));
            results["l" + std::to_string(l)] = run_scenario(s, files, "l" + std::to_string(l) + "/");
        }
    }
    else if (name == "fig3-dipoles")
    {
        // Dipole circles at 3 GHz; the dipole length is the longest that stays within 10% MSE
        // of the point-source array.
        const Wave wave(3e9);
        for (int l = 1; l <= 5; ++l)
        {
            const int n = min_elements(l);
            const ArrayLayout ref = build_uca({n, wave.wavelength(), l, {}, {0.0, 0.0, 1.0}});
            const DipoleFit fit = fit_dipole_length(ref, wave, 0.10);
            Dipole d;
            d.half_length = fit.half_length;
            d.axis = {1.0, 0.0, 0.0};
            const std::string key = "l" + std::to_string(l);
            const Scenario s = uca_scenario(l, n, wave.frequency(), d, key);
            ojson r = run_scenario(s, files, key + "/");
            r["dipole_fit"] = {{"half_length", fit.half_length},
                               {"half_length_wavelengths", fit.half_length / wave.wavelength()},
                               {"mse", fit.mse},
                               {"tolerance", 0.10}};
            results[key] = std::move(r);
        }
    }
    else if (name == "table1")
    {
        std::string failure;
        const auto rows = min_elements_table(5, Wave(table_frequency), &failure);
        files.add("min_elements.csv", min_elements_csv(rows));
        bool agree = failure.empty();
        ojson table = ojson::array();
        for (const auto &r : rows)
        {
            agree = agree && r.empirical && *r.empirical == r.rule;
            table.push_back({{"l", r.mode}, {"n_rule", r.rule},
                             {"n_empirical", r.empirical ? ojson(*r.empirical) : ojson(nullptr)}});
        }
        results["min_elements"] = std::move(table);
        results["agree"] = agree;
        code = agree ? exit_ok : exit_numeric;
    }
    else if (name == "smartphone-3g" || name == "smartphone-86g")
    {
        const double f = name == "smartphone-3g" ? 3e9 : 86e9;
        results["regular"] = smartphone_results(Placement::regular, f, files, "regular/");
        results["irregular"] = smartphone_results(Placement::irregular, f, files, "irregular/");
    }
    else
    {
        std::string known;
        for (const auto &n : builtin_scenarios())
            known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("unknown scenario \"" + name + "\" (known: " + known + ")");
    }
    finish_run(opt.out_dir, files, std::move(echo), std::move(results), opt.seed);
    return code;
}

} // namespace oamsim::cli

#endif
