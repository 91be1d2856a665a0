// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_IO_HPP
#define OAMSIM_IO_HPP

// Text and image encodings for layouts, field maps, mode spectra and channel matrices.
// CSV follows RFC 4180 (CRLF records, header row, '.' decimal separator); doubles are
// printed with 17 significant digits so they round-trip.

#include "oamsim/array_model.hpp"
#include "oamsim/core.hpp"
#include "oamsim/field_engine.hpp"
#include "oamsim/oam_analysis.hpp"
#include "oamsim/oam_channel.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace oamsim::io
{

inline std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ------------------------------------------------------------------------
// CSV

inline std::string field_map_csv(const FieldMap &map)
{
    std::string out = "x,y,re,im\r\n";
    for (std::size_t i = 0; i < map.values.size(); ++i)
    {
        const Position3 p = map.grid.node(i);
        out += fmt_double(p.x) + ',' + fmt_double(p.y) + ',';
        if (map.valid[i])
            out += fmt_double(map.values[i].real()) + ',' + fmt_double(map.values[i].imag());
        else
            out += "nan,nan";
        out += "\r\n";
    }
    return out;
}

inline std::string mode_spectrum_csv(const ModeSpectrum &spec)
{
    std::string out = "l,re,im,power\r\n";
    for (int l = -spec.l_max; l <= spec.l_max; ++l)
    {
        const cplx c = spec.coefficient(l);
        out += std::to_string(l) + ',' + fmt_double(c.real()) + ',' + fmt_double(c.imag()) + ',' +
               fmt_double(spec.fraction(l)) + "\r\n";
    }
    return out;
}

inline std::string channel_csv(const ChannelMatrix &H)
{
    std::string out = "m,n,re,im\r\n";
    for (Eigen::Index m = 0; m < H.values.rows(); ++m)
        for (Eigen::Index n = 0; n < H.values.cols(); ++n)
            out += std::to_string(m) + ',' + std::to_string(n) + ',' + fmt_double(H.values(m, n).real()) + ',' +
                   fmt_double(H.values(m, n).imag()) + "\r\n";
    return out;
}

// ------------------------------------------------------------------------
// PGM (binary P5, maxval 255, rows from minimum y)

inline std::string pgm(int width, int height, const std::vector<std::uint8_t> &pixels)
{
    std::string out = "P5\n" + std::to_string(width) + ' ' + std::to_string(height) + "\n255\n";
    out.append(reinterpret_cast<const char *>(pixels.data()), pixels.size());
    return out;
}

/// Phase (-pi, pi] mapped linearly onto 0..255; invalid nodes are 0.
inline std::string phase_pgm(const FieldMap &map)
{
    const std::vector<double> ph = extract_phase_map(map);
    std::vector<std::uint8_t> px(ph.size(), 0);
    for (std::size_t i = 0; i < ph.size(); ++i)
        if (map.valid[i])
            px[i] = static_cast<std::uint8_t>(std::lround((ph[i] + pi) / two_pi * 255.0));
    return pgm(map.grid.samples, map.grid.samples, px);
}

/// Magnitude normalized to the map maximum; invalid nodes are 0.
inline std::string magnitude_pgm(const FieldMap &map)
{
    const std::vector<double> mag = extract_magnitude_map(map);
    const double mmax = max_magnitude(map);
    std::vector<std::uint8_t> px(mag.size(), 0);
    if (mmax > 0.0)
        for (std::size_t i = 0; i < mag.size(); ++i)
            if (map.valid[i])
                px[i] = static_cast<std::uint8_t>(std::lround(std::min(1.0, mag[i] / mmax) * 255.0));
    return pgm(map.grid.samples, map.grid.samples, px);
}

// ------------------------------------------------------------------------
// Layout documents
//
//   {"mode": 1 | null,
//    "elements": [{"position": [x, y, z], "amplitude": a, "phase": radians}, ...]}

inline nlohmann::ordered_json layout_to_json(const ArrayLayout &layout)
{
    nlohmann::ordered_json j;
    j["mode"] = layout.mode() ? nlohmann::ordered_json(*layout.mode()) : nlohmann::ordered_json(nullptr);
    auto &els = j["elements"] = nlohmann::ordered_json::array();
    for (const auto &el : layout.elements())
    {
        nlohmann::ordered_json e;
        e["position"] = {el.position.x, el.position.y, el.position.z};
        e["amplitude"] = el.excitation.amplitude();
        e["phase"] = el.excitation.phase();
        els.push_back(std::move(e));
    }
    return j;
}

namespace detail
{
inline void reject_unknown_keys(const nlohmann::json &j, std::initializer_list<const char *> allowed,
                                const std::string &where)
{
    if (!j.is_object())
        throw Error(ErrorKind::invalid_spec, where + ": expected an object");
    for (const auto &item : j.items())
    {
        bool ok = false;
        for (const char *k : allowed)
            ok = ok || item.key() == k;
        if (!ok)
            throw Error(ErrorKind::invalid_spec, where + "." + item.key() + ": unknown key");
    }
}

inline double number_at(const nlohmann::json &j, const std::string &where)
{
    if (!j.is_number())
        throw Error(ErrorKind::invalid_spec, where + ": expected a number");
    return j.get<double>();
}
} // namespace detail

inline ArrayLayout layout_from_json(const nlohmann::json &j, const std::string &where = "layout")
{
    detail::reject_unknown_keys(j, {"mode", "elements"}, where);
    std::optional<int> mode;
    if (j.contains("mode") && !j["mode"].is_null())
    {
        if (!j["mode"].is_number_integer())
            throw Error(ErrorKind::invalid_spec, where + ".mode: expected an integer or null");
        mode = j["mode"].get<int>();
    }
    if (!j.contains("elements") || !j["elements"].is_array())
        throw Error(ErrorKind::invalid_spec, where + ".elements: expected an array");
    std::vector<ArrayElement> elements;
    std::size_t idx = 0;
    for (const auto &e : j["elements"])
    {
        const std::string at = where + ".elements[" + std::to_string(idx++) + "]";
        detail::reject_unknown_keys(e, {"position", "amplitude", "phase"}, at);
        if (!e.contains("position") || !e["position"].is_array() || e["position"].size() != 3)
            throw Error(ErrorKind::invalid_spec, at + ".position: expected [x, y, z]");
        const Position3 p{detail::number_at(e["position"][0], at + ".position[0]"),
                          detail::number_at(e["position"][1], at + ".position[1]"),
                          detail::number_at(e["position"][2], at + ".position[2]")};
        const double amp = e.contains("amplitude") ? detail::number_at(e["amplitude"], at + ".amplitude") : 1.0;
        const double ph = e.contains("phase") ? detail::number_at(e["phase"], at + ".phase") : 0.0;
        elements.push_back({p, Excitation(amp, ph)});
    }
    return ArrayLayout(std::move(elements), mode);
}

} // namespace oamsim::io

#endif
