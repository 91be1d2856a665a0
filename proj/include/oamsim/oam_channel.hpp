// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_OAM_CHANNEL_HPP
#define OAMSIM_OAM_CHANNEL_HPP

#include "oamsim/array_model.hpp"
#include "oamsim/core.hpp"
#include "oamsim/oam_analysis.hpp"
#include "oamsim/radiators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace oamsim
{

struct LinkSpec
{
    ArrayLayout tx;
    ArrayLayout rx;               // receive probe points, in the rx local frame
    double separation = 0.0;      // D, m, along +z
    double lateral_offset = 0.0;  // m, along +x
    double tilt = 0.0;            // rad, rx rotated about its local x axis
};

enum class Basis
{
    element,
    mode,
};

struct ChannelMatrix
{
    Eigen::MatrixXcd values; // rows: rx, cols: tx
    Basis basis = Basis::element;
    std::vector<double> tx_azimuths; // element azimuths in each array's local frame
    std::vector<double> rx_azimuths;
    std::vector<int> modes;          // mode-basis labels, both sides
};

// Global position of an rx point: rotate about x by tilt, then translate by (offset, 0, D).
inline Position3 place_rx(const LinkSpec &link, const Position3 &p)
{
    const double c = std::cos(link.tilt), s = std::sin(link.tilt);
    return {p.x + link.lateral_offset, c * p.y - s * p.z, s * p.y + c * p.z + link.separation};
}

namespace detail
{
inline std::vector<double> azimuths(const ArrayLayout &layout)
{
    std::vector<double> az;
    for (const auto &el : layout.elements())
        az.push_back(std::atan2(el.position.y, el.position.x));
    return az;
}
} // namespace detail

/// H[m][n] = exp(-i k R_mn) / R_mn from tx element n to rx point m.
inline ChannelMatrix channel_matrix(const LinkSpec &link, const Wave &wave)
{
    if (!(link.separation > 0.0) || !std::isfinite(link.separation))
        throw Error(ErrorKind::invalid_spec, "link separation must be > 0");
    if (!std::isfinite(link.lateral_offset) || !std::isfinite(link.tilt))
        throw Error(ErrorKind::invalid_spec, "link offset and tilt must be finite");
    const auto nr = static_cast<Eigen::Index>(link.rx.size());
    const auto nt = static_cast<Eigen::Index>(link.tx.size());
    ChannelMatrix H;
    H.values.resize(nr, nt);
    for (Eigen::Index m = 0; m < nr; ++m)
    {
        const Position3 q = place_rx(link, link.rx[static_cast<std::size_t>(m)].position);
        for (Eigen::Index n = 0; n < nt; ++n)
            H.values(m, n) = green(link.tx[static_cast<std::size_t>(n)].position, q, wave);
    }
    H.tx_azimuths = detail::azimuths(link.tx);
    H.rx_azimuths = detail::azimuths(link.rx);
    return H;
}

namespace detail
{
// Columns (1/sqrt N) exp(-i l phi_n): the circular-array feed vector of mode l.
inline Eigen::MatrixXcd mode_matrix(const std::vector<double> &az, const std::vector<int> &modes)
{
    const auto n = static_cast<Eigen::Index>(az.size());
    Eigen::MatrixXcd F(n, static_cast<Eigen::Index>(modes.size()));
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (std::size_t j = 0; j < modes.size(); ++j)
            F(i, static_cast<Eigen::Index>(j)) = s * mode_phasor(modes[j], az[static_cast<std::size_t>(i)]);
    return F;
}

inline void require_uniform_ring(const std::vector<double> &az)
{
    const std::size_t n = az.size();
    for (std::size_t i = 1; i < n; ++i)
    {
        const double step = wrap_phase(az[i] - az[i - 1]);
        if (std::abs(step - two_pi / static_cast<double>(n)) > 1e-9)
            throw Error(ErrorKind::invalid_spec, "array is not a uniform circular array in index order");
    }
}
} // namespace detail

/// H_mode = F_rx^H H F_tx with unitary azimuthal-mode matrices.
inline ChannelMatrix mode_channel(const ChannelMatrix &H, const std::vector<int> &modes)
{
    if (H.basis != Basis::element)
        throw Error(ErrorKind::invalid_spec, "mode transform needs an element-basis channel");
    const std::size_t nt = H.tx_azimuths.size();
    const std::size_t nr = H.rx_azimuths.size();
    if (nt != nr)
        throw Error(ErrorKind::invalid_spec, "mode transform needs equal element counts");
    if (modes.empty())
        throw Error(ErrorKind::invalid_spec, "no modes requested");
    detail::require_uniform_ring(H.tx_azimuths);
    detail::require_uniform_ring(H.rx_azimuths);
    const int n = static_cast<int>(nt);
    for (int l : modes)
        if (2 * std::abs(l) > n - 1)
            throw Error(ErrorKind::aliasing, "mode " + std::to_string(l) + " is outside the alias-free range of " +
                                                 std::to_string(n) + " elements");
    auto sorted = modes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error(ErrorKind::invalid_spec, "duplicate mode in request");

    ChannelMatrix out;
    out.values = detail::mode_matrix(H.rx_azimuths, modes).adjoint() * H.values *
                 detail::mode_matrix(H.tx_azimuths, modes);
    out.basis = Basis::mode;
    out.tx_azimuths = H.tx_azimuths;
    out.rx_azimuths = H.rx_azimuths;
    out.modes = modes;
    return out;
}

inline constexpr double crosstalk_floor_db = -300.0;

/// (i, j) -> 20 log10(|H_ij| / |H_jj|), floored at -300 dB.
inline Eigen::MatrixXd crosstalk_db(const ChannelMatrix &H)
{
    if (H.basis != Basis::mode)
        throw Error(ErrorKind::invalid_spec, "crosstalk is defined on a mode-basis channel");
    const Eigen::Index n = H.values.cols();
    if (H.values.rows() != n)
        throw Error(ErrorKind::invalid_spec, "mode channel must be square");
    Eigen::MatrixXd X(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        const double d = std::abs(H.values(j, j));
        if (!(d > 0.0))
            throw Error(ErrorKind::degenerate_mode, "mode channel has a zero diagonal entry at " + std::to_string(j));
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double r = std::abs(H.values(i, j)) / d;
            X(i, j) = r > 0.0 ? std::max(crosstalk_floor_db, 20.0 * std::log10(r)) : crosstalk_floor_db;
        }
        X(j, j) = 0.0;
    }
    return X;
}

struct CapacityReport
{
    std::vector<double> singular_values; // raw, descending
    double snr = 0.0;
    int streams = 0;
    double capacity = 0.0; // bit/s/Hz
    static constexpr const char *normalization = "singular values divided by the largest";
};

inline std::vector<double> singular_values(const Eigen::MatrixXcd &H)
{
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H);
    const auto &s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

/// Equal-power capacity sum_{i<streams} log2(1 + (snr/streams) (s_i / s_max)^2).
inline CapacityReport capacity(const ChannelMatrix &H, double snr, int streams)
{
    if (!(snr >= 0.0) || !std::isfinite(snr))
        throw Error(ErrorKind::invalid_spec, "snr must be >= 0");
    const auto rank_bound = static_cast<int>(std::min(H.values.rows(), H.values.cols()));
    if (streams < 1 || streams > rank_bound)
        throw Error(ErrorKind::invalid_spec, "streams must be in [1, " + std::to_string(rank_bound) + "]");

    CapacityReport rep;
    rep.singular_values = singular_values(H.values);
    rep.snr = snr;
    rep.streams = streams;
    const double smax = rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
    if (smax > 0.0)
    {
        for (int i = 0; i < streams; ++i)
        {
            const double g = rep.singular_values[static_cast<std::size_t>(i)] / smax;
            rep.capacity += std::log2(1.0 + snr / streams * g * g);
        }
    }
    return rep;
}

} // namespace oamsim

#endif
