// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_OAMSIM_HPP
#define OAMSIM_OAMSIM_HPP

#include "oamsim/array_model.hpp"
#include "oamsim/core.hpp"
#include "oamsim/dipole_fit.hpp"
#include "oamsim/em_momentum.hpp"
#include "oamsim/field_engine.hpp"
#include "oamsim/oam_analysis.hpp"
#include "oamsim/oam_channel.hpp"
#include "oamsim/quadrature.hpp"
#include "oamsim/radiators.hpp"

#endif
