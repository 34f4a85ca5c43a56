#pragma once

#include "scissor/analysis.hpp"
#include "scissor/bwf_engine.hpp"
#include "scissor/constants.hpp"
#include "scissor/core_optics.hpp"
#include "scissor/errors.hpp"
#include "scissor/io.hpp"
#include "scissor/limits_fgr.hpp"
#include "scissor/phase_matching.hpp"
#include "scissor/pump_pulse.hpp"
#include "scissor/quadrature.hpp"
