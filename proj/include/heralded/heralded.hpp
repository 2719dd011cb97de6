#pragma once

#include "heralded/analytics.hpp"
#include "heralded/dynamics.hpp"
#include "heralded/errors.hpp"
#include "heralded/fock.hpp"
#include "heralded/heralding.hpp"
#include "heralded/observables.hpp"
#include "heralded/phase.hpp"
#include "heralded/scenario.hpp"
