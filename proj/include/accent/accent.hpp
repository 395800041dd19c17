#pragma once

#include "accent/coefficients.hpp"
#include "accent/dynamics.hpp"
#include "accent/entanglement.hpp"
#include "accent/field_correlations.hpp"
#include "accent/io.hpp"
#include "accent/sweeps.hpp"
#include "accent/types.hpp"
#include "accent/validation.hpp"
#include "accent/version.hpp"
#include "accent/xstate.hpp"
