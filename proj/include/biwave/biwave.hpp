#pragma once

// Umbrella header.

#include "biwave/core.hpp"
#include "biwave/params.hpp"
#include "biwave/field.hpp"
#include "biwave/grid.hpp"
#include "biwave/solution.hpp"
#include "biwave/quadrature.hpp"
#include "biwave/spherical_means.hpp"
#include "biwave/solvers.hpp"
#include "biwave/duhamel.hpp"
#include "biwave/spectral.hpp"
#include "biwave/verification.hpp"
#include "biwave/elasticity.hpp"
#include "biwave/scenario.hpp"
#include "biwave/parallel.hpp"
