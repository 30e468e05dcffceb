#pragma once

// Umbrella header for the whole library.

#include "dimensions.hpp"
#include "htype.hpp"
#include "quad.hpp"
#include "nagroup.hpp"
#include "poisson.hpp"
#include "spherical.hpp"
#include "abel.hpp"
#include "meanvalue.hpp"
#include "slowdecrease.hpp"
#include "deconvolve.hpp"
#include "acceptance.hpp"
#include "config.hpp"
