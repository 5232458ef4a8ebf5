#pragma once

#include "degspec/coefficients.hpp"
#include "degspec/determinant.hpp"
#include "degspec/errors.hpp"
#include "degspec/integrator.hpp"
#include "degspec/oracles.hpp"
#include "degspec/parity.hpp"
#include "degspec/spectrum.hpp"
