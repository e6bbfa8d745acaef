#pragma once

// Umbrella header.

#include "homsense/cli.hpp"
#include "homsense/common.hpp"
#include "homsense/experiments.hpp"
#include "homsense/fisher.hpp"
#include "homsense/geometry.hpp"
#include "homsense/mle.hpp"
#include "homsense/model.hpp"
#include "homsense/oracle.hpp"
#include "homsense/quadrature.hpp"
#include "homsense/rng.hpp"
#include "homsense/sampler.hpp"
