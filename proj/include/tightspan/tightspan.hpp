#pragma once

// Umbrella header: makespan minimization on unrelated parallel machines
// with certified per-instance bounds.

#include "tightspan/balance.hpp"
#include "tightspan/core.hpp"
#include "tightspan/driver.hpp"
#include "tightspan/errors.hpp"
#include "tightspan/generator.hpp"
#include "tightspan/io.hpp"
#include "tightspan/oracle.hpp"
#include "tightspan/rational.hpp"
#include "tightspan/report.hpp"
#include "tightspan/restricted.hpp"
#include "tightspan/rounding.hpp"
#include "tightspan/simplex.hpp"
