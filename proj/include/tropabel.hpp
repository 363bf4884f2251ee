#pragma once
// Umbrella header.

#include "tropabel/core.hpp"
#include "tropabel/graph.hpp"
#include "tropabel/flow.hpp"
#include "tropabel/divisor.hpp"
#include "tropabel/cone.hpp"
#include "tropabel/abel_cone.hpp"
#include "tropabel/semigroup.hpp"
#include "tropabel/tropical_abel.hpp"
#include "tropabel/json_io.hpp"
#include "tropabel/verify.hpp"
#include "tropabel/report.hpp"
