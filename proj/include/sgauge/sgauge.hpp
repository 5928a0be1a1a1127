#pragma once

#include "sgauge/action.hpp"
#include "sgauge/error.hpp"
#include "sgauge/gauge.hpp"
#include "sgauge/harness.hpp"
#include "sgauge/io.hpp"
#include "sgauge/lie.hpp"
#include "sgauge/mesh.hpp"
#include "sgauge/noether.hpp"
#include "sgauge/quadrature.hpp"
#include "sgauge/random.hpp"
#include "sgauge/whitney.hpp"
