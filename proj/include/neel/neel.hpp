#pragma once

#include "neel/grid.hpp"
#include "neel/fractional.hpp"
#include "neel/energy.hpp"
#include "neel/minimizer.hpp"
#include "neel/green.hpp"
#include "neel/analysis.hpp"
#include "neel/io.hpp"
