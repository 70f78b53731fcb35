#pragma once

// Umbrella header.

#include "cfzeta/bigint.hpp"
#include "cfzeta/cache.hpp"
#include "cfzeta/cf.hpp"
#include "cfzeta/errors.hpp"
#include "cfzeta/io.hpp"
#include "cfzeta/mobius.hpp"
#include "cfzeta/parallel.hpp"
#include "cfzeta/rational.hpp"
#include "cfzeta/reduce.hpp"
#include "cfzeta/spectrum.hpp"
#include "cfzeta/sums.hpp"
#include "cfzeta/version.hpp"
#include "cfzeta/zerofind.hpp"
