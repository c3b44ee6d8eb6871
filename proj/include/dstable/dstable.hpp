#pragma once

#include "dstable/error.hpp"
#include "dstable/genfun.hpp"
#include "dstable/params.hpp"
#include "dstable/pmf.hpp"
#include "dstable/rng.hpp"
#include "dstable/sampler.hpp"
#include "dstable/stats.hpp"
