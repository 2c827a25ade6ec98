#pragma once

#include "rsat/analytics.hpp"
#include "rsat/certificates.hpp"
#include "rsat/error.hpp"
#include "rsat/formula.hpp"
#include "rsat/rng.hpp"
#include "rsat/sampler.hpp"
#include "rsat/solver.hpp"
#include "rsat/sweep.hpp"
#include "rsat/text_format.hpp"
#include "rsat/threshold.hpp"
