#pragma once

// Umbrella header: scoring, metrics, feasibility, baselines, optimization,
// and the config-driven pipeline.

#include "dtai/baselines.hpp"
#include "dtai/config.hpp"
#include "dtai/csv.hpp"
#include "dtai/dataset.hpp"
#include "dtai/demo.hpp"
#include "dtai/error.hpp"
#include "dtai/feasibility.hpp"
#include "dtai/metrics.hpp"
#include "dtai/optimize.hpp"
#include "dtai/pipeline.hpp"
#include "dtai/report.hpp"
#include "dtai/rng.hpp"
#include "dtai/score.hpp"
#include "dtai/types.hpp"
