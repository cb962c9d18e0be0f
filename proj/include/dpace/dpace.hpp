#pragma once

// Umbrella header for the DP-AcE pipeline library.

#include "dpace/ampd.hpp"
#include "dpace/classifier.hpp"
#include "dpace/config.hpp"
#include "dpace/estimator.hpp"
#include "dpace/eval.hpp"
#include "dpace/features.hpp"
#include "dpace/filters.hpp"
#include "dpace/pipeline.hpp"
#include "dpace/preprocess.hpp"
#include "dpace/profiles.hpp"
#include "dpace/stream_io.hpp"
#include "dpace/svm.hpp"
#include "dpace/synth.hpp"
#include "dpace/trace.hpp"
#include "dpace/trendfilter.hpp"
