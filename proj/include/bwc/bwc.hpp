#pragma once

// Umbrella header for the brainwave classification library.

#include "bwc/rng.hpp"
#include "bwc/text.hpp"

#include "bwc/conv/frontend.hpp"
#include "bwc/wavelet/coiflet.hpp"
#include "bwc/wavelet/dwt.hpp"
#include "bwc/wavelet/features.hpp"

#include "bwc/eeg/types.hpp"
#include "bwc/eeg/csv.hpp"
#include "bwc/eeg/prepare.hpp"
#include "bwc/eeg/synthetic.hpp"

#include "bwc/gp/expression.hpp"
#include "bwc/gp/alps.hpp"

#include "bwc/cnn/baseline.hpp"

#include "bwc/metrics/confusion.hpp"
#include "bwc/metrics/report.hpp"

#include "bwc/model/pipeline.hpp"
#include "bwc/model/artifact.hpp"
