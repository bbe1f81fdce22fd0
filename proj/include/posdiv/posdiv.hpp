#pragma once

// Umbrella header for the positional discourse divergence toolkit.

#include "posdiv/agreement.hpp"
#include "posdiv/binning.hpp"
#include "posdiv/corpus.hpp"
#include "posdiv/errors.hpp"
#include "posdiv/metrics.hpp"
#include "posdiv/perturb.hpp"
#include "posdiv/rng.hpp"
#include "posdiv/schema.hpp"
#include "posdiv/version.hpp"
