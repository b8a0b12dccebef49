#pragma once

// Umbrella header for the library (the CLI layer lives in dsikit/cli.hpp).
#include "dsikit/clustering.hpp"
#include "dsikit/dataset.hpp"
#include "dsikit/evaluation.hpp"
#include "dsikit/indices.hpp"
#include "dsikit/pairwise.hpp"
#include "dsikit/parallel.hpp"
#include "dsikit/report_io.hpp"
#include "dsikit/separability.hpp"
#include "dsikit/types.hpp"
#include "dsikit/version.hpp"
