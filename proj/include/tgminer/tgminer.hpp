#pragma once

// Everything except the JSON report helpers (report.hpp) and the reference
// oracles (oracle.hpp).

#include "tgminer/error.hpp"
#include "tgminer/label.hpp"
#include "tgminer/graph.hpp"
#include "tgminer/subiso.hpp"
#include "tgminer/growth.hpp"
#include "tgminer/scoring.hpp"
#include "tgminer/pruning.hpp"
#include "tgminer/miner.hpp"
#include "tgminer/matcher.hpp"
#include "tgminer/datakit.hpp"
