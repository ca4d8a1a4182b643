#pragma once

#include "bfcausal/boss.hpp"
#include "bfcausal/chi_square.hpp"
#include "bfcausal/csv.hpp"
#include "bfcausal/data_table.hpp"
#include "bfcausal/driver.hpp"
#include "bfcausal/embedding.hpp"
#include "bfcausal/errors.hpp"
#include "bfcausal/graph.hpp"
#include "bfcausal/graph_io.hpp"
#include "bfcausal/legendre.hpp"
#include "bfcausal/lrt.hpp"
#include "bfcausal/metrics.hpp"
#include "bfcausal/orientation.hpp"
#include "bfcausal/pcmax.hpp"
#include "bfcausal/rng.hpp"
#include "bfcausal/score.hpp"
#include "bfcausal/simulate.hpp"
