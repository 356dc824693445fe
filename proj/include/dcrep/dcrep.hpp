#pragma once

#include "dcrep/asymptotics.hpp"
#include "dcrep/conditions.hpp"
#include "dcrep/dc_solver.hpp"
#include "dcrep/embeddings.hpp"
#include "dcrep/error.hpp"
#include "dcrep/gaussian_law.hpp"
#include "dcrep/numerics.hpp"
#include "dcrep/partitions.hpp"
#include "dcrep/report.hpp"
#include "dcrep/rng.hpp"
#include "dcrep/simplex.hpp"
#include "dcrep/special.hpp"
#include "dcrep/stable_law.hpp"
#include "dcrep/stats.hpp"
