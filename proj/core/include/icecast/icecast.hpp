#pragma once

#include "icecast/dates.hpp"
#include "icecast/error.hpp"
#include "icecast/fetch.hpp"
#include "icecast/fit.hpp"
#include "icecast/grid.hpp"
#include "icecast/ingest.hpp"
#include "icecast/kalman.hpp"
#include "icecast/model_io.hpp"
#include "icecast/numfmt.hpp"
#include "icecast/risk.hpp"
#include "icecast/route.hpp"
#include "icecast/simulate.hpp"
#include "icecast/store.hpp"
