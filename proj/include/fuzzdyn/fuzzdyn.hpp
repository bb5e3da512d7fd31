#pragma once

#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/limits.hpp"
#include "fuzzdyn/rational.hpp"
#include "fuzzdyn/spaces.hpp"
#include "fuzzdyn/families.hpp"
#include "fuzzdyn/symbolic.hpp"
#include "fuzzdyn/hyperspace.hpp"
#include "fuzzdyn/fuzzy.hpp"
#include "fuzzdyn/catalog.hpp"
#include "fuzzdyn/analysis/verdict.hpp"
#include "fuzzdyn/analysis/returns.hpp"
#include "fuzzdyn/analysis/transitivity.hpp"
#include "fuzzdyn/analysis/metric.hpp"
#include "fuzzdyn/analysis/recurrence.hpp"
#include "fuzzdyn/analysis/theorems.hpp"
#include "fuzzdyn/io.hpp"
