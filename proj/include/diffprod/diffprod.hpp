#pragma once

#include "diffprod/bigint.hpp"
#include "diffprod/errors.hpp"
#include "diffprod/rational.hpp"
#include "diffprod/recurrence.hpp"
#include "diffprod/report_io.hpp"
#include "diffprod/residue_set.hpp"
#include "diffprod/search.hpp"
#include "diffprod/set_io.hpp"
#include "diffprod/setcore.hpp"
#include "diffprod/window_set.hpp"
