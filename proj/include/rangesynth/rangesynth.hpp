#ifndef RANGESYNTH_RANGESYNTH_HPP
#define RANGESYNTH_RANGESYNTH_HPP

#include "rangesynth/anon.hpp"
#include "rangesynth/cluster.hpp"
#include "rangesynth/common.hpp"
#include "rangesynth/csv.hpp"
#include "rangesynth/forest.hpp"
#include "rangesynth/harvest.hpp"
#include "rangesynth/metrics.hpp"
#include "rangesynth/microdata.hpp"
#include "rangesynth/privacy.hpp"
#include "rangesynth/schema.hpp"
#include "rangesynth/snapping.hpp"
#include "rangesynth/synthesis.hpp"
#include "rangesynth/value.hpp"

#endif
