#pragma once

#include "gmulti/dendrogram.hpp"
#include "gmulti/detect.hpp"
#include "gmulti/distance.hpp"
#include "gmulti/edgecount.hpp"
#include "gmulti/errors.hpp"
#include "gmulti/graph.hpp"
#include "gmulti/intervals.hpp"
#include "gmulti/io.hpp"
#include "gmulti/matrix.hpp"
#include "gmulti/numeric.hpp"
#include "gmulti/parallel.hpp"
#include "gmulti/prune.hpp"
#include "gmulti/rng.hpp"
#include "gmulti/search.hpp"
#include "gmulti/simlab.hpp"
