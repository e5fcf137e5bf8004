#pragma once

#include "commdet/centrality.hpp"
#include "commdet/distance.hpp"
#include "commdet/falsify.hpp"
#include "commdet/graph.hpp"
#include "commdet/hierarchy.hpp"
#include "commdet/io.hpp"
#include "commdet/parallel.hpp"
#include "commdet/pipeline.hpp"
#include "commdet/propagation.hpp"
#include "commdet/report.hpp"
#include "commdet/roles.hpp"
