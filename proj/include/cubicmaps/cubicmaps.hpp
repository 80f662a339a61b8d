#pragma once

#include "cubicmaps/classifier.hpp"
#include "cubicmaps/core.hpp"
#include "cubicmaps/entropy.hpp"
#include "cubicmaps/grid.hpp"
#include "cubicmaps/hyperbolic.hpp"
#include "cubicmaps/io.hpp"
#include "cubicmaps/loci.hpp"
#include "cubicmaps/prototypes.hpp"
#include "cubicmaps/raster.hpp"
#include "cubicmaps/roots.hpp"
#include "cubicmaps/version.hpp"
