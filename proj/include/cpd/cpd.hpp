#pragma once

#include "cpd/energy.hpp"
#include "cpd/errors.hpp"
#include "cpd/geometry.hpp"
#include "cpd/lloyd.hpp"
#include "cpd/oracle.hpp"
#include "cpd/rng.hpp"
#include "cpd/search.hpp"
#include "cpd/serialize.hpp"
#include "cpd/svg.hpp"
#include "cpd/transportation.hpp"
