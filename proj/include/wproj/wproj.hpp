#pragma once

#include "wproj/error.hpp"
#include "wproj/fixtures.hpp"
#include "wproj/hull.hpp"
#include "wproj/lattice.hpp"
#include "wproj/measures.hpp"
#include "wproj/projection.hpp"
#include "wproj/weakot.hpp"
