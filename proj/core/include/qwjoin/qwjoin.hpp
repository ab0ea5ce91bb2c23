#pragma once

#include "qwjoin/bounds.hpp"
#include "qwjoin/errors.hpp"
#include "qwjoin/exact_arith.hpp"
#include "qwjoin/graph.hpp"
#include "qwjoin/io.hpp"
#include "qwjoin/spectral.hpp"
#include "qwjoin/state_transfer.hpp"
#include "qwjoin/tolerances.hpp"
#include "qwjoin/walk.hpp"
