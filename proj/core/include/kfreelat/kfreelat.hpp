#pragma once

#include "kfreelat/arithmetic.hpp"
#include "kfreelat/csv.hpp"
#include "kfreelat/diffraction.hpp"
#include "kfreelat/dynamics.hpp"
#include "kfreelat/errors.hpp"
#include "kfreelat/json_io.hpp"
#include "kfreelat/kfree.hpp"
#include "kfreelat/lattice.hpp"
#include "kfreelat/numeric.hpp"
#include "kfreelat/parallel.hpp"
#include "kfreelat/patches.hpp"
#include "kfreelat/types.hpp"
