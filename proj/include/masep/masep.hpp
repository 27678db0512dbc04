#pragma once

#include "core.hpp"
#include "formula_common.hpp"
#include "identities.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "rainbow.hpp"
#include "rng.hpp"
#include "separable.hpp"
#include "two_tasep.hpp"
#include "vertex.hpp"
#include "vertex_suite.hpp"
#include "wall.hpp"
