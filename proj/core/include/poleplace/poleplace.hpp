#pragma once

#include "poleplace/error.hpp"
#include "poleplace/linalg.hpp"
#include "poleplace/placement.hpp"
#include "poleplace/poly.hpp"
#include "poleplace/spectrum.hpp"
#include "poleplace/subspace.hpp"
#include "poleplace/system.hpp"
#include "poleplace/verify.hpp"
