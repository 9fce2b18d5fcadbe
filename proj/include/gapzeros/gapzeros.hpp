#pragma once

#include "gapzeros/coeffs.hpp"
#include "gapzeros/errors.hpp"
#include "gapzeros/gapdense.hpp"
#include "gapzeros/polyeval.hpp"
#include "gapzeros/support.hpp"
#include "gapzeros/theorems.hpp"
#include "gapzeros/tridiag.hpp"
