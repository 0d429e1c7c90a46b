/**
 * @file incluso.hpp
 * @brief Umbrella header.
 */
#pragma once

#include "incluso/errors.hpp"
#include "incluso/expr.hpp"
#include "incluso/inclusion.hpp"
#include "incluso/interval.hpp"
#include "incluso/linalg.hpp"
#include "incluso/lohner.hpp"
#include "incluso/models.hpp"
#include "incluso/poincare.hpp"
#include "incluso/simulate.hpp"
#include "incluso/system.hpp"
#include "incluso/taylor.hpp"
