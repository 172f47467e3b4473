// Convenience umbrella for the whole library.

#pragma once

#include "splitreduc/estimate.hpp"
#include "splitreduc/expr_io.hpp"
#include "splitreduc/polynomial.hpp"
#include "splitreduc/quadratize.hpp"
#include "splitreduc/ramsey.hpp"
#include "splitreduc/solve.hpp"
#include "splitreduc/split.hpp"
