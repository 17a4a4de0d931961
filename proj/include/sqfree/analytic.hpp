#pragma once

#include "sqfree/analytic/euler.hpp"
#include "sqfree/analytic/perron.hpp"
#include "sqfree/analytic/quadrature.hpp"
#include "sqfree/analytic/zeta.hpp"
#include "sqfree/constants.hpp"
