#pragma once

#include "sqfree/arith/factor.hpp"
#include "sqfree/arith/montgomery.hpp"
#include "sqfree/arith/primality.hpp"
#include "sqfree/arith/sieve.hpp"
