#pragma once

#include "lmoment/arith.hpp"
#include "lmoment/averages.hpp"
#include "lmoment/characters.hpp"
#include "lmoment/constants.hpp"
#include "lmoment/counting.hpp"
#include "lmoment/harmonic.hpp"
#include "lmoment/lvalues.hpp"
#include "lmoment/report.hpp"
#include "lmoment/summation.hpp"
