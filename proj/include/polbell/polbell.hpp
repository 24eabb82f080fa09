#pragma once

#include "polbell/bell.hpp"
#include "polbell/csv.hpp"
#include "polbell/error.hpp"
#include "polbell/lhv.hpp"
#include "polbell/linalg.hpp"
#include "polbell/optics.hpp"
#include "polbell/prep.hpp"
#include "polbell/state.hpp"
#include "polbell/sweep.hpp"
#include "polbell/tomo.hpp"
