#pragma once

#include "charsum/character.hpp"
#include "charsum/common.hpp"
#include "charsum/cubic.hpp"
#include "charsum/energy.hpp"
#include "charsum/field.hpp"
#include "charsum/poly.hpp"
#include "charsum/report.hpp"
#include "charsum/sets.hpp"
#include "charsum/sums.hpp"
#include "charsum/transform.hpp"
#include "charsum/verify.hpp"
#include "charsum/weil.hpp"
