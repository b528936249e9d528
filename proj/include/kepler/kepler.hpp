#pragma once

#include "kepler/core.hpp"
#include "kepler/jordan.hpp"
#include "kepler/partition.hpp"
#include "kepler/kernel.hpp"
#include "kepler/blowup.hpp"
#include "kepler/radial.hpp"
#include "kepler/verify.hpp"
#include "kepler/report.hpp"
