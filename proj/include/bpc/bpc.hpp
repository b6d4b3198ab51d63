#pragma once

#include "bpc/allocation.hpp"
#include "bpc/csv.hpp"
#include "bpc/majorization.hpp"
#include "bpc/oracle.hpp"
#include "bpc/parallel.hpp"
#include "bpc/rate.hpp"
#include "bpc/rng.hpp"
#include "bpc/scenario.hpp"
#include "bpc/sweep.hpp"
#include "bpc/verify.hpp"
