#pragma once

#include "rank16/arith.hpp"
#include "rank16/classgroup.hpp"
#include "rank16/experiments.hpp"
#include "rank16/gauss2adic.hpp"
#include "rank16/realquad.hpp"
#include "rank16/sievecounts.hpp"
