#pragma once

#include "utvpi/bound.hpp"
#include "utvpi/closure.hpp"
#include "utvpi/constraints.hpp"
#include "utvpi/graph.hpp"
#include "utvpi/oracle.hpp"
#include "utvpi/rational.hpp"
