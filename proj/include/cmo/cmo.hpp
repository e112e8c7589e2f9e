#pragma once

#include "cmo/geometry.hpp"
#include "cmo/integrals.hpp"
#include "cmo/morrey.hpp"
#include "cmo/numerics.hpp"
#include "cmo/orlicz.hpp"
#include "cmo/parse.hpp"
#include "cmo/potential.hpp"
#include "cmo/rational.hpp"
#include "cmo/report.hpp"
#include "cmo/suites.hpp"
#include "cmo/test_function.hpp"
#include "cmo/verify.hpp"
