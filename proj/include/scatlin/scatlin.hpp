#pragma once

#include "numeric.hpp"
#include "linalg.hpp"
#include "fieldcore.hpp"
#include "linpoly.hpp"
#include "scattered.hpp"
#include "psifamily.hpp"
#include "parallel.hpp"
#include "mrdcodes.hpp"
#include "equivalence.hpp"
#include "projgeom.hpp"
#include "properties.hpp"
#include "sweep.hpp"
#include "report.hpp"
