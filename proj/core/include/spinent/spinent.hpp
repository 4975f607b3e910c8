#pragma once

#include "spinent/hilbert.hpp"
#include "spinent/oracle.hpp"
#include "spinent/optimize.hpp"
#include "spinent/thermo.hpp"
#include "spinent/thresholds.hpp"
#include "spinent/version.hpp"
#include "spinent/witness.hpp"
