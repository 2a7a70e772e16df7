#pragma once

#include "entsep/criteria.hpp"
#include "entsep/experiment.hpp"
#include "entsep/maps.hpp"
#include "entsep/matrix.hpp"
#include "entsep/scan.hpp"
#include "entsep/serialize.hpp"
#include "entsep/states.hpp"
#include "entsep/witness.hpp"
