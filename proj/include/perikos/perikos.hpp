#pragma once

// Everything except the JSON layer (serialize.hpp, cli.hpp).
#include "actions.hpp"
#include "ff_curve.hpp"
#include "formal_group.hpp"
#include "isocrystal.hpp"
#include "period_map.hpp"
#include "random.hpp"
