#pragma once

// Umbrella header: the whole library.

#include "softcover/bounds.hpp"
#include "softcover/channel_io.hpp"
#include "softcover/common.hpp"
#include "softcover/compositions.hpp"
#include "softcover/distribution.hpp"
#include "softcover/exponents.hpp"
#include "softcover/measures.hpp"
#include "softcover/simulator.hpp"
#include "softcover/sweep.hpp"
#include "softcover/typespace.hpp"
