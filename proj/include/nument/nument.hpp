#pragma once

#include "nument/analytic.hpp"
#include "nument/core.hpp"
#include "nument/entropy.hpp"
#include "nument/freefermion.hpp"
#include "nument/hilbert.hpp"
#include "nument/linalg.hpp"
#include "nument/locc.hpp"
#include "nument/models.hpp"
#include "nument/negativity.hpp"
#include "nument/random.hpp"
