#pragma once

#include "occucert/core.hpp"
#include "occucert/matrix.hpp"
#include "occucert/graph.hpp"
#include "occucert/hardcore.hpp"
#include "occucert/linalg.hpp"
#include "occucert/special_functions.hpp"
#include "occucert/occupancy.hpp"
#include "occucert/demand.hpp"
#include "occucert/generators.hpp"
#include "occucert/campaign.hpp"
