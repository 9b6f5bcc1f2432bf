#pragma once

#include "slfm/container.hpp"
#include "slfm/diagnostics.hpp"
#include "slfm/errors.hpp"
#include "slfm/flow.hpp"
#include "slfm/network.hpp"
#include "slfm/paths.hpp"
#include "slfm/sphere.hpp"
#include "slfm/vec.hpp"
