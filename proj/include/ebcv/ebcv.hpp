#pragma once

#include "ebcv/types.hpp"
#include "ebcv/jet.hpp"
#include "ebcv/manifold.hpp"
#include "ebcv/homogeneous.hpp"
#include "ebcv/polynomial.hpp"
#include "ebcv/killing.hpp"
#include "ebcv/quaternion.hpp"
#include "ebcv/geodesic.hpp"
#include "ebcv/sampling.hpp"
#include "ebcv/expression.hpp"
#include "ebcv/paper_tables.hpp"
#include "ebcv/verify.hpp"
#include "ebcv/io.hpp"
#include "ebcv/commands.hpp"
