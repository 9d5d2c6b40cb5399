#pragma once

#include "drn/error.hpp"
#include "drn/model.hpp"
#include "drn/dsl.hpp"
#include "drn/structure.hpp"
#include "drn/dynamics.hpp"
#include "drn/symbolic.hpp"
#include "drn/modularize.hpp"
#include "drn/input_layer.hpp"
#include "drn/report.hpp"
