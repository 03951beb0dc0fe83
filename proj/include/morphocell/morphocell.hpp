#pragma once

// Everything except the HTTP service (morphocell/service.hpp), which pulls in
// cpp-httplib.

#include "morphocell/dsl.hpp"
#include "morphocell/error.hpp"
#include "morphocell/figures.hpp"
#include "morphocell/geometry.hpp"
#include "morphocell/io/json.hpp"
#include "morphocell/io/obj.hpp"
#include "morphocell/io/svg.hpp"
#include "morphocell/mesher.hpp"
#include "morphocell/spirals.hpp"
