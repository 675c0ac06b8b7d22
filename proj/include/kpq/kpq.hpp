#pragma once

#include "kpq/surface.hpp"
#include "kpq/drawing.hpp"
#include "kpq/face_trace.hpp"
#include "kpq/canonical.hpp"
#include "kpq/duplication.hpp"
#include "kpq/enumeration.hpp"
#include "kpq/theorems.hpp"
#include "kpq/io.hpp"
