#pragma once

#include "kirchhoff/bubble.hpp"
#include "kirchhoff/constants.hpp"
#include "kirchhoff/continuation.hpp"
#include "kirchhoff/descent.hpp"
#include "kirchhoff/discrete.hpp"
#include "kirchhoff/extremal.hpp"
#include "kirchhoff/fiber.hpp"
#include "kirchhoff/gate.hpp"
#include "kirchhoff/io.hpp"
#include "kirchhoff/mesh.hpp"
#include "kirchhoff/nehari.hpp"
#include "kirchhoff/parallel.hpp"
#include "kirchhoff/params.hpp"
#include "kirchhoff/phase.hpp"
#include "kirchhoff/roots.hpp"
#include "kirchhoff/starts.hpp"
#include "kirchhoff/verify.hpp"
