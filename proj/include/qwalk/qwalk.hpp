#pragma once

// Umbrella header.

#include "qwalk/analysis.hpp"
#include "qwalk/basis.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/incidence.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/marked.hpp"
#include "qwalk/report.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"
