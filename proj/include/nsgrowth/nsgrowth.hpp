#pragma once

#include "nsgrowth/errors.hpp"
#include "nsgrowth/core_model.hpp"
#include "nsgrowth/diagnostics.hpp"
#include "nsgrowth/trajectory.hpp"
#include "nsgrowth/ns_solver.hpp"
#include "nsgrowth/bound_checks.hpp"
#include "nsgrowth/compactness.hpp"
#include "nsgrowth/config.hpp"
#include "nsgrowth/limit_lab.hpp"
#include "nsgrowth/output.hpp"
#include "nsgrowth/verify.hpp"
