#pragma once

// Exact state-vector simulator and security analyzer for entanglement
// swapping based key distribution under the correlation-preserving
// substitute-state attack, with closed-form metrics and angle optimization.

#include "transforms.hpp"
#include "qstate.hpp"
#include "attack.hpp"
#include "protocol.hpp"
#include "metrics.hpp"
#include "convention.hpp"
#include "optimize.hpp"
