#pragma once

#include "ansatz.hpp"
#include "cutoff.hpp"
#include "dispatch.hpp"
#include "exact.hpp"
#include "fcidump.hpp"
#include "fermion.hpp"
#include "net.hpp"
#include "optimizer.hpp"
#include "partitioned.hpp"
#include "pauli.hpp"
#include "pipeline.hpp"
#include "planner.hpp"
#include "protocol.hpp"
#include "statevector.hpp"
#include "worker.hpp"
