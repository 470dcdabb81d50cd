#pragma once

// Umbrella header.

#include "pntar/bench.hpp"
#include "pntar/engines.hpp"
#include "pntar/net.hpp"
#include "pntar/net_io.hpp"
#include "pntar/netgen.hpp"
#include "pntar/prefix.hpp"
#include "pntar/reachability.hpp"
#include "pntar/tar_relation.hpp"
#include "pntar/unfold.hpp"
