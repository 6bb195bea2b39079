#pragma once

#include "flowbal/audit.hpp"
#include "flowbal/bounds.hpp"
#include "flowbal/circulation.hpp"
#include "flowbal/digraph.hpp"
#include "flowbal/engine.hpp"
#include "flowbal/generator.hpp"
#include "flowbal/max_flow.hpp"
#include "flowbal/network.hpp"
#include "flowbal/protocol.hpp"
#include "flowbal/rational.hpp"
#include "flowbal/scenario.hpp"
#include "flowbal/scenario_file.hpp"
#include "flowbal/sweep.hpp"
#include "flowbal/trace_csv.hpp"
