#pragma once

#include "chaindev/chain_distance.hpp"
#include "chaindev/cluster_tree.hpp"
#include "chaindev/development.hpp"
#include "chaindev/metric_space.hpp"
#include "chaindev/selfsim.hpp"
#include "chaindev/width.hpp"
