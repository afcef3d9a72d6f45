#pragma once

#include "poolrank/types.hpp"
#include "poolrank/metric.hpp"
#include "poolrank/joint_distance.hpp"
#include "poolrank/rerank.hpp"
#include "poolrank/pool_update.hpp"
#include "poolrank/synthetic.hpp"
#include "poolrank/eval.hpp"
#include "poolrank/io.hpp"
#include "poolrank/report.hpp"
