#pragma once

#include "prodrank/baseline.hpp"
#include "prodrank/compare.hpp"
#include "prodrank/corpus.hpp"
#include "prodrank/csv.hpp"
#include "prodrank/error.hpp"
#include "prodrank/indicators.hpp"
#include "prodrank/parallel.hpp"
#include "prodrank/pipeline.hpp"
#include "prodrank/ranking.hpp"
#include "prodrank/report.hpp"
#include "prodrank/run_config.hpp"
#include "prodrank/synth.hpp"
