#pragma once

#include "hgrec/baselines.hpp"
#include "hgrec/config.hpp"
#include "hgrec/corpus.hpp"
#include "hgrec/corpus_io.hpp"
#include "hgrec/error.hpp"
#include "hgrec/evaluation.hpp"
#include "hgrec/hypergraph.hpp"
#include "hgrec/metrics.hpp"
#include "hgrec/params.hpp"
#include "hgrec/path_similarity.hpp"
#include "hgrec/ranker.hpp"
#include "hgrec/recommendation.hpp"
#include "hgrec/recommender.hpp"
#include "hgrec/time.hpp"
#include "hgrec/wilcoxon.hpp"
