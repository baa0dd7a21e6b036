#pragma once

// Umbrella header.

#include "disamb/corpus.hpp"
#include "disamb/graph.hpp"
#include "disamb/measures.hpp"
#include "disamb/features.hpp"
#include "disamb/classify.hpp"
#include "disamb/evaluate.hpp"
#include "disamb/relevance.hpp"
#include "disamb/lambda_model.hpp"
#include "disamb/synth.hpp"
