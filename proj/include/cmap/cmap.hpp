#pragma once

// Umbrella header: the whole engine in one include.

#include "cmap/clustering.hpp"
#include "cmap/config.hpp"
#include "cmap/cooccurrence.hpp"
#include "cmap/corpus.hpp"
#include "cmap/csv.hpp"
#include "cmap/embedding.hpp"
#include "cmap/errors.hpp"
#include "cmap/matrix.hpp"
#include "cmap/network.hpp"
#include "cmap/pipeline.hpp"
#include "cmap/render.hpp"
#include "cmap/rng.hpp"
#include "cmap/similarity.hpp"
#include "cmap/svg.hpp"
#include "cmap/tokenize.hpp"
#include "cmap/tsne.hpp"
#include "cmap/util.hpp"
