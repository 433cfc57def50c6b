#pragma once

#include "blm/conllu.hpp"
#include "blm/embeddings.hpp"
#include "blm/error.hpp"
#include "blm/experiments.hpp"
#include "blm/instance.hpp"
#include "blm/manifest.hpp"
#include "blm/pattern.hpp"
#include "blm/pipeline.hpp"
#include "blm/probe.hpp"
#include "blm/queries.hpp"
#include "blm/record.hpp"
#include "blm/report.hpp"
#include "blm/rng.hpp"
#include "blm/stats.hpp"
#include "blm/structure.hpp"
#include "blm/synthetic.hpp"
