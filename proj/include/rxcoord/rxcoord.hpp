#ifndef RXCOORD_RXCOORD_HPP
#define RXCOORD_RXCOORD_HPP

#include "rxcoord/align.hpp"
#include "rxcoord/corrratio.hpp"
#include "rxcoord/error.hpp"
#include "rxcoord/ingest.hpp"
#include "rxcoord/kernel.hpp"
#include "rxcoord/linalg.hpp"
#include "rxcoord/parallel.hpp"
#include "rxcoord/pca.hpp"
#include "rxcoord/pipeline.hpp"
#include "rxcoord/report.hpp"
#include "rxcoord/synth.hpp"
#include "rxcoord/types.hpp"

#endif  // RXCOORD_RXCOORD_HPP
