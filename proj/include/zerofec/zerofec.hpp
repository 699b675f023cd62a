#pragma once

// Umbrella header: the whole correction engine.

#include "zerofec/annotate.hpp"
#include "zerofec/backends.hpp"
#include "zerofec/data.hpp"
#include "zerofec/errors.hpp"
#include "zerofec/extract.hpp"
#include "zerofec/http_backend.hpp"
#include "zerofec/metrics.hpp"
#include "zerofec/mocks.hpp"
#include "zerofec/pipeline.hpp"
#include "zerofec/porter.hpp"
#include "zerofec/qa2claim.hpp"
#include "zerofec/scoring.hpp"
#include "zerofec/text.hpp"
#include "zerofec/types.hpp"
