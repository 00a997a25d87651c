#pragma once

#include "dpmbq/bq.hpp"
#include "dpmbq/conjugate_means.hpp"
#include "dpmbq/dp_mixture.hpp"
#include "dpmbq/kernel.hpp"
#include "dpmbq/metrics.hpp"
#include "dpmbq/nig.hpp"
#include "dpmbq/sampler.hpp"
#include "dpmbq/samples.hpp"
#include "dpmbq/student_t.hpp"
#include "dpmbq/testbed.hpp"
#include "dpmbq/version.hpp"
