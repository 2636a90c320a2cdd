#ifndef JDR_JDR_HPP
#define JDR_JDR_HPP

#include "jdr/capacity.hpp"
#include "jdr/core_model.hpp"
#include "jdr/detection.hpp"
#include "jdr/experiments.hpp"
#include "jdr/noise.hpp"
#include "jdr/optimize.hpp"
#include "jdr/rng.hpp"
#include "jdr/special.hpp"

#endif  // JDR_JDR_HPP
