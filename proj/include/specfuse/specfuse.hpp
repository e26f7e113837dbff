#pragma once

#include "specfuse/batch.hpp"
#include "specfuse/blend.hpp"
#include "specfuse/errors.hpp"
#include "specfuse/filter.hpp"
#include "specfuse/image.hpp"
#include "specfuse/io.hpp"
#include "specfuse/metrics.hpp"
#include "specfuse/pca.hpp"
#include "specfuse/pyramid.hpp"
#include "specfuse/region_fusion.hpp"
#include "specfuse/spectral.hpp"
#include "specfuse/superpixel.hpp"
