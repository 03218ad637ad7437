#pragma once

// Umbrella header for the RF fingerprinting toolkit.

#include "rffp/errors.hpp"
#include "rffp/rng.hpp"
#include "rffp/fft.hpp"
#include "rffp/signal.hpp"
#include "rffp/synth.hpp"
#include "rffp/wavelet.hpp"
#include "rffp/cwt.hpp"
#include "rffp/wst.hpp"
#include "rffp/feature_vector.hpp"
#include "rffp/stats.hpp"
#include "rffp/hht.hpp"
#include "rffp/features.hpp"
#include "rffp/pca.hpp"
#include "rffp/sdae.hpp"
#include "rffp/lof.hpp"
#include "rffp/hierarchy.hpp"
#include "rffp/dataset.hpp"
