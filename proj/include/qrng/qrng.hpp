#pragma once

#include "qrng/bench.hpp"
#include "qrng/bitio.hpp"
#include "qrng/distributions.hpp"
#include "qrng/entropy.hpp"
#include "qrng/error.hpp"
#include "qrng/extractor.hpp"
#include "qrng/fft.hpp"
#include "qrng/pipeline.hpp"
#include "qrng/rng.hpp"
#include "qrng/source_sim.hpp"
#include "qrng/stattests.hpp"
