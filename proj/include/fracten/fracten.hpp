#ifndef FRACTEN_FRACTEN_HPP
#define FRACTEN_FRACTEN_HPP

#include "fracten/core.hpp"
#include "fracten/entropy.hpp"
#include "fracten/ingest.hpp"
#include "fracten/mfdfa.hpp"
#include "fracten/report.hpp"
#include "fracten/rng.hpp"
#include "fracten/shuffle.hpp"
#include "fracten/stats.hpp"
#include "fracten/version.hpp"

#endif  // FRACTEN_FRACTEN_HPP
